#include <cmath>
#include <random>

#include "doctest.h"
#include "wishart/errors.hpp"
#include "wishart/skew.hpp"

using namespace wishart;

namespace {

Poly from_laguerre(const LaguerreBasis& b, const std::vector<cplx>& c) {
  Poly f;
  for (std::size_t k = 0; k < c.size(); ++k) f = f + b.monomial_form(static_cast<int>(k)) * c[k];
  return f;
}

// kappa int int_{a < b} [f(b) g(a) - f(a) g(b)] w(a) w(b) on [0, z] by a
// tensor Gauss-Legendre rule in b = z u^2, a = b s^2.
cplx naive_skew(const ModelParams& p, cplx t, const Poly& f, const Poly& g, double z) {
  const auto& gl = gauss_legendre(64);
  cplx s = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double u = 0.5 * (gl.nodes[i] + 1.0);
    const double b = z * u * u;
    const double jb = 0.5 * gl.weights[i] * 2.0 * z * u;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double v = 0.5 * (gl.nodes[j] + 1.0);
      const double a = b * v * v;
      const double ja = 0.5 * gl.weights[j] * 2.0 * b * v;
      s += jb * ja * (f(b) * g(a) - f(a) * g(b)) * weight_w(p, t, a) * weight_w(p, t, b);
    }
  }
  return kEpsilonKappa * s;
}

CMatrix random_antisymmetric(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd;
  CMatrix a = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      a(i, j) = cplx(nd(gen), nd(gen));
      a(j, i) = -a(i, j);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("Pfaffian") {
  CMatrix two(2, 2);
  two << 0.0, cplx(1.5, -2.0), cplx(-1.5, 2.0), 0.0;
  CHECK(std::abs(pfaffian(two) - cplx(1.5, -2.0)) < 1e-15);
  CMatrix j(2, 2);
  j << 0.0, 1.0, -1.0, 0.0;
  CHECK(pfaffian(j) == cplx(1.0));
  const CMatrix a = random_antisymmetric(4, 3);
  const cplx cof = a(0, 1) * a(2, 3) - a(0, 2) * a(1, 3) + a(0, 3) * a(1, 2);
  CHECK(std::abs(pfaffian(a) - cof) < 1e-13 * std::abs(cof));
  for (unsigned seed : {1u, 2u, 3u}) {
    const CMatrix b = random_antisymmetric(6, seed);
    const cplx pf = pfaffian(b);
    CHECK(std::abs(pf * pf - b.determinant()) < 1e-9 * std::abs(b.determinant()));
  }
  CHECK_THROWS_AS(pfaffian(CMatrix::Zero(3, 3)), ConfigError);
  CMatrix bad = random_antisymmetric(4, 5);
  bad(0, 1) += 1.0;
  CHECK_THROWS_AS(pfaffian(bad), ConfigError);
}

TEST_CASE("skew product basics") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, 8);
  const cplx t(2.0, 1.0);
  const auto form = SkewForm::halfline(p, t);
  for (int k = 0; k <= 5; ++k) {
    const Poly f = b.monomial_form(k);
    CHECK(std::abs(skew_product(form, f, f)) < 1e-16);
  }
  const auto set = build_skew_polys(b, form);
  const double scale = set.table.cwiseAbs().maxCoeff();
  CHECK((set.table + set.table.transpose()).cwiseAbs().maxCoeff() < 1e-12 * scale);
  for (int k : {1, 2}) CHECK(std::abs(set.table(2 * k, 2 * k - 1)) < 1e-7 * scale);
}

TEST_CASE("skew product against a naive double integral") {
  const ModelParams p(2, 4, 0.0);
  const double end = halfline_cutoff(p, 4);
  const auto form = SkewForm::halfline(p, 1.0, {}, 4);
  const cplx v = skew_product(form, Poly::monomial(0), Poly::monomial(1));
  const cplx oracle = naive_skew(p, 1.0, Poly::monomial(0), Poly::monomial(1), end);
  CHECK(std::abs(v - oracle) < 1e-8 * std::abs(oracle));
  const ModelParams q(4, 8, 1.0);
  const cplx t(2.0, 1.0);
  const auto fq = SkewForm::truncated(q, t, 3.0);
  const Poly f({1.0, -0.5, 0.25}), g({0.0, 2.0, 0.0, 1.0});
  const cplx o2 = naive_skew(q, t, f, g, 3.0);
  CHECK(std::abs(skew_product(fq, f, g) - o2) < 1e-8 * std::abs(o2));
}

TEST_CASE("second inner product") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, 10);
  const int a = p.alpha();
  for (int j = 0; j <= 6; ++j) {
    const cplx v = inner_product_2(p, Poly::monomial(j + 1), b.monomial_form(j));
    const double expect = static_cast<double>((a + j + 1) * (j + 1)) / p.m() * b.norm(j);
    CHECK(std::abs(v - expect) < 1e-10 * expect);
  }
  CHECK(inner_product_2(p, Poly(), b.monomial_form(2)) == cplx(0.0));
}

TEST_CASE("H_j polynomials") {
  const ModelParams p(4, 8, 1.0);
  const cplx t(2.0, 1.0);
  for (int j = 0; j <= 5; ++j) CHECK(h_poly(p, j, t).degree() == j + 2);
  SUBCASE("tau = 0 reduces to d/dx(x^{j+1} w) / w") {
    const ModelParams q(4, 8, 0.0);
    for (int j = 0; j <= 4; ++j) {
      const Poly h = h_poly(q, j, 1.0);
      CHECK(h.degree() == j + 1);
      CHECK(std::abs(h.coeff(j + 1) + 0.5 * q.m()) < 1e-14);
      CHECK(std::abs(h.coeff(j) - (j + 1 + q.w_power())) < 1e-14);
    }
  }
  SUBCASE("integration by parts") {
    const auto b = LaguerreBasis::build(p, 10);
    const auto form = SkewForm::halfline(p, t, {}, 10);
    for (int i = 0; i <= 5; ++i) {
      const Poly f = b.monomial_form(i);
      for (int j = 0; j <= 3; ++j) {
        const cplx lhs = skew_product(form, f, h_poly(p, j, t));
        const cplx rhs = inner_product_2(p, f, Poly::monomial(j));
        const double scale = std::sqrt(std::abs(inner_product_2(p, f, f)) *
                                       std::abs(inner_product_2(p, Poly::monomial(j), Poly::monomial(j))));
        CHECK(std::abs(lhs - rhs) < 1e-8 * scale);
      }
    }
  }
}

TEST_CASE("skew-orthogonal polynomials") {
  const ModelParams p(4, 8, 1.0);
  const int n = p.n();
  const auto b = LaguerreBasis::build(p, 10);
  const cplx t(2.0, 1.0);
  const auto form = SkewForm::halfline(p, t);
  const auto set = build_skew_polys(b, form);
  const Poly pn = from_laguerre(b, set.pi_n), pn1 = from_laguerre(b, set.pi_np1);
  double scale = 0.0;
  for (int i = 0; i <= n + 1; ++i) {
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(skew_product(form, b.monomial_form(i), Poly::monomial(j))));
    }
  }
  CHECK(pn.degree() == n);
  CHECK(std::abs(pn.coeff(n) - 1.0) < 1e-14);
  CHECK(std::abs(pn1.coeff(n + 1) - 1.0) < 1e-14);
  const cplx alpha(0.37, -1.4);
  for (int j = 0; j < n; ++j) {
    CHECK(std::abs(skew_product(form, pn, Poly::monomial(j))) < 1e-7 * scale);
    CHECK(std::abs(skew_product(form, pn1, Poly::monomial(j))) < 1e-7 * scale);
    CHECK(std::abs(skew_product(form, pn1 + pn * alpha, Poly::monomial(j))) < 1e-7 * scale);
  }
  CHECK(std::abs(set.pi_n[n - 2]) < 1e-12);
  for (int j = 0; j <= n - 3; ++j) {
    const Poly xj = Poly::monomial(j);
    const double s2 = std::sqrt(std::abs(inner_product_2(p, pn, pn)) * std::abs(inner_product_2(p, xj, xj)));
    CHECK(std::abs(inner_product_2(p, pn, xj)) < 1e-8 * s2);
  }
}

TEST_CASE("skew table is conjugation-symmetric in t") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, 8);
  const cplx t(1.0, 2.0);
  const auto s1 = build_skew_polys(b, SkewForm::halfline(p, t));
  const auto s2 = build_skew_polys(b, SkewForm::halfline(p, std::conj(t)));
  const double scale = s1.table.cwiseAbs().maxCoeff();
  CHECK((s1.table.conjugate() - s2.table).cwiseAbs().maxCoeff() < 1e-12 * scale);
}

TEST_CASE("moment matrix structure") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, 8);
  const cplx t(2.0, 1.0);
  const auto full = SkewForm::halfline(p, t);
  const auto set = build_skew_polys(b, full);
  const CMatrix m = moment_matrix(b, set, full);
  const double scale = m.cwiseAbs().maxCoeff();
  CHECK((m + m.transpose()).cwiseAbs().maxCoeff() < 1e-13 * scale);
  CHECK(m.block(0, 2, 2, 2).cwiseAbs().maxCoeff() < 1e-8 * scale);
  CHECK(std::abs(m(2, 3) - set.h_nm1_1) < 1e-12 * scale);
  CHECK(std::abs(m(2, 2)) + std::abs(m(3, 3)) < 1e-14 * scale);
  const CMatrix empty = moment_matrix(b, set, SkewForm::truncated(p, t, 0.0));
  CHECK(empty.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("de Bruijn constant at N = 2 is the same for every (t, z)") {
  const ModelParams p(2, 4, 1.0);
  const auto b = LaguerreBasis::build(p, 6);
  std::vector<cplx> ratios;
  for (auto [t, z] : {std::pair{cplx(2.0, 1.0), 1.5}, {cplx(1.0, 2.0), 3.0}, {cplx(3.0, -0.5), 5.0}}) {
    const auto set = build_skew_polys(b, SkewForm::halfline(p, t));
    const CMatrix m = moment_matrix(b, set, SkewForm::truncated(p, t, z));
    // Ordered integral of |l2 - l1| w w over l1 <= l2 <= z.
    const cplx ordered = -naive_skew(p, t, Poly::monomial(0), Poly::monomial(1), z) / kEpsilonKappa;
    ratios.push_back(pfaffian(m) / ordered);
  }
  for (const cplx r : ratios) CHECK(std::abs(r - ratios.front()) < 1e-9);
  CHECK(std::abs(ratios.front() + kEpsilonKappa) < 1e-9);
}

TEST_CASE("degenerate pivot is reported") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, 8);
  const auto set = build_skew_polys(b, SkewForm::halfline(p, cplx(2.0, 1.0)));
  CMatrix table = set.table;
  table(1, 0) = table(0, 1) = 0.0;
  CHECK_THROWS_AS(skew_pair(table, 1, 1e-10), DegenerateSkewProduct);
}
