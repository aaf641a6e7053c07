#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wishart/kernel.hpp"

using namespace wishart;

namespace {

// Separate tau = 0 kernel: monomial basis, nested Gauss-Legendre in x = v^2.
struct NullKernel {
  ModelParams p;
  double end = 20.0;
  CMatrix mu;

  double w(double x) const { return std::exp(-0.5 * p.m() * x) * std::pow(x, p.w_power()); }
  double phi(int j, double x) const { return std::pow(x, j) * w(x); }

  double integral(int j, double a, double b) const {
    const auto& gl = gauss_legendre(48);
    const double va = std::sqrt(a), vb = std::sqrt(b);
    double s = 0.0;
    const int panels = 4;
    for (int k = 0; k < panels; ++k) {
      const double lo = va + (vb - va) * k / panels, hi = va + (vb - va) * (k + 1) / panels;
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double v = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[i];
        s += 0.5 * (hi - lo) * gl.weights[i] * 2.0 * v * phi(j, v * v);
      }
    }
    return s;
  }
  double psi(int j, double y) const { return 0.5 * (integral(j, 0.0, y) - integral(j, y, end)); }

  explicit NullKernel(const ModelParams& q) : p(q) {
    const int n = p.n();
    CMatrix a = CMatrix::Zero(n, n);
    const auto& gl = gauss_legendre(48);
    const double vb = std::sqrt(end);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double v = 0.5 * vb * (gl.nodes[i] + 1.0);
      const double q = 0.5 * vb * gl.weights[i] * 2.0 * v;
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) a(j, k) += q * phi(j, v * v) * psi(k, v * v);
      }
    }
    mu = a.inverse();
  }
  cplx s1(double x, double y) const {
    cplx s = 0.0;
    for (int j = 0; j < p.n(); ++j) {
      for (int k = 0; k < p.n(); ++k) s -= phi(j, x) * mu(j, k) * psi(k, y);
    }
    return s;
  }
};

const std::vector<double> kGrid = {0.2, 0.6, 1.0, 1.7, 2.6};

}  // namespace

TEST_CASE("trace of S1 is N at every t") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  for (cplx t : {cplx(2, 1), cplx(1, 2), cplx(-0.5, 1.5)}) {
    const auto k = KernelBundle::brute_force(b, t);
    const auto& r = k.form().rule();
    cplx tr = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) tr += r.weights()[i] * k.s1(r.nodes()[i], r.nodes()[i]);
    CHECK(std::abs(tr - 4.0) < 1e-7 * 4.0);
  }
}

TEST_CASE("tau = 0 kernel matches a separate null computation") {
  const ModelParams p(4, 8, 0.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const auto k = KernelBundle::brute_force(b, 1.0);
  const NullKernel ref(p);
  for (double x : {0.3, 0.9, 2.0}) {
    for (double y : {0.4, 1.3}) {
      const cplx r = ref.s1(x, y);
      CHECK(std::abs(k.s1(x, y) - r) < 1e-8 * std::abs(r));
    }
  }
}

TEST_CASE("S1 does not depend on the choice of the lower basis polynomials") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const auto form = SkewForm::halfline(p, cplx(2, 1));
  const auto k0 = KernelBundle::brute_force(b, form);
  CMatrix rows = r_basis(k0.skew_set(), p.n());
  rows(1, 0) += 0.3;
  const auto k1 = KernelBundle::brute_force(b, form, rows);
  for (double x : kGrid) {
    for (double y : kGrid) CHECK(std::abs(k1.s1(x, y) - k0.s1(x, y)) < 1e-8 * std::abs(k0.s1(x, y)) + 1e-14);
  }
}

TEST_CASE("IS1 antisymmetry and the y-derivative") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const auto k = KernelBundle::brute_force(b, cplx(2, 1));
  double scale = 0.0;
  for (double x : kGrid) {
    for (double y : kGrid) scale = std::max(scale, std::abs(k.is1(x, y)));
  }
  for (double x : kGrid) {
    CHECK(std::abs(k.is1(x, x)) < 1e-12 * scale);
    for (double y : kGrid) CHECK(std::abs(k.is1(x, y) + k.is1(y, x)) < 1e-12 * scale);
  }
  const double h = 1e-5;
  for (auto [x, y] : {std::pair{0.5, 0.8}, {1.0, 2.0}, {2.0, 0.3}, {1.5, 1.5}, {3.0, 1.1}}) {
    const cplx fd = (k.s1(x, y + h) - k.s1(x, y - h)) / (2 * h);
    CHECK(std::abs(-fd - k.ds1(x, y)) < 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("brute force and Christoffel-Darboux forms agree") {
  for (double tau : {0.3, 1.0}) {
    const ModelParams p(4, 8, tau);
    const auto b = LaguerreBasis::build(p, p.n() + 2);
    for (cplx t : {cplx(2, 1), cplx(1, 2), cplx(3, -1)}) {
      const auto form = SkewForm::halfline(p, t);
      const auto bf = KernelBundle::brute_force(b, form);
      const auto cd = KernelBundle::cd_corrected(b, form);
      double worst = 0.0;
      for (double x : kGrid) {
        for (double y : kGrid) {
          const cplx a = bf.s1(x, y);
          worst = std::max(worst, std::abs(cd.s1(x, y) - a) / std::abs(a));
        }
      }
      CHECK(worst < 1e-6);
    }
  }
}

TEST_CASE("correction matrix") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const cplx t(2, 1);
  const CMatrix a = correction_matrix(b, t);
  CHECK(a(0, 0) == cplx(0.0));
  CHECK(std::abs(a(0, 1) + p.m() * p.tau_tilde() / (2 * b.norm(3))) < 1e-12 * std::abs(a(0, 1)));
  const CMatrix a0 = correction_matrix(LaguerreBasis::build(ModelParams(4, 8, 0.0), 6), t);
  CHECK(a0(0, 1) == cplx(0.0));
  CHECK(a0(1, 0) == cplx(0.0));
  const auto set = build_skew_polys(b, SkewForm::halfline(p, t));
  const CMatrix c = correction_entries(b, set);
  const CMatrix ab = a * correction_table_block(set, p.n());
  CHECK((c.transpose() - ab).cwiseAbs().maxCoeff() < 1e-8 * ab.cwiseAbs().maxCoeff());
}

TEST_CASE("multi-orthogonal polynomials") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const auto form = SkewForm::halfline(p, cplx(2, 1));
  const auto r = check_multi_orthogonality(b, form);
  CHECK(r.solvable);
  CHECK(r.residual < 1e-7);
  const cplx target(0.0, -2.0 * std::numbers::pi);
  CHECK(std::abs(r.moments(0, 0) - target) < 1e-7);
  CHECK(std::abs(r.moments(1, 1) - target) < 1e-7);
  CHECK(std::abs(r.moments(0, 1)) < 1e-7);
  CHECK(std::abs(r.moments(1, 0)) < 1e-7);
  CHECK(std::abs(r.det_direct - r.det_lemma) < 1e-8 * std::abs(r.det_direct));
  CHECK_FALSE(check_multi_orthogonality(b, form, cplx(0.0)).solvable);
}

TEST_CASE("kernel entries are conjugation-symmetric in t") {
  const ModelParams p(4, 8, 1.0);
  const auto b = LaguerreBasis::build(p, p.n() + 2);
  const cplx t(1.5, 0.8);
  const auto k1 = KernelBundle::brute_force(b, t);
  const auto k2 = KernelBundle::brute_force(b, std::conj(t));
  for (double x : {0.4, 1.2}) {
    for (double y : {0.7, 2.2}) {
      CHECK(std::abs(k2.s1(x, y) - std::conj(k1.s1(x, y))) < 1e-11 * std::abs(k1.s1(x, y)));
      CHECK(std::abs(k2.is1(x, y) - std::conj(k1.is1(x, y))) < 1e-11 * std::abs(k1.is1(x, y)));
      CHECK(std::abs(k2.ds1(x, y) - std::conj(k1.ds1(x, y))) < 1e-11 * std::abs(k1.ds1(x, y)));
    }
  }
}
