#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wishart/errors.hpp"
#include "wishart/model.hpp"
#include "wishart/quadrature.hpp"

using namespace wishart;
using std::numbers::pi;

TEST_CASE("parameters are validated and serialised") {
  CHECK_THROWS_AS(ModelParams(3, 8, 1.0), ConfigError);
  CHECK_THROWS_AS(ModelParams(4, 4, 1.0), ConfigError);
  CHECK_THROWS_AS(ModelParams(4, 8, -0.5), ConfigError);
  const ModelParams p(4, 8, 1.0);
  CHECK(p.tau_tilde() == doctest::Approx(0.25));
  CHECK(p.gamma() == doctest::Approx(std::sqrt(0.5)));
  nlohmann::json j;
  to_json(j, p);
  CHECK(j["N"] == 4);
  CHECK(params_from_json(j) == p);
  CHECK_THROWS_AS(params_from_json(nlohmann::json{{"N", 4}}), ConfigError);
}

TEST_CASE("weight at tau = 0 loses the t factor") {
  for (int m : {6, 8, 12}) {
    const ModelParams p(4, m, 0.0);
    CHECK(std::abs(weight_w(p, 1.0, 1.0) - std::exp(-0.5 * m)) < 1e-15);
  }
}

TEST_CASE("weight closed form on the real axis") {
  const ModelParams p(4, 8, 1.0);
  const cplx v = weight_w(p, 2.0, 4.0);
  CHECK(std::abs(v - 8.0 * std::exp(-16.0)) < 1e-14 * 8.0 * std::exp(-16.0));
}

TEST_CASE("inverse square root branch matches the polar form") {
  const ModelParams p(4, 8, 1.0);
  const cplx t(0.0, 1.0);
  const cplx r = inv_sqrt_branch(p, t, 4.0);
  const cplx u = t - 1.0;
  CHECK(r.imag() != 0.0);
  CHECK(std::abs(r * r * u - 1.0) < 1e-14);
  const cplx polar = std::polar(1.0 / std::sqrt(std::abs(u)), -0.5 * std::arg(u));
  CHECK(std::abs(r - polar) < 1e-15);
  CHECK_THROWS_AS(inv_sqrt_branch(p, 1.0, 4.0), SingularPointError);
}

TEST_CASE("weight is positive for real t past the singular point and conjugation-symmetric") {
  const ModelParams p(4, 8, 1.0);
  for (double x : {0.1, 1.0, 3.0, 7.5}) {
    const cplx w = weight_w(p, p.tau_tilde() * x + 0.5, x);
    CHECK(w.real() > 0.0);
    CHECK(w.imag() == 0.0);
    const cplx t(1.3, 0.7);
    CHECK(std::abs(weight_w(p, std::conj(t), x) - std::conj(weight_w(p, t, x))) <
          1e-15 * std::abs(weight_w(p, t, x)));
  }
}

TEST_CASE("Marchenko-Pastur density") {
  const ModelParams p(4, 16, 0.0);
  const auto [lo, hi] = mp_edges(p);
  CHECK(lo == doctest::Approx(0.25));
  CHECK(hi == doctest::Approx(2.25));
  CHECK(mp_density(p, 10.0) == 0.0);
  CHECK(mp_density(p, lo) == 0.0);
  CHECK(mp_density(p, hi) == 0.0);
  for (int m : {6, 8, 16, 64}) {
    const ModelParams q(4, m, 0.0);
    const auto [a, b] = mp_edges(q);
    const auto r = QuadratureRule::sin_square(a, b, 64);
    double mass = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) mass += r.weights()[i] * mp_density(q, r.nodes()[i]);
    CHECK(std::abs(mass - 1.0) < 1e-10);
  }
}

TEST_CASE("contour geometry") {
  const auto c = make_contour(1.0, 4, 0.5);
  CHECK(c.radius == doctest::Approx(1.0));
  CHECK(c.center == cplx(0.5, 0.0));
  for (int k = 0; k < 4; ++k) {
    const cplx expect = 0.5 + std::polar(1.0, pi / 4 + k * pi / 2);
    CHECK(std::abs(c.nodes[k] - expect) < 1e-15);
    CHECK(c.nodes[k].imag() != 0.0);
  }
  CHECK(c.encloses(0.0, 1.0));
  CHECK_FALSE(c.encloses(0.0, 1.6));
  CHECK_THROWS_AS(make_contour(1.0, 64, 0.0), ConfigError);
  CHECK_THROWS_AS(make_contour(1.0, 63, 0.5), ConfigError);
}

TEST_CASE("contour integrals of simple functions") {
  const auto c = make_contour(1.0, 64, 0.5);
  std::vector<cplx> f(c.nodes.size()), g(c.nodes.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = 1.0 / (c.nodes[k] - 0.3);
    g[k] = c.nodes[k];
  }
  CHECK(std::abs(c.integrate(f) - cplx(0.0, 2.0 * pi)) < 1e-10);
  CHECK(std::abs(c.integrate(g)) < 1e-12);
  const auto rw = c.residue_weights();
  cplx s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += rw[k] * f[k];
  CHECK(std::abs(s - 1.0) < 1e-10);
}

TEST_CASE("polynomial over a simple pole integrates to its residue") {
  const int n = 32;
  const auto c = make_contour(1.0, n, 0.5);
  const double a = 0.3;
  for (int d = 0; d < n / 2; ++d) {
    std::vector<cplx> v(c.nodes.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::pow(c.nodes[k], d) / (c.nodes[k] - a);
    const cplx res = cplx(0.0, 2.0 * pi) * std::pow(a, d);
    CHECK(std::abs(c.integrate(v) - res) < 1e-10 * std::max(1.0, std::abs(res)));
  }
}
