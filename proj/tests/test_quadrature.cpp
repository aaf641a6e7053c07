#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "wishart/errors.hpp"
#include "wishart/quadrature.hpp"

using namespace wishart;

TEST_CASE("Gauss-Legendre is exact for polynomials") {
  const auto& g = gauss_legendre(16);
  for (int d = 0; d < 32; ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
    const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
    CHECK(std::abs(s - exact) < 1e-14);
  }
}

TEST_CASE("rule nodes stay inside the support") {
  const ModelParams p(4, 8, 1.0);
  for (const auto& r : {QuadratureRule::halfline(p, 200, 6), QuadratureRule::identity(1.0, 3.0, 40),
                        QuadratureRule::sin_square(0.0, 1.0, 40)}) {
    for (double x : r.nodes()) {
      CHECK(x > r.lower());
      CHECK(x < r.upper());
    }
  }
}

TEST_CASE("half-line integral of a Gamma density") {
  const ModelParams p(4, 8, 1.0);
  const auto r = QuadratureRule::halfline(p, 200, 6);
  const cplx v = integrate_halfline([](double x) { return cplx(std::pow(x, 4) * std::exp(-8 * x)); }, r);
  const double exact = 24.0 / std::pow(8.0, 5);
  CHECK(std::abs(v - exact) < 1e-13 * exact);
  CHECK(integrate_halfline([](double) { return cplx(0.0); }, r) == cplx(0.0));
}

TEST_CASE("endpoint-absorbing rule handles an inverse square root") {
  const auto r = QuadratureRule::sin_square(0.0, 1.0, 64);
  const cplx v = integrate_halfline([](double x) { return cplx(1.0 / std::sqrt(1.0 - x)); }, r);
  CHECK(std::abs(v - 2.0) < 1e-8);
}

TEST_CASE("non-finite samples are reported") {
  const auto r = QuadratureRule::identity(0.0, 1.0, 16);
  CHECK_THROWS_AS(
      integrate_halfline([](double) { return cplx(std::numeric_limits<double>::quiet_NaN()); }, r),
      QuadratureError);
}

TEST_CASE("epsilon transform") {
  const auto r = QuadratureRule::identity(0.0, 60.0, 400);
  auto f = [](double y) { return cplx(std::exp(-y)); };
  SUBCASE("far right end gives kappa times the total") {
    CHECK(std::abs(epsilon_transform(f, r, 60.0) - kEpsilonKappa) < 1e-12);
    CHECK(std::abs(epsilon_transform(f, r, 0.0) + kEpsilonKappa) < 1e-12);
  }
  SUBCASE("closed form at interior points") {
    for (double x : {0.3, 1.0, 2.5, 7.0}) {
      const double exact = kEpsilonKappa * ((1 - std::exp(-x)) - std::exp(-x));
      CHECK(std::abs(epsilon_transform(f, r, x) - exact) < 1e-12);
    }
  }
  SUBCASE("derivative equals 2 kappa f") {
    const double h = 1e-4;
    for (int i = 1; i <= 10; ++i) {
      const double x = 0.5 * i;
      const cplx fd = (epsilon_transform(f, r, x + h) - epsilon_transform(f, r, x - h)) / (2 * h);
      CHECK(std::abs(fd - 2.0 * kEpsilonKappa * f(x)) < 1e-6);
    }
  }
}

TEST_CASE("epsilon transform vanishes at the centre of a symmetric bump") {
  const auto r = QuadratureRule::identity(0.0, 2.0, 64);
  auto bump = [](double y) { return cplx(std::pow(std::sin(std::numbers::pi * y / 2), 2)); };
  CHECK(std::abs(epsilon_transform(bump, r, 1.0)) < 1e-13);
}

TEST_CASE("epsilon transform is linear") {
  const ModelParams p(4, 8, 1.0);
  const auto r = QuadratureRule::halfline(p, 200, 6);
  auto f = [](double y) { return cplx(y * std::exp(-y)); };
  auto g = [](double y) { return cplx(std::cos(y) * std::exp(-2 * y), y); };
  const cplx a(0.7, -1.2), b(2.0, 0.3);
  for (double x : {0.2, 1.7, 5.0}) {
    const cplx lhs = epsilon_transform([&](double y) { return a * f(y) + b * g(y); }, r, x);
    const cplx rhs = a * epsilon_transform(f, r, x) + b * epsilon_transform(g, r, x);
    CHECK(std::abs(lhs - rhs) < 1e-13 * std::abs(rhs) + 1e-15);
  }
}

TEST_CASE("cumulative integrals at nodes and off nodes") {
  const auto r = QuadratureRule::square({0.0, 1.0, 4.0}, {32, 64});
  std::vector<cplx> g(r.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::cos(r.nodes()[i]);
  const auto c = r.cumulative(g);
  for (std::size_t i = 0; i < g.size(); i += 17) CHECK(std::abs(c[i] - std::sin(r.nodes()[i])) < 1e-12);
  for (double x : {0.05, 0.9, 2.2, 3.99}) CHECK(std::abs(r.cumulative_at(g, x) - std::sin(x)) < 1e-11);
}
