#include "wishart/laguerre.hpp"

#include <cmath>
#include <string>

#include "wishart/errors.hpp"

namespace wishart {

LaguerreBasis LaguerreBasis::build(const ModelParams& p, int max_degree) {
  if (max_degree < p.n() + 2) {
    throw ConfigError("Laguerre basis needs max_degree >= N + 2");
  }
  if (max_degree > kMaxLaguerreDegree) {
    throw ConfigError("Laguerre max_degree exceeds " + std::to_string(kMaxLaguerreDegree));
  }
  LaguerreBasis b;
  b.params_ = p;
  b.max_degree_ = max_degree;
  const double m = p.m();
  const double alpha = p.alpha();
  b.a_.resize(max_degree + 1);
  b.b_.resize(max_degree + 1);
  b.log_h_.resize(max_degree + 1);
  for (int n = 0; n <= max_degree; ++n) {
    b.a_[n] = (2.0 * n + alpha + 1.0) / m;
    b.b_[n] = n * (n + alpha) / (m * m);
    b.log_h_[n] = std::lgamma(n + 1.0) + std::lgamma(n + alpha + 1.0) -
                  (2.0 * n + alpha + 1.0) * std::log(m);
  }
  return b;
}

double LaguerreBasis::norm(int n) const { return std::exp(log_norm(n)); }

void LaguerreBasis::check_degree(int n) const {
  if (n < 0 || n > max_degree_) {
    throw ConfigError("Laguerre degree " + std::to_string(n) + " out of range");
  }
}

Poly LaguerreBasis::monomial_form(int n) const {
  check_degree(n);
  Poly prev = Poly::constant(1.0);
  if (n == 0) return prev;
  const Poly x = Poly::monomial(1);
  Poly cur = x - Poly::constant(a_[0]);
  for (int k = 1; k < n; ++k) {
    Poly next = (x - Poly::constant(a_[k])) * cur - prev * cplx(b_[k]);
    prev = cur;
    cur = next;
  }
  return cur;
}

std::vector<cplx> LaguerreBasis::expand(const Poly& f) const {
  const int d = f.degree();
  check_degree(std::max(d, 0));
  std::vector<cplx> c(std::max(d, 0) + 1, 0.0);
  Poly rest = f;
  for (int k = d; k >= 0; --k) {
    const cplx lead = rest.coeff(k);
    c[k] = lead;
    rest = rest - monomial_form(k) * lead;
  }
  return c;
}

cplx eval_expansion(const LaguerreBasis& basis, const std::vector<cplx>& c,
                    double x) {
  std::vector<double> l;
  basis.eval_all(x, static_cast<int>(c.size()), l);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) acc += c[k] * l[k];
  return acc;
}

double cd_numerator(const LaguerreBasis& basis, double x, double y) {
  const int n = basis.params().n();
  std::vector<double> lx, ly;
  basis.eval_all(x, n + 1, lx);
  basis.eval_all(y, n + 1, ly);
  return lx[n] * ly[n - 1] - ly[n] * lx[n - 1];
}

cplx cd_kernel_k2(const LaguerreBasis& basis, cplx t, double x, double y) {
  const ModelParams& p = basis.params();
  const int n = p.n();
  const double hn1 = basis.norm(n - 1);
  double cd = 0.0;
  if (x == y) {
    std::vector<double> v, d;
    basis.eval_all_d(x, n + 1, v, d);
    cd = (d[n] * v[n - 1] - v[n] * d[n - 1]) / hn1;
  } else if (std::abs(x - y) < 1e-3 * (1.0 + std::abs(x))) {
    // Christoffel sum; same value without the cancellation in CD / (x - y).
    std::vector<double> lx, ly;
    basis.eval_all(x, n, lx);
    basis.eval_all(y, n, ly);
    for (int j = 0; j < n; ++j) cd += lx[j] * ly[j] / basis.norm(j);
  } else {
    cd = cd_numerator(basis, x, y) / (hn1 * (x - y));
  }
  const cplx w0_over_w =
      std::exp(-0.5 * p.m() * y + 0.5 * (p.m() - p.n() + 1) * std::log(y)) *
      std::sqrt(t - p.tau_tilde() * y);
  return weight_w(p, t, x) * w0_over_w * cd;
}

}  // namespace wishart
