#include "wishart/zonal.hpp"

#include <cmath>
#include <numbers>

#include "wishart/errors.hpp"

namespace wishart {

std::string to_string(ZonalFamily f) {
  switch (f) {
    case ZonalFamily::real: return "real";
    case ZonalFamily::complex: return "complex";
    case ZonalFamily::quaternionic: return "quaternionic";
  }
  return "?";
}

ZonalFamily zonal_family_from_string(const std::string& s) {
  if (s == "real") return ZonalFamily::real;
  if (s == "complex") return ZonalFamily::complex;
  if (s == "quaternionic") return ZonalFamily::quaternionic;
  throw ConfigError("unknown zonal family: " + s);
}

int family_power(ZonalFamily f) {
  switch (f) {
    case ZonalFamily::real: return 1;
    case ZonalFamily::complex: return 2;
    case ZonalFamily::quaternionic: return 4;
  }
  return 1;
}

double log_zonal_d(ZonalFamily f, int k) {
  const double ln2 = std::numbers::ln2;
  switch (f) {
    case ZonalFamily::real:
      // (2k-1)!! = (2k)! / (2^k k!)
      return -(std::lgamma(2.0 * k + 1) - k * ln2 - std::lgamma(k + 1.0));
    case ZonalFamily::complex:
      return -(k * ln2 + std::lgamma(k + 1.0));
    case ZonalFamily::quaternionic:
      return -(std::lgamma(k + 2.0) + k * ln2);
  }
  return 0.0;
}

ZonalSeries zonal_row(const std::vector<double>& x, int max_k, ZonalFamily family) {
  if (max_k < 0 || max_k > kMaxZonalOrder) {
    throw ConfigError("zonal order must lie in [0, " + std::to_string(kMaxZonalOrder) + "]");
  }
  const double half_p = 0.5 * family_power(family);
  // Coefficients of prod (1 - 2 theta x_i)^{-p/2}, one factor at a time.
  std::vector<double> a(max_k + 1, 0.0);
  a[0] = 1.0;
  for (double xi : x) {
    std::vector<double> b(max_k + 1);
    b[0] = 1.0;
    for (int k = 1; k <= max_k; ++k) b[k] = b[k - 1] * (half_p + k - 1) / k * 2.0 * xi;
    std::vector<double> c(max_k + 1, 0.0);
    for (int i = 0; i <= max_k; ++i) {
      for (int j = 0; i + j <= max_k; ++j) c[i + j] += a[i] * b[j];
    }
    a = std::move(c);
  }
  ZonalSeries s;
  s.x = x;
  s.max_k = max_k;
  s.family = family;
  s.coefficients.resize(max_k + 1);
  for (int k = 0; k <= max_k; ++k) {
    const double v = a[k] * std::exp(std::lgamma(k + 1.0) + log_zonal_d(family, k));
    if (!std::isfinite(v)) throw NumericalError("zonal coefficient overflow at k=" + std::to_string(k));
    s.coefficients[k] = v;
  }
  return s;
}

double zonal_at_identity(int n, int k) {
  return std::exp(std::lgamma(0.5 * n + k) + k * std::numbers::ln2 - std::lgamma(0.5 * n) +
                  log_zonal_d(ZonalFamily::real, k));
}

SeriesValue residue_series(const std::vector<double>& x, double y, double m, int max_k,
                           ZonalFamily family) {
  if (!(m > 0.0)) throw ConfigError("M must be positive");
  const auto z = zonal_row(x, max_k, family);
  const double a = 0.5 * family_power(family) * static_cast<double>(x.size());
  SeriesValue out;
  for (int k = 0; k <= max_k; ++k) {
    if (z.coefficients[k] == 0.0) continue;
    if (y == 0.0 && k > 0) break;
    const double log_mag = (k > 0 ? k * std::log(std::abs(y)) : 0.0) +
                           (a + k - 1.0) * std::log(m) - k * std::numbers::ln2 -
                           std::lgamma(k + 1.0) - log_zonal_d(family, k) -
                           std::lgamma(a + k);
    const double sign = (y < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
    out.value += sign * z.coefficients[k] * std::exp(log_mag);
  }
  double r = 0.0;
  for (double xi : x) r = std::max(r, std::abs(xi));
  const double rho = r * std::abs(y) * m;
  if (rho > 0.0) {
    out.tail_bound = std::exp((a - 1.0) * std::log(m) - std::lgamma(a) +
                              (max_k + 1) * std::log(rho) - std::lgamma(max_k + 2.0) + rho);
  }
  return out;
}

cplx residue_contour(const std::vector<double>& x, double y, double m, ZonalFamily family,
                     int nodes) {
  const int p = family_power(family);
  if ((p * static_cast<int>(x.size())) % 2 != 0) {
    throw ConfigError("contour form needs N p / 2 integral (even N for the real family)");
  }
  double lo = 0.0, hi = 0.0;
  for (double xi : x) {
    lo = std::min(lo, xi * y);
    hi = std::max(hi, xi * y);
  }
  const auto c = make_contour_around(lo, hi, nodes, 1.0);
  std::vector<cplx> values(c.nodes.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const cplx t = c.nodes[k];
    cplx v = std::exp(m * t);
    for (double xi : x) {
      const cplx u = t - xi * y;
      if (p == 1) v /= std::sqrt(u);
      else if (p == 2) v /= u;
      else v /= u * u;
    }
    values[k] = v;
  }
  return c.integrate(values) / cplx(0.0, 2.0 * std::numbers::pi);
}

double haar_prefactor(int n, double m, ZonalFamily family) {
  const double a = 0.5 * family_power(family) * n;
  return std::exp(std::lgamma(a) + (1.0 - a) * std::log(m));
}

namespace {

ZonalCheckReport run_check(ZonalFamily family, const std::vector<double>& x, double y,
                           double m, int max_k, const std::optional<McConfig>& mc) {
  if (x.empty()) throw ConfigError("zonal check needs at least one eigenvalue");
  ZonalCheckReport r;
  r.family = family;
  r.series = residue_series(x, y, m, max_k, family);
  const int n = static_cast<int>(x.size());
  if ((family_power(family) * n) % 2 == 0) {
    r.has_contour = true;
    r.contour = residue_contour(x, y, m, family);
    r.rel_diff = std::abs(r.contour - r.series.value) / std::abs(r.series.value);
  }
  if (mc && family != ZonalFamily::quaternionic) {
    McConfig cfg = *mc;
    cfg.n = n;
    cfg.m = static_cast<int>(std::lround(m));
    if (std::abs(cfg.m - m) > 0.0) throw ConfigError("Haar Monte-Carlo needs integral M");
    r.has_mc = true;
    r.haar = family == ZonalFamily::real ? haar_orthogonal_integral(cfg, x, y)
                                         : haar_unitary_integral(cfg, x, y);
    r.haar_predicted =
        haar_prefactor(n, m, family) * residue_series(x, -y, m, max_k, family).value;
    // Constant integrands give se = 0; rounding sets the floor.
    const double se = std::max(r.haar.se, 1e-12 * std::abs(r.haar_predicted));
    r.haar_z = std::abs(r.haar.mean - r.haar_predicted) / se;
  }
  return r;
}

}  // namespace

ZonalCheckReport zonal_identity_check(const std::vector<double>& x, double y, double m,
                                      int max_k, const std::optional<McConfig>& mc) {
  return run_check(ZonalFamily::real, x, y, m, max_k, mc);
}

ZonalCheckReport unitary_symplectic_identity_check(ZonalFamily family,
                                                   const std::vector<double>& x, double y,
                                                   double m, int max_k,
                                                   const std::optional<McConfig>& mc) {
  if (family == ZonalFamily::real) throw ConfigError("use zonal_identity_check for O(N)");
  return run_check(family, x, y, m, max_k, mc);
}

}  // namespace wishart
