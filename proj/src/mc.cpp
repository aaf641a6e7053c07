#include "wishart/mc.hpp"

#include <algorithm>
#include <cmath>

#include "wishart/errors.hpp"
#include "wishart/parallel.hpp"

namespace wishart {

McConfig McConfig::from(const ModelParams& p, std::uint64_t seed, long n_samples) {
  McConfig c;
  c.seed = seed;
  c.n_samples = n_samples;
  c.n = p.n();
  c.m = p.m();
  c.tau = p.tau();
  return c;
}

void McConfig::validate() const {
  if (n < 1 || m < 1) throw ConfigError("Monte-Carlo needs N >= 1 and M >= 1");
  if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

GaussianStream::GaussianStream(std::uint64_t seed, std::uint64_t index)
    : eng_(splitmix64(seed ^ splitmix64(index))) {}

double GaussianStream::uniform() {
  return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
}

double GaussianStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

namespace {

struct Moments {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / static_cast<double>(total);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(total);
    n = total;
  }
  McEstimate estimate() const {
    McEstimate e;
    e.n = n;
    e.mean = mean;
    e.se = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
    return e;
  }
};

long chunk_count(long n) { return (n + kMcChunk - 1) / kMcChunk; }

/// Mean of f(stream) over cfg.n_samples draws, reduced chunk by chunk in order.
template <class F>
McEstimate mc_mean(const McConfig& cfg, F f) {
  cfg.validate();
  const long chunks = chunk_count(cfg.n_samples);
  std::vector<Moments> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    GaussianStream g(cfg.seed, c);
    const long begin = static_cast<long>(c) * kMcChunk;
    const long end = std::min(cfg.n_samples, begin + kMcChunk);
    for (long i = begin; i < end; ++i) parts[c].add(f(g));
  });
  Moments all;
  for (const auto& p : parts) all.merge(p);
  return all.estimate();
}

Eigen::VectorXd wishart_eigs(GaussianStream& g, const McConfig& cfg) {
  Eigen::MatrixXd x(cfg.n, cfg.m);
  const double spike = std::sqrt(1.0 + cfg.tau);
  for (int j = 0; j < cfg.m; ++j) {
    for (int i = 0; i < cfg.n; ++i) x(i, j) = g.normal();
  }
  x.row(0) *= spike;
  const Eigen::MatrixXd s = x * x.transpose() / static_cast<double>(cfg.m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::vector<double> sample_eigs(const McConfig& cfg, bool all) {
  cfg.validate();
  const long chunks = chunk_count(cfg.n_samples);
  const int per = all ? cfg.n : 1;
  std::vector<double> out(static_cast<std::size_t>(cfg.n_samples) * per);
  parallel_for(chunks, [&](std::size_t c) {
    GaussianStream g(cfg.seed, c);
    const long begin = static_cast<long>(c) * kMcChunk;
    const long end = std::min(cfg.n_samples, begin + kMcChunk);
    for (long i = begin; i < end; ++i) {
      const auto ev = wishart_eigs(g, cfg);
      if (all) {
        for (int k = 0; k < cfg.n; ++k) out[i * per + k] = ev[k];
      } else {
        out[i] = ev[cfg.n - 1];
      }
    }
  });
  return out;
}

}  // namespace

std::vector<double> sample_wishart_max_eig(const McConfig& cfg) {
  return sample_eigs(cfg, false);
}

std::vector<double> sample_wishart_eigs(const McConfig& cfg) { return sample_eigs(cfg, true); }

Eigen::MatrixXd haar_orthogonal(GaussianStream& g, int n) {
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = g.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

Eigen::MatrixXcd haar_unitary(GaussianStream& g, int n) {
  Eigen::MatrixXcd a(n, n);
  const double s = std::sqrt(0.5);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) a(i, j) = cplx(s * g.normal(), s * g.normal());
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

McEstimate sphere_integral_oracle(const McConfig& cfg, const std::vector<double>& lambdas) {
  const int n = static_cast<int>(lambdas.size());
  if (n < 1) throw ConfigError("sphere integral needs at least one lambda");
  const double tt = cfg.tau / (2.0 * (1.0 + cfg.tau));
  double log_pre = 0.0;
  for (double l : lambdas) log_pre -= 0.5 * cfg.m * l;
  const double pre = std::exp(log_pre);
  auto est = mc_mean(cfg, [&](GaussianStream& g) {
    double norm2 = 0.0, acc = 0.0;
    std::vector<double> u(n);
    for (int j = 0; j < n; ++j) {
      u[j] = g.normal();
      norm2 += u[j] * u[j];
    }
    for (int j = 0; j < n; ++j) acc += lambdas[j] * u[j] * u[j];
    return std::exp(tt * cfg.m * acc / norm2);
  });
  est.mean *= pre;
  est.se *= pre;
  return est;
}

cplx contour_integral_I(const ModelParams& p, const std::vector<double>& lambdas,
                        const ContourSpec& contour) {
  if (lambdas.size() % 2 != 0) throw ConfigError("contour_integral_I needs an even count");
  const double tt = p.tau_tilde();
  double lo = 0.0, hi = 0.0, log_pre = 0.0;
  for (double l : lambdas) {
    lo = std::min(lo, tt * l);
    hi = std::max(hi, tt * l);
    log_pre -= 0.5 * p.m() * l;
  }
  if (!contour.encloses(lo, hi)) throw ConfigError("contour must enclose every tau_tilde*lambda");
  std::vector<cplx> values(contour.nodes.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const cplx t = contour.nodes[k];
    cplx v = std::exp(static_cast<double>(p.m()) * t);
    for (double l : lambdas) v /= std::sqrt(t - tt * l);
    values[k] = v;
  }
  return std::exp(log_pre) * contour.integrate(values);
}

McEstimate haar_orthogonal_integral(const McConfig& cfg, const std::vector<double>& x,
                                    double y) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw ConfigError("Haar integral needs at least one eigenvalue");
  return mc_mean(cfg, [&](GaussianStream& g) {
    const Eigen::MatrixXd q = haar_orthogonal(g, n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += x[i] * q(i, n - 1) * q(i, n - 1);
    return std::exp(-cfg.m * y * acc);
  });
}

McEstimate haar_unitary_integral(const McConfig& cfg, const std::vector<double>& x,
                                 double y) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw ConfigError("Haar integral needs at least one eigenvalue");
  return mc_mean(cfg, [&](GaussianStream& g) {
    const Eigen::MatrixXcd q = haar_unitary(g, n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += x[i] * std::norm(q(i, n - 1));
    return std::exp(-cfg.m * y * acc);
  });
}

McEstimate empirical_cdf(const std::vector<double>& samples, double z) {
  if (samples.empty()) throw ConfigError("empirical CDF needs samples");
  const long below = std::count_if(samples.begin(), samples.end(),
                                   [z](double s) { return s < z; });
  McEstimate e;
  e.n = static_cast<long>(samples.size());
  e.mean = static_cast<double>(below) / static_cast<double>(e.n);
  e.se = std::sqrt(e.mean * (1.0 - e.mean) / static_cast<double>(e.n));
  return e;
}

Histogram histogram(const std::vector<double>& samples, double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw ConfigError("histogram needs hi > lo and bins >= 1");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0);
  h.total = static_cast<long>(samples.size());
  const double w = (hi - lo) / bins;
  for (double s : samples) {
    if (s < lo || s >= hi) continue;
    const int b = std::min(bins - 1, static_cast<int>((s - lo) / w));
    ++h.counts[b];
  }
  return h;
}

}  // namespace wishart
