#include "wishart/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "wishart/errors.hpp"

namespace wishart {

namespace {

// P_0..P_{n} at xi.
void legendre_values(int n, double xi, std::vector<double>& out) {
  out.assign(n + 1, 0.0);
  out[0] = 1.0;
  if (n >= 1) out[1] = xi;
  for (int k = 1; k < n; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * xi * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

// int_{-1}^{xi} P_k for k = 0..n-1.
void legendre_integrals(int n, double xi, std::vector<double>& out) {
  std::vector<double> p;
  legendre_values(n, xi, p);
  out.assign(n, 0.0);
  out[0] = xi + 1.0;
  for (int k = 1; k < n; ++k) out[k] = (p[k + 1] - p[k - 1]) / (2.0 * k + 1.0);
}

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 1; k < n; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    gl.nodes[n - 1 - i] = x;
    gl.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

// Spectral integration matrix: S(i, j) maps samples h_j to int_{-1}^{xi_i} h.
const std::vector<double>& integration_matrix() {
  static const std::vector<double> s = [] {
    const int n = kPanelOrder;
    const auto& gl = gauss_legendre(n);
    std::vector<std::vector<double>> pj(n);
    for (int j = 0; j < n; ++j) legendre_values(n, gl.nodes[j], pj[j]);
    std::vector<double> out(n * n, 0.0);
    std::vector<double> ik;
    for (int i = 0; i < n; ++i) {
      legendre_integrals(n, gl.nodes[i], ik);
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          acc += 0.5 * (2.0 * k + 1.0) * gl.weights[j] * pj[j][k] * ik[k];
        }
        out[i * n + j] = acc;
      }
    }
    return out;
  }();
  return s;
}

double bernstein_rho(double a, double b, cplx s) {
  const cplx xi = (2.0 * s - (a + b)) / (b - a);
  const cplx r = std::sqrt(xi - 1.0) * std::sqrt(xi + 1.0);
  return std::max(std::abs(xi + r), std::abs(xi - r));
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1 || order > 512) throw ConfigError("Gauss-Legendre order out of range");
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
  return it->second;
}

double QuadratureRule::x_of(double v) const {
  switch (map_) {
    case RuleMap::identity:
      return v;
    case RuleMap::square:
      return v * v;
    case RuleMap::sin_square: {
      const double s = std::sin(0.5 * std::numbers::pi * v);
      return lower_ + (upper_ - lower_) * s * s;
    }
  }
  return v;
}

double QuadratureRule::dx_dv(double v) const {
  switch (map_) {
    case RuleMap::identity:
      return 1.0;
    case RuleMap::square:
      return 2.0 * v;
    case RuleMap::sin_square:
      return (upper_ - lower_) * 0.5 * std::numbers::pi *
             std::sin(std::numbers::pi * v);
  }
  return 1.0;
}

double QuadratureRule::to_v(double x) const {
  switch (map_) {
    case RuleMap::identity:
      return x;
    case RuleMap::square:
      return std::sqrt(std::max(x, 0.0));
    case RuleMap::sin_square: {
      const double r = std::clamp((x - lower_) / (upper_ - lower_), 0.0, 1.0);
      return 2.0 / std::numbers::pi * std::asin(std::sqrt(r));
    }
  }
  return x;
}

std::vector<cplx> QuadratureRule::to_v_complex(cplx x) const {
  switch (map_) {
    case RuleMap::identity:
      return {x};
    case RuleMap::square: {
      const cplx r = std::sqrt(x);
      return {r, -r};
    }
    case RuleMap::sin_square: {
      const cplx v = 2.0 / std::numbers::pi *
                     std::asin(std::sqrt((x - lower_) / (upper_ - lower_)));
      return {v, -v, 2.0 - v};
    }
  }
  return {x};
}

void QuadratureRule::rebuild_nodes() {
  const auto& gl = gauss_legendre(kPanelOrder);
  x_.clear();
  q_.clear();
  jac_.clear();
  for (auto& p : panels_) {
    p.first = static_cast<int>(x_.size());
    const double half = 0.5 * (p.vb - p.va);
    const double mid = 0.5 * (p.vb + p.va);
    for (int j = 0; j < kPanelOrder; ++j) {
      const double v = mid + half * gl.nodes[j];
      const double jac = half * dx_dv(v);
      x_.push_back(x_of(v));
      jac_.push_back(jac);
      q_.push_back(gl.weights[j] * jac);
    }
  }
}

QuadratureRule QuadratureRule::square(const std::vector<double>& breaks,
                                      const std::vector<int>& base_nodes) {
  if (breaks.size() < 2 || breaks.front() != 0.0) {
    throw ConfigError("square rule needs breaks starting at 0");
  }
  if (base_nodes.size() + 1 != breaks.size()) {
    throw ConfigError("square rule needs one node count per segment");
  }
  QuadratureRule r;
  r.map_ = RuleMap::square;
  r.lower_ = 0.0;
  r.upper_ = breaks.back();
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    if (breaks[s + 1] < breaks[s]) throw ConfigError("square rule breaks must increase");
    const double va = std::sqrt(breaks[s]);
    const double vb = std::sqrt(breaks[s + 1]);
    if (vb <= va) continue;
    const int panels = std::max(1, (base_nodes[s] + kPanelOrder - 1) / kPanelOrder);
    for (int k = 0; k < panels; ++k) {
      r.panels_.push_back({va + (vb - va) * k / panels,
                           va + (vb - va) * (k + 1) / panels, 0});
      r.segment_.push_back(static_cast<int>(s));
    }
  }
  r.rebuild_nodes();
  return r;
}

QuadratureRule QuadratureRule::identity(double a, double b, int base_nodes) {
  if (!(b > a)) throw ConfigError("identity rule needs a < b");
  QuadratureRule r;
  r.map_ = RuleMap::identity;
  r.lower_ = a;
  r.upper_ = b;
  const int panels = std::max(1, (base_nodes + kPanelOrder - 1) / kPanelOrder);
  for (int k = 0; k < panels; ++k) {
    r.panels_.push_back({a + (b - a) * k / panels, a + (b - a) * (k + 1) / panels, 0});
    r.segment_.push_back(0);
  }
  r.rebuild_nodes();
  return r;
}

QuadratureRule QuadratureRule::sin_square(double a, double b, int base_nodes) {
  if (!(b > a)) throw ConfigError("sin_square rule needs a < b");
  QuadratureRule r;
  r.map_ = RuleMap::sin_square;
  r.lower_ = a;
  r.upper_ = b;
  const int panels = std::max(1, (base_nodes + kPanelOrder - 1) / kPanelOrder);
  for (int k = 0; k < panels; ++k) {
    r.panels_.push_back({static_cast<double>(k) / panels,
                         static_cast<double>(k + 1) / panels, 0});
    r.segment_.push_back(0);
  }
  r.rebuild_nodes();
  return r;
}

QuadratureRule QuadratureRule::halfline(const ModelParams& p, int base_nodes,
                                        int degree) {
  return square({0.0, halfline_cutoff(p, degree)}, {base_nodes});
}

QuadratureRule QuadratureRule::refined(const std::vector<cplx>& x_singular,
                                       double rho) const {
  std::vector<cplx> vs;
  for (const cplx& x : x_singular) {
    for (const cplx& v : to_v_complex(x)) vs.push_back(v);
  }
  QuadratureRule out = *this;
  if (vs.empty()) return out;
  const double span = panels_.empty() ? 1.0 : panels_.back().vb - panels_.front().va;
  out.panels_.clear();
  out.segment_.clear();
  struct Item {
    Panel p;
    int seg;
    int depth;
  };
  for (std::size_t k = 0; k < panels_.size(); ++k) {
    std::vector<Item> stack{{panels_[k], segment_[k], 0}};
    std::vector<Item> done;
    while (!stack.empty()) {
      Item it = stack.back();
      stack.pop_back();
      double worst = std::numeric_limits<double>::infinity();
      for (const cplx& v : vs) worst = std::min(worst, bernstein_rho(it.p.va, it.p.vb, v));
      const bool tiny = (it.p.vb - it.p.va) < 1e-13 * span;
      if (worst < rho && !tiny && it.depth < 60) {
        const double mid = 0.5 * (it.p.va + it.p.vb);
        // push right first so the left half is processed first
        stack.push_back({{mid, it.p.vb, 0}, it.seg, it.depth + 1});
        stack.push_back({{it.p.va, mid, 0}, it.seg, it.depth + 1});
      } else {
        done.push_back(it);
      }
    }
    for (const auto& it : done) {
      out.panels_.push_back(it.p);
      out.segment_.push_back(it.seg);
    }
  }
  out.rebuild_nodes();
  return out;
}

std::pair<int, int> QuadratureRule::segment_nodes(int s) const {
  int begin = -1, end = -1;
  for (std::size_t k = 0; k < panels_.size(); ++k) {
    if (segment_[k] != s) continue;
    if (begin < 0) begin = panels_[k].first;
    end = panels_[k].first + kPanelOrder;
  }
  if (begin < 0) return {0, 0};
  return {begin, end};
}

cplx QuadratureRule::integrate(const std::vector<cplx>& g) const {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < q_.size(); ++i) acc += q_[i] * g[i];
  return acc;
}

std::vector<cplx> QuadratureRule::cumulative(const std::vector<cplx>& g) const {
  const auto& s = integration_matrix();
  const int n = kPanelOrder;
  std::vector<cplx> out(x_.size());
  cplx base = 0.0;
  for (const auto& p : panels_) {
    cplx total = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += s[i * n + j] * (g[p.first + j] * jac_[p.first + j]);
      out[p.first + i] = base + acc;
      total += q_[p.first + i] * g[p.first + i];
    }
    base += total;
  }
  return out;
}

cplx QuadratureRule::cumulative_at(const std::vector<cplx>& g, double x) const {
  if (panels_.empty()) return 0.0;
  const double v = to_v(x);
  if (v <= panels_.front().va) return 0.0;
  if (v >= panels_.back().vb) return integrate(g);
  const auto it = std::upper_bound(
      panels_.begin(), panels_.end(), v,
      [](double value, const Panel& p) { return value < p.va; });
  const Panel& p = *std::prev(it);
  cplx base = 0.0;
  for (int i = 0; i < p.first; ++i) base += q_[i] * g[i];
  const auto& gl = gauss_legendre(kPanelOrder);
  const int n = kPanelOrder;
  const double xi = (2.0 * v - p.va - p.vb) / (p.vb - p.va);
  std::vector<double> ik, pk;
  legendre_integrals(n, xi, ik);
  cplx acc = 0.0;
  for (int j = 0; j < n; ++j) {
    legendre_values(n, gl.nodes[j], pk);
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += 0.5 * (2.0 * k + 1.0) * pk[k] * ik[k];
    acc += gl.weights[j] * s * (g[p.first + j] * jac_[p.first + j]);
  }
  return base + acc;
}

double halfline_cutoff(const ModelParams& p, int degree) {
  const double m = p.m();
  const double a = p.w_power() + degree;
  const auto [lo, hi] = mp_edges(p);
  (void)lo;
  const double log_total = std::lgamma(a + 1.0) + (a + 1.0) * std::log(2.0 / m);
  double x = 4.0 * hi + 40.0 / m;
  for (int it = 0; it < 10000; ++it) {
    if (m * x > 4.0 * a) {
      // int_X^inf x^a e^{-Mx/2} <= X^a e^{-MX/2} (2/M) / (1 - 2a/(MX))
      const double log_tail = a * std::log(x) - 0.5 * m * x + std::log(2.0 / m) -
                              std::log(1.0 - 2.0 * a / (m * x));
      if (log_tail - log_total < std::log(1e-14)) return x;
    }
    x += 10.0 / m;
  }
  throw QuadratureError("half-line tail bound not reached");
}

std::vector<cplx> sample(const std::function<cplx(double)>& f,
                         const QuadratureRule& rule) {
  std::vector<cplx> out(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out[i] = f(rule.nodes()[i]);
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag())) {
      std::ostringstream os;
      os << "non-finite integrand at node " << i << " (x=" << rule.nodes()[i] << ")";
      throw QuadratureError(os.str());
    }
  }
  return out;
}

cplx integrate_halfline(const std::function<cplx(double)>& f,
                        const QuadratureRule& rule) {
  return rule.integrate(sample(f, rule));
}

std::vector<cplx> epsilon_at_nodes(const QuadratureRule& rule,
                                   const std::vector<cplx>& g, double kappa) {
  std::vector<cplx> c = rule.cumulative(g);
  const cplx total = rule.integrate(g);
  for (auto& v : c) v = kappa * (2.0 * v - total);
  return c;
}

cplx epsilon_at(const QuadratureRule& rule, const std::vector<cplx>& g, double x,
                double kappa) {
  return kappa * (2.0 * rule.cumulative_at(g, x) - rule.integrate(g));
}

cplx epsilon_transform(const std::function<cplx(double)>& f,
                       const QuadratureRule& rule, double x, double kappa) {
  return epsilon_at(rule, sample(f, rule), x, kappa);
}

}  // namespace wishart
