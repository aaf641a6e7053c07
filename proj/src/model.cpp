#include "wishart/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "wishart/errors.hpp"

namespace wishart {

ModelParams::ModelParams(int n, int m, double tau) : n_(n), m_(m), tau_(tau) {
  if (n <= 0 || n % 2 != 0) {
    throw ConfigError("N must be a positive even integer, got " +
                      std::to_string(n));
  }
  if (m <= n) {
    throw ConfigError("M must exceed N (N=" + std::to_string(n) +
                      ", M=" + std::to_string(m) + ")");
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw ConfigError("tau must be a finite non-negative number");
  }
  tau_tilde_ = tau / (2.0 * (1.0 + tau));
  gamma_ = std::sqrt(static_cast<double>(n) / static_cast<double>(m));
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"N", p.n()}, {"M", p.m()}, {"tau", p.tau()}};
}

ModelParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("model parameters must be an object");
  for (const char* key : {"N", "M", "tau"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("missing parameter '") + key + "'");
    }
  }
  if (!j["N"].is_number_integer() || !j["M"].is_number_integer()) {
    throw ConfigError("N and M must be integers");
  }
  if (!j["tau"].is_number()) throw ConfigError("tau must be a number");
  return ModelParams(j["N"].get<int>(), j["M"].get<int>(),
                     j["tau"].get<double>());
}

cplx inv_sqrt_branch(const ModelParams& p, cplx t, double x) {
  const cplx u = t - p.tau_tilde() * x;
  const double scale = std::max(std::abs(t), p.tau_tilde() * std::abs(x));
  if (std::abs(u) <= 1e3 * std::numeric_limits<double>::epsilon() * scale ||
      u == 0.0) {
    throw SingularPointError("t - tau_tilde*x vanishes at x=" +
                             std::to_string(x));
  }
  // std::sqrt uses the principal branch with the cut on the negative axis.
  return 1.0 / std::sqrt(u);
}

cplx weight_w(const ModelParams& p, cplx t, double x) {
  const double real_part =
      std::exp(-0.5 * p.m() * x + p.w_power() * std::log(x));
  return real_part * inv_sqrt_branch(p, t, x);
}

double weight_w0(const ModelParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return std::exp(p.alpha() * std::log(x) - p.m() * x);
}

std::pair<double, double> mp_edges(const ModelParams& p) {
  const double g = p.gamma();
  return {(1.0 - g) * (1.0 - g), (1.0 + g) * (1.0 + g)};
}

double mp_density(const ModelParams& p, double lambda) {
  const auto [lo, hi] = mp_edges(p);
  if (lambda <= lo || lambda >= hi) return 0.0;
  const double ratio = p.gamma() * p.gamma();
  return std::sqrt((lambda - lo) * (hi - lambda)) /
         (2.0 * std::numbers::pi * ratio * lambda);
}

std::vector<cplx> ContourSpec::residue_weights() const {
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::vector<cplx> out(weights.size());
  for (std::size_t k = 0; k < weights.size(); ++k) out[k] = weights[k] / two_pi_i;
  return out;
}

bool ContourSpec::encloses(double a, double b) const {
  return std::abs(cplx(a) - center) < radius && std::abs(cplx(b) - center) < radius;
}

cplx ContourSpec::integrate(const std::vector<cplx>& values) const {
  cplx acc = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) acc += weights[k] * values[k];
  return acc;
}

ContourSpec make_contour(double z, int node_count, double margin, double phase) {
  if (!(z >= 0.0)) throw ConfigError("contour interval end must be >= 0");
  return make_contour_around(0.0, z, node_count, margin, phase);
}

ContourSpec make_contour_around(double lo, double hi, int node_count, double margin,
                                double phase) {
  if (!(margin > 0.0)) throw ConfigError("contour margin must be positive");
  if (node_count < 4 || node_count % 2 != 0) {
    throw ConfigError("contour node count must be even and at least 4");
  }
  if (!(hi >= lo)) throw ConfigError("contour segment needs lo <= hi");
  ContourSpec c;
  c.center = cplx(0.5 * (lo + hi), 0.0);
  c.radius = 0.5 * (hi - lo) + margin;
  c.node_count = node_count;
  c.phase = phase;
  c.nodes.resize(node_count);
  c.weights.resize(node_count);
  const double step = 2.0 * std::numbers::pi / node_count;
  for (int k = 0; k < node_count; ++k) {
    const double theta = step * (k + 0.5 + phase);
    const cplx e = std::polar(1.0, theta);
    c.nodes[k] = c.center + c.radius * e;
    // dz = i R e^{i theta} d theta
    c.weights[k] = cplx(0.0, 1.0) * c.radius * e * step;
  }
  return c;
}

}  // namespace wishart
