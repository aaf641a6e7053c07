#pragma once

#include <complex>
#include <vector>

#include "json.hpp"

namespace wishart {

using cplx = std::complex<double>;

/// Ensemble parameters of the rank-1 real spiked Wishart model:
/// S = X X^T / M with X an N x M Gaussian matrix whose columns have
/// covariance diag(1 + tau, 1, ..., 1).
///
/// Validated on construction (N even and positive, M > N, tau >= 0);
/// tau_tilde = tau / (2 (1 + tau)) and gamma = sqrt(N / M) are cached.
class ModelParams {
 public:
  ModelParams(int n, int m, double tau);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  double tau() const noexcept { return tau_; }
  double tau_tilde() const noexcept { return tau_tilde_; }
  double gamma() const noexcept { return gamma_; }

  /// Exponent (M - N - 1) / 2 of x in the weight w.
  double w_power() const noexcept { return 0.5 * (m_ - n_ - 1); }
  /// Laguerre parameter alpha = M - N of w_0.
  int alpha() const noexcept { return m_ - n_; }

  bool operator==(const ModelParams& o) const noexcept {
    return n_ == o.n_ && m_ == o.m_ && tau_ == o.tau_;
  }

 private:
  int n_;
  int m_;
  double tau_;
  double tau_tilde_;
  double gamma_;
};

void to_json(nlohmann::json& j, const ModelParams& p);
ModelParams params_from_json(const nlohmann::json& j);

/// (t - tau_tilde x)^{-1/2} on the principal branch (cut along
/// arg(t - tau_tilde x) = pi). Throws SingularPointError when the
/// argument is numerically zero.
cplx inv_sqrt_branch(const ModelParams& p, cplx t, double x);

/// w(x) = e^{-Mx/2} x^{(M-N-1)/2} (t - tau_tilde x)^{-1/2}.
cplx weight_w(const ModelParams& p, cplx t, double x);

/// w_0(x) = x^{M-N} e^{-Mx}. Not the square of w.
double weight_w0(const ModelParams& p, double x);

/// Edges (b_-, b_+) of the Marchenko-Pastur law for S = X X^T / M.
std::pair<double, double> mp_edges(const ModelParams& p);

/// Marchenko-Pastur density at lambda (unit mass on [b_-, b_+]).
double mp_density(const ModelParams& p, double lambda);

/// Closed counter-clockwise circle, trapezoidal in the angle, used for
/// every t-integral. Nodes sit at angles 2 pi (k + 1/2 + phase) / n so
/// none lies on the real axis.
struct ContourSpec {
  cplx center;
  double radius = 0.0;
  int node_count = 0;
  double phase = 0.0;
  std::vector<cplx> nodes;
  /// Plain dz weights: sum_k weights[k] f(nodes[k]) approximates the
  /// contour integral of f.
  std::vector<cplx> weights;

  /// Weights divided by 2 pi i (residue normalisation).
  std::vector<cplx> residue_weights() const;

  /// True if every point of the real segment [a, b] lies strictly inside.
  bool encloses(double a, double b) const;

  /// Apply the quadrature to sampled values.
  cplx integrate(const std::vector<cplx>& values) const;
};

/// Circle centred at (z/2, 0) with radius z/2 + margin.
/// `phase` shifts all node angles by phase * (2 pi / node_count); the
/// degenerate-node retry uses phase = 1/4.
ContourSpec make_contour(double z, int node_count, double margin,
                         double phase = 0.0);
/// Circle around the real segment [lo, hi] with the same conventions.
ContourSpec make_contour_around(double lo, double hi, int node_count, double margin,
                                double phase = 0.0);

}  // namespace wishart
