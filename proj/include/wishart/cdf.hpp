#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wishart/kernel.hpp"

namespace wishart {

enum class CdfRoute { pfaffian, fredholm };
std::string to_string(CdfRoute r);

/// How the contour sums are turned into probabilities.
enum class Normalization {
  /// Exact constant: (1 + tau)^{-M/2} Gamma(N/2) M^{1-N/2} / (2 pi i Pf_0),
  /// with Pf_0 the null Pfaffian on the half line.
  analytic,
  /// Divide by the same route's contour sum at z_anchor.
  anchor
};
std::string to_string(Normalization n);

struct CdfOptions {
  NumericsConfig numerics;
  int contour_nodes = 128;
  /// Distance in the t-plane between the circle and [0, tau_tilde z].
  double margin = 0.25;
  Normalization normalization = Normalization::analytic;
  /// Target for P(lambda_max > z_anchor) when the anchor is chosen automatically.
  double anchor_tail = 1e-5;
  /// Normalisation point in anchor mode; 0 selects anchor_z(params, anchor_tail).
  double z_anchor = 0.0;
  /// Gauss-Legendre points per chord for the log det M path integral.
  int chord_order = 8;
};

struct CdfResult {
  double z = 0.0;
  double value = 0.0;  ///< real part of the normalised contour sum
  CdfRoute route = CdfRoute::pfaffian;
  double imag = 0.0;   ///< imaginary part before it was dropped
  int node_count = 0;
  double radius = 0.0;
  double z_anchor = 0.0;  ///< 0 with analytic normalisation
  cplx normalization;
  /// sum |terms| / |sum|: the factor by which rounding errors are amplified.
  double cancellation = 0.0;
  int retries = 0;
};

/// Pf of the skew table of L_0..L_{N-1} with the real weight
/// x^{(M-N-1)/2} e^{-Mx/2} on [0, end].
double null_pfaffian(const ModelParams& p, double end, const NumericsConfig& cfg = {});

/// P(lambda_max < z) for the null ensemble (tau = 0) as a ratio of real
/// Pfaffians, with no contour integral. Only N and M of `p` are used.
double null_wishart_cdf(const ModelParams& p, double z, const NumericsConfig& cfg = {});

/// (1 + tau) z' where z' is the smallest grid point with null tail
/// 1 - F_0(z') <= tail; lambda_max(S) <= (1 + tau) lambda_max(W_0).
double anchor_z(const ModelParams& p, double tail, const NumericsConfig& cfg = {});

/// (1 + tau)^{-M/2} Gamma(N/2) M^{1-N/2}: the sphere average
/// int e^{M tt sum x_i h_i^2} dh equals this times
/// (1/2 pi i) oint e^{Mt} prod (t - tt x_i)^{-1/2} dt, up to the (1 + tau) factor
/// of the Wishart density.
double sphere_constant(const ModelParams& p);

/// Circle enclosing the t-singular set [0, tau_tilde z].
ContourSpec cdf_contour(const ModelParams& p, double z, int nodes, double margin,
                        double phase = 0.0);

/// Quadrature rule on the breaks refined against the branch points of every t.
QuadratureRule contour_rule(const ModelParams& p, const std::vector<double>& breaks,
                            const std::vector<int>& base_nodes,
                            const std::vector<cplx>& ts);

/// CDF through sum_k w_k e^{M t_k} Pf(M_trunc(t_k, z)). Each z gets its own
/// circle around [0, tau_tilde z] unless a fixed contour is supplied.
class PfaffianCdf {
 public:
  explicit PfaffianCdf(const ModelParams& p, const CdfOptions& opt = {});
  /// Uses `contour` for every z; it must enclose [0, tau_tilde z].
  PfaffianCdf(const ModelParams& p, const ContourSpec& contour, const CdfOptions& opt = {});

  CdfResult operator()(double z) const;
  ContourSpec contour_for(double z) const;
  /// Pf(M_trunc(t_k, z)) at every node of `c`.
  std::vector<cplx> node_pfaffians(double z, const ContourSpec& c) const;
  /// sum_k w_k e^{M t_k} Pf_k on contour_for(z), with the cancellation factor.
  std::pair<cplx, double> contour_sum(double z) const;

  double z_anchor() const noexcept { return z_anchor_; }
  cplx normalization() const noexcept { return norm_; }

 private:
  std::pair<cplx, double> contour_sum(double z, ContourSpec& c, int& retries) const;

  ModelParams params_;
  CdfOptions opt_;
  LaguerreBasis basis_;
  std::optional<ContourSpec> fixed_;
  double z_anchor_ = 0.0;
  double x_max_ = 0.0;
  cplx norm_;
};

/// One-shot wrapper on a fixed contour.
CdfResult cdf_pfaffian(const ModelParams& p, double z, const ContourSpec& contour,
                       const CdfOptions& opt = {});

/// d/dt log det M = -int S_1(x, x) / (t - tt x) dx on the form's support.
cplx logdet_m_derivative(const LaguerreBasis& basis, const SkewForm& full);
cplx logdet_m_derivative(const LaguerreBasis& basis, cplx t,
                         const NumericsConfig& cfg = {});

/// det M(t) of the full moment matrix (r basis).
cplx det_moment(const LaguerreBasis& basis, const SkewForm& full);

struct FredholmDet {
  cplx value;
  cplx refined;       ///< same with twice the Nystrom nodes
  bool unstable = false;
  int nodes = 0;      ///< Nystrom nodes actually used (after refinement)
};

/// det(I - K chi_[z, x_max]) by Nystrom on the grid nodes in [z, x_max]. The
/// block kernel is the row-reduced equivalent of
/// [[S_1, -d_y S_1], [IS_1 - eps, S_1(y, x)]], whose determinant equals
/// det M_trunc / det M.
FredholmDet fredholm_det(const LaguerreBasis& basis, cplx t, double z, int n_nystrom,
                         const NumericsConfig& cfg = {});
/// Determinant on a given split rule (breaks 0, z, x_max).
cplx fredholm_det_on(const LaguerreBasis& basis, cplx t, const QuadratureRule& split,
                     double kappa = kEpsilonKappa);

/// CDF through sum_k w_k e^{M t_k} Pf(M(c_ref)) exp(L(t_k)/2) sqrt(det(I - K chi)),
/// where L(t) = int_{c_ref}^{t} d/ds log det M ds runs straight from c_ref to
/// node 0 and then along the contour chords counter-clockwise. The circle
/// crosses the cut of det M on the positive axis between the last node and
/// node 0, so c_ref must lie in the upper half plane. The root is continued
/// from node 0 and the overall sign is fixed by requiring a positive CDF.
class FredholmCdf {
 public:
  explicit FredholmCdf(const ModelParams& p, const CdfOptions& opt = {},
                       std::optional<cplx> c_ref = std::nullopt);
  FredholmCdf(const ModelParams& p, const ContourSpec& contour, const CdfOptions& opt = {},
              std::optional<cplx> c_ref = std::nullopt);

  CdfResult operator()(double z) const;
  ContourSpec contour_for(double z) const;
  std::pair<cplx, double> contour_sum(double z) const;
  /// L(t_k) at every node of `c`.
  std::vector<cplx> log_det_path(const ContourSpec& c) const;
  cplx c_ref() const noexcept { return c_ref_; }
  double z_anchor() const noexcept { return z_anchor_; }

 private:
  void setup(std::optional<cplx> c_ref);

  ModelParams params_;
  CdfOptions opt_;
  LaguerreBasis basis_;
  std::optional<ContourSpec> fixed_;
  double z_anchor_ = 0.0;
  double x_max_ = 0.0;
  cplx c_ref_;
  cplx pf_ref_;
  cplx norm_;
};

CdfResult cdf_fredholm(const ModelParams& p, double z, const ContourSpec& contour,
                       cplx c0, const CdfOptions& opt = {});

}  // namespace wishart
