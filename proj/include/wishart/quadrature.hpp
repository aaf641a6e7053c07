#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "wishart/model.hpp"

namespace wishart {

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

/// Points per panel of every composite rule.
inline constexpr int kPanelOrder = 16;

/// Normalisation of the epsilon operator:
/// eps(f)(x) = kappa (int_0^x f - int_x^inf f).
/// kappa = 1/2 is the sgn/2 kernel; it is the value under which
/// d/dx eps(f) = f and the kernel identities close.
inline constexpr double kEpsilonKappa = 0.5;
/// The operator with an additional factor 1/2 in front.
inline constexpr double kEpsilonKappaLiteral = 0.25;

/// Change of variables x = x(v) used inside the panels.
enum class RuleMap {
  identity,    ///< x = v
  square,      ///< x = v^2 on [0, X]; smooths x^{k/2} at the origin
  sin_square,  ///< x = a + (b - a) sin^2(pi v / 2), v in [0, 1]
};

/// Composite Gauss-Legendre rule on a real interval, built from panels in
/// the mapped variable v. Supports cumulative integrals at nodes and at
/// arbitrary points through the per-panel Legendre interpolant.
class QuadratureRule {
 public:
  struct Panel {
    double va = 0.0;
    double vb = 0.0;
    int first = 0;  ///< index of the first node of this panel
  };

  /// x = v^2 rule on [0, breaks.back()]. `breaks` starts at 0 and is
  /// increasing; segment s gets about base_nodes[s] nodes before
  /// refinement.
  static QuadratureRule square(const std::vector<double>& breaks,
                               const std::vector<int>& base_nodes);
  /// Plain x = v rule on [a, b].
  static QuadratureRule identity(double a, double b, int base_nodes);
  /// Rule on [a, b] absorbing inverse square root behaviour at both ends.
  static QuadratureRule sin_square(double a, double b, int base_nodes);
  /// Half-line rule for the ensemble: x = v^2 on [0, halfline_cutoff(p, degree)].
  static QuadratureRule halfline(const ModelParams& p, int base_nodes,
                                 int degree);

  /// Splits panels until every point of `x_singular` sits outside the
  /// Bernstein ellipse of parameter `rho` of each panel.
  QuadratureRule refined(const std::vector<cplx>& x_singular,
                         double rho = 3.0) const;

  RuleMap map() const noexcept { return map_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  std::size_t size() const noexcept { return x_.size(); }
  const std::vector<double>& nodes() const noexcept { return x_; }
  const std::vector<double>& weights() const noexcept { return q_; }
  const std::vector<Panel>& panels() const noexcept { return panels_; }
  /// Segment index of each panel (square rules with several breaks).
  const std::vector<int>& panel_segment() const noexcept { return segment_; }
  /// Node range [begin, end) lying in segment s.
  std::pair<int, int> segment_nodes(int s) const;

  /// Mapped coordinate of a point x of the support.
  double to_v(double x) const;
  /// Complex pre-images of a complex point (both roots for the square map).
  std::vector<cplx> to_v_complex(cplx x) const;

  /// sum_i q_i g_i.
  cplx integrate(const std::vector<cplx>& g) const;
  /// C_i = int_lower^{x_i} g dx at every node.
  std::vector<cplx> cumulative(const std::vector<cplx>& g) const;
  /// int_lower^{x} g dx from the node samples of g.
  cplx cumulative_at(const std::vector<cplx>& g, double x) const;

 private:
  void rebuild_nodes();
  double x_of(double v) const;
  double dx_dv(double v) const;

  RuleMap map_ = RuleMap::identity;
  double lower_ = 0.0;
  double upper_ = 0.0;
  std::vector<Panel> panels_;
  std::vector<int> segment_;
  std::vector<double> x_;
  std::vector<double> q_;
  std::vector<double> jac_;  ///< half-width * dx/dv at each node
};

/// Truncation point of the half line for integrands bounded by
/// x^{(M-N-1)/2 + degree} e^{-Mx/2}. Starts at 4 b_+ + 40/M and grows until
/// the tail envelope falls below 1e-14 of the full integral of the envelope.
double halfline_cutoff(const ModelParams& p, int degree);

/// Sum of q_i f(x_i). Non-finite samples throw QuadratureError naming the node.
cplx integrate_halfline(const std::function<cplx(double)>& f,
                        const QuadratureRule& rule);

/// kappa (int_0^x f - int_x^end f) evaluated from samples on `rule`.
cplx epsilon_transform(const std::function<cplx(double)>& f,
                       const QuadratureRule& rule, double x,
                       double kappa = kEpsilonKappa);

/// Samples f at the rule nodes, checking finiteness.
std::vector<cplx> sample(const std::function<cplx(double)>& f,
                         const QuadratureRule& rule);

/// kappa (2 C_i - T) at every node for samples g.
std::vector<cplx> epsilon_at_nodes(const QuadratureRule& rule,
                                   const std::vector<cplx>& g,
                                   double kappa = kEpsilonKappa);

/// kappa (2 C(x) - T) at an arbitrary point x of the support.
cplx epsilon_at(const QuadratureRule& rule, const std::vector<cplx>& g,
                double x, double kappa = kEpsilonKappa);

}  // namespace wishart
