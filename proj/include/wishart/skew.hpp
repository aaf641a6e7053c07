#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "wishart/laguerre.hpp"
#include "wishart/model.hpp"
#include "wishart/polynomial.hpp"
#include "wishart/quadrature.hpp"

namespace wishart {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Quadrature defaults shared by the numerical modules.
struct NumericsConfig {
  int halfline_nodes = 200;  ///< base nodes of the [0, x_max] rule
  int nystrom_nodes = 80;    ///< base nodes of the [z, x_max] Nystrom block
  double kappa = kEpsilonKappa;
  double degenerate_tol = 1e-10;  ///< pivot size relative to its two table rows
};

/// The skew product <f, g>_1 = int int eps(x - y) f(x) g(y) w(x) w(y) and
/// the epsilon transform of f w, both on the support [0, end] at fixed t.
/// The rule is refined around the branch point x = t / tau_tilde.
class SkewForm {
 public:
  SkewForm(const ModelParams& p, cplx t, double end, int base_nodes,
           double kappa = kEpsilonKappa, int degree = -1);
  /// Uses `rule` as given (no refinement); its support is [0, rule.upper()].
  SkewForm(const ModelParams& p, cplx t, const QuadratureRule& rule,
           double kappa = kEpsilonKappa);

  /// Full support [0, x_max] with x_max = halfline_cutoff(p, degree).
  static SkewForm halfline(const ModelParams& p, cplx t,
                           const NumericsConfig& cfg = {}, int degree = -1);
  /// Support [0, min(z, x_max)].
  static SkewForm truncated(const ModelParams& p, cplx t, double z,
                            const NumericsConfig& cfg = {}, int degree = -1);

  const ModelParams& params() const noexcept { return params_; }
  cplx t() const noexcept { return t_; }
  double end() const noexcept { return end_; }
  double kappa() const noexcept { return kappa_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  /// w at the rule nodes.
  const std::vector<cplx>& w() const noexcept { return w_; }

  /// f_i -> f_i w_i.
  std::vector<cplx> weighted(const std::vector<cplx>& f) const;
  /// eps(phi) at the nodes for node samples phi (already multiplied by w).
  std::vector<cplx> eps_nodes(const std::vector<cplx>& phi) const;
  /// eps(phi)(x) for any x in the support.
  cplx eps_at(const std::vector<cplx>& phi, double x) const;

  /// <f, g>_1 from plain node samples of f and g.
  cplx product(const std::vector<cplx>& f, const std::vector<cplx>& g) const;
  /// Antisymmetric matrix of <f_a, f_b>_1.
  CMatrix table(const std::vector<std::vector<cplx>>& f) const;

  std::vector<cplx> sample_poly(const Poly& f) const;
  /// Node samples of L_0 .. L_{count-1}.
  std::vector<std::vector<cplx>> sample_laguerre(const LaguerreBasis& b,
                                                 int count) const;

 private:
  ModelParams params_;
  cplx t_;
  double end_;
  double kappa_;
  QuadratureRule rule_;
  std::vector<cplx> w_;
};

/// x-plane branch points t / tau_tilde of the weight for every t given.
std::vector<cplx> branch_points(const ModelParams& p, const std::vector<cplx>& ts);

/// <f, g>_1 on the given support.
cplx skew_product(const SkewForm& form, const Poly& f, const Poly& g);

/// <f, g>_2 = int_0^inf f g w_0.
cplx inner_product_2(const ModelParams& p, const Poly& f, const Poly& g,
                     int base_nodes = 200);

/// H_j = (d/dx)(x^{j+1} (t - tt x) w(x)) / w(x), expanded symbolically.
Poly h_poly(const ModelParams& p, int j, cplx t);

/// Skew-orthogonal polynomials pi_{N-2}..pi_{N+1} at t, expressed in the
/// monic Laguerre basis, with the table <L_i, L_j>_1 (0 <= i, j <= N+1).
struct SkewPolySet {
  cplx t;
  CMatrix table;                  ///< (N+2) x (N+2)
  std::vector<cplx> pi_nm2;       ///< Laguerre coefficients, length N+2
  std::vector<cplx> pi_nm1;
  std::vector<cplx> pi_n;
  std::vector<cplx> pi_np1;
  cplx h_nm1_1;                   ///< <pi_{N-2}, pi_{N-1}>_1
};

/// Coefficients (length table.rows()) of pi_{2k} and pi_{2k+1} with c = 0.
/// Throws DegenerateSkewProduct when <L_{2k-1}, L_{2k-2}>_1 is negligible next to
/// the rows 2k-1 and 2k-2 of the table.
std::pair<std::vector<cplx>, std::vector<cplx>> skew_pair(const CMatrix& table,
                                                          int k, double tol);

/// Builds the set from a full-support form.
SkewPolySet build_skew_polys(const LaguerreBasis& basis, const SkewForm& full,
                             double tol = 1e-10);

/// Rows: Laguerre coefficients (length N) of r_0..r_{N-1} with
/// r_j = L_j (j < N-2) and r_{N-2}, r_{N-1} the skew-orthogonal ones.
CMatrix r_basis(const SkewPolySet& set, int n);

/// (M)_{jk} = <r_j, r_k>_1 on the support of `form` (truncated or full).
CMatrix moment_matrix(const LaguerreBasis& basis, const SkewPolySet& set,
                      const SkewForm& form);

/// Pfaffian by Parlett-Reid skew tridiagonalisation with pivoting.
/// Pf([[0, 1], [-1, 0]]) = 1.
cplx pfaffian(const CMatrix& a);

}  // namespace wishart
