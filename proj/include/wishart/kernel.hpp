#pragma once

#include <optional>
#include <vector>

#include "wishart/skew.hpp"

namespace wishart {

enum class KernelMode { brute_force, cd_corrected };

/// S_1, IS_1 and dS_1 = -d/dy S_1 at a fixed t.
///
/// Brute force: with phi_j = r_j w, psi_j = eps(phi_j) and mu = M^{-1},
///   S_1(x, y) = -phi(x) mu psi(y)^T, IS_1 = -psi(x) mu psi(y)^T,
///   dS_1 = phi(x) mu phi(y)^T.
/// CD form: S_1 = K_2 + w(x) (eps(pi_{N+1} w), eps(pi_N w))(y) A
///   (L_{N-2}(x), L_{N-1}(x))^T with A = correction_matrix(...).
class KernelBundle {
 public:
  /// `rows` optionally replaces the r_j basis (N x N Laguerre coefficients).
  static KernelBundle brute_force(const LaguerreBasis& basis, const SkewForm& full,
                                  const std::optional<CMatrix>& rows = std::nullopt);
  static KernelBundle brute_force(const LaguerreBasis& basis, cplx t,
                                  const NumericsConfig& cfg = {});
  static KernelBundle cd_corrected(const LaguerreBasis& basis, const SkewForm& full);
  static KernelBundle cd_corrected(const LaguerreBasis& basis, cplx t,
                                   const NumericsConfig& cfg = {});

  KernelMode mode() const noexcept { return mode_; }
  cplx t() const noexcept { return form_.t(); }
  const SkewForm& form() const noexcept { return form_; }
  const SkewPolySet& skew_set() const noexcept { return set_; }
  /// Moment matrix and its inverse (brute force mode).
  const CMatrix& moment() const noexcept { return moment_; }
  const CMatrix& mu() const noexcept { return mu_; }
  /// Correction matrix A (cd mode).
  const CMatrix& correction() const noexcept { return correction_; }

  cplx s1(double x, double y) const;
  cplx is1(double x, double y) const;
  cplx ds1(double x, double y) const;

  /// phi(x) = (r_j(x) w(x))_j and psi(x) = (eps(r_j w)(x))_j (brute force).
  CVector phi(double x) const;
  CVector psi(double x) const;
  /// Node samples of phi_j on the form's rule.
  const std::vector<std::vector<cplx>>& phi_nodes() const noexcept { return phi_nodes_; }

 private:
  KernelBundle(const LaguerreBasis& basis, const SkewForm& form)
      : basis_(basis), form_(form) {}

  void init_brute(const std::optional<CMatrix>& rows);
  void init_cd();
  cplx s1_cd(double x, double y) const;

  KernelMode mode_ = KernelMode::brute_force;
  LaguerreBasis basis_;
  SkewForm form_;
  SkewPolySet set_;
  CMatrix rows_;  ///< N x N Laguerre coefficients of r_j
  CMatrix moment_, mu_, correction_;
  std::vector<std::vector<cplx>> phi_nodes_;
  std::vector<cplx> phi_pi_np1_, phi_pi_n_;  ///< node samples of pi w
};

/// The 2x2 correction matrix
/// [[0, -M tt / (2 h_{N-1})], [-M tt / (2 h_{N-2}), (Mt - tt (M+N)) / (2 h_{N-1})]].
CMatrix correction_matrix(const LaguerreBasis& basis, cplx t);

/// C_{i,j} (i = 1, 2 as rows 0, 1) from the skew-product table <L_a, L_b>_1.
CMatrix correction_entries(const LaguerreBasis& basis, const SkewPolySet& set);

/// B = [[<L_{N-2}, L_{N-3}>, <L_{N-2}, L_{N-4}>], [<L_{N-1}, L_{N-3}>, <L_{N-1}, L_{N-4}>]];
/// the entries satisfy C^T = A B.
CMatrix correction_table_block(const SkewPolySet& set, int n);

struct MultiOrthReport {
  bool solvable = false;
  double residual = 0.0;  ///< worst condition residual, relative to its scale
  cplx g;                 ///< <L_{N-1}, L_{N-2}>_1
  cplx det_direct;        ///< determinant of the 2x2 moment system
  cplx det_lemma;         ///< same determinant from the H_j reduction (prop. to g)
  std::vector<std::vector<cplx>> p;  ///< Laguerre coefficients of P_{N,1}, P_{N,2}
  /// Moment values <P_m, L_{N-l-2}>_1 (row l-1, column m-1).
  CMatrix moments;
};

/// Builds the degree N-1 polynomials with <P, x^j>_2 = 0 (j <= N-3) and
/// <P_m, L_{N-l-2}>_1 = -2 pi i delta_{lm}. When `g_override` is set the
/// reduction route replaces <L_{N-1}, L_{N-2}>_1 by it before solving.
MultiOrthReport check_multi_orthogonality(const LaguerreBasis& basis,
                                          const SkewForm& full,
                                          std::optional<cplx> g_override = std::nullopt);

}  // namespace wishart
