#include "wishart/kernel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "wishart/errors.hpp"

namespace wishart {

namespace {

std::vector<cplx> combine(const CMatrix& rows, int j,
                          const std::vector<std::vector<cplx>>& lag) {
  std::vector<cplx> out(lag.empty() ? 0 : lag[0].size(), 0.0);
  for (int k = 0; k < rows.cols(); ++k) {
    const cplx c = rows(j, k);
    if (c == cplx(0.0)) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * lag[k][i];
  }
  return out;
}

std::vector<cplx> combine(const std::vector<cplx>& coeffs,
                          const std::vector<std::vector<cplx>>& lag) {
  std::vector<cplx> out(lag[0].size(), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs[k] * lag[k][i];
  }
  return out;
}

void require_cd_size(const ModelParams& p) {
  if (p.n() < 4) throw ConfigError("the CD form needs N >= 4");
}

}  // namespace

KernelBundle KernelBundle::brute_force(const LaguerreBasis& basis, const SkewForm& full,
                                       const std::optional<CMatrix>& rows) {
  KernelBundle k(basis, full);
  k.mode_ = KernelMode::brute_force;
  k.init_brute(rows);
  return k;
}

KernelBundle KernelBundle::brute_force(const LaguerreBasis& basis, cplx t,
                                       const NumericsConfig& cfg) {
  return brute_force(basis, SkewForm::halfline(basis.params(), t, cfg));
}

KernelBundle KernelBundle::cd_corrected(const LaguerreBasis& basis, const SkewForm& full) {
  KernelBundle k(basis, full);
  k.mode_ = KernelMode::cd_corrected;
  k.init_cd();
  return k;
}

KernelBundle KernelBundle::cd_corrected(const LaguerreBasis& basis, cplx t,
                                        const NumericsConfig& cfg) {
  return cd_corrected(basis, SkewForm::halfline(basis.params(), t, cfg));
}

void KernelBundle::init_brute(const std::optional<CMatrix>& rows) {
  const int n = basis_.params().n();
  set_ = build_skew_polys(basis_, form_);
  rows_ = rows ? *rows : r_basis(set_, n);
  if (rows_.rows() != n || rows_.cols() != n) {
    throw ConfigError("r basis must be N x N Laguerre coefficients");
  }
  const auto lag = form_.sample_laguerre(basis_, n);
  std::vector<std::vector<cplx>> f(n);
  phi_nodes_.resize(n);
  for (int j = 0; j < n; ++j) {
    f[j] = combine(rows_, j, lag);
    phi_nodes_[j] = form_.weighted(f[j]);
  }
  moment_ = form_.table(f);
  // Equilibrate first: row magnitudes follow the Laguerre norms, which span many decades.
  Eigen::VectorXd d(n);
  for (int j = 0; j < n; ++j) {
    const double m = moment_.row(j).cwiseAbs().maxCoeff();
    d[j] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
  }
  const CMatrix scaled = d.asDiagonal() * moment_ * d.asDiagonal();
  Eigen::FullPivLU<CMatrix> lu(scaled);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    std::ostringstream os;
    os << "moment matrix is singular (rcond " << lu.rcond() << ")";
    throw NumericalError(os.str());
  }
  mu_ = d.asDiagonal() * lu.inverse() * d.asDiagonal();
}

void KernelBundle::init_cd() {
  const int n = basis_.params().n();
  require_cd_size(basis_.params());
  set_ = build_skew_polys(basis_, form_);
  correction_ = correction_matrix(basis_, form_.t());
  const auto lag = form_.sample_laguerre(basis_, n + 2);
  phi_pi_n_ = form_.weighted(combine(set_.pi_n, lag));
  phi_pi_np1_ = form_.weighted(combine(set_.pi_np1, lag));
}

CVector KernelBundle::phi(double x) const {
  const int n = basis_.params().n();
  std::vector<double> l;
  basis_.eval_all(x, n, l);
  const cplx w = weight_w(basis_.params(), form_.t(), x);
  CVector out(n);
  for (int j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) acc += rows_(j, k) * l[k];
    out[j] = acc * w;
  }
  return out;
}

CVector KernelBundle::psi(double x) const {
  const int n = static_cast<int>(phi_nodes_.size());
  CVector out(n);
  for (int j = 0; j < n; ++j) out[j] = form_.eps_at(phi_nodes_[j], x);
  return out;
}

cplx KernelBundle::s1_cd(double x, double y) const {
  const int n = basis_.params().n();
  std::vector<double> l;
  basis_.eval_all(x, n, l);
  Eigen::RowVector2cd e(form_.eps_at(phi_pi_np1_, y), form_.eps_at(phi_pi_n_, y));
  Eigen::Vector2cd lx(l[n - 2], l[n - 1]);
  const cplx corr = (e * correction_ * lx)(0) * weight_w(basis_.params(), form_.t(), x);
  return cd_kernel_k2(basis_, form_.t(), x, y) + corr;
}

cplx KernelBundle::s1(double x, double y) const {
  if (mode_ == KernelMode::cd_corrected) return s1_cd(x, y);
  return -(phi(x).transpose() * mu_ * psi(y))(0);
}

cplx KernelBundle::is1(double x, double y) const {
  if (mode_ == KernelMode::brute_force) {
    return -(psi(x).transpose() * mu_ * psi(y))(0);
  }
  // eps applied to S_1(., y) in the first argument.
  const auto& nodes = form_.rule().nodes();
  std::vector<cplx> col(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) col[i] = s1_cd(nodes[i], y);
  return form_.eps_at(col, x);
}

cplx KernelBundle::ds1(double x, double y) const {
  const double two_kappa = 2.0 * form_.kappa();
  if (mode_ == KernelMode::brute_force) {
    return two_kappa * (phi(x).transpose() * mu_ * phi(y))(0);
  }
  const ModelParams& p = basis_.params();
  const int n = p.n();
  const cplx t = form_.t();
  std::vector<double> lx, ly, dly;
  basis_.eval_all(x, n + 2, lx);
  basis_.eval_all_d(y, n + 2, ly, dly);
  double d = 0.0, dd = 0.0;
  for (int j = 0; j < n; ++j) {
    const double h = basis_.norm(j);
    d += lx[j] * ly[j] / h;
    dd += lx[j] * dly[j] / h;
  }
  const cplx u = t - p.tau_tilde() * y;
  const cplx g = std::exp(-0.5 * p.m() * y + 0.5 * (p.m() - p.n() + 1) * std::log(y)) *
                 std::sqrt(u);
  const cplx dlog_g = -0.5 * p.m() + 0.5 * (p.m() - p.n() + 1) / y - 0.5 * p.tau_tilde() / u;
  const cplx wx = weight_w(p, t, x);
  const cplx dk2 = wx * g * (dlog_g * d + dd);
  const cplx wy = weight_w(p, t, y);
  cplx pn = 0.0, pn1 = 0.0;
  for (int k = 0; k < n + 2; ++k) {
    pn += set_.pi_n[k] * ly[k];
    pn1 += set_.pi_np1[k] * ly[k];
  }
  Eigen::RowVector2cd e(two_kappa * pn1 * wy, two_kappa * pn * wy);
  Eigen::Vector2cd lv(lx[n - 2], lx[n - 1]);
  return -dk2 - (e * correction_ * lv)(0) * wx;
}

CMatrix correction_matrix(const LaguerreBasis& basis, cplx t) {
  const ModelParams& p = basis.params();
  require_cd_size(p);
  const int n = p.n();
  const double m = p.m(), tt = p.tau_tilde();
  CMatrix a(2, 2);
  a(0, 0) = 0.0;
  a(0, 1) = -m * tt / (2.0 * basis.norm(n - 1));
  a(1, 0) = -m * tt / (2.0 * basis.norm(n - 2));
  a(1, 1) = (m * t - tt * (m + n)) / (2.0 * basis.norm(n - 1));
  return a;
}

CMatrix correction_entries(const LaguerreBasis& basis, const SkewPolySet& set) {
  const ModelParams& p = basis.params();
  require_cd_size(p);
  const int n = p.n();
  const double m = p.m(), tt = p.tau_tilde();
  const double h1 = basis.norm(n - 1), h2 = basis.norm(n - 2);
  CMatrix c(2, 2);
  for (int i = 1; i <= 2; ++i) {
    const cplx l1 = set.table(n - 1, n - i - 2);
    const cplx l2 = set.table(n - 2, n - i - 2);
    c(i - 1, 0) = -m * tt * l1 / (2.0 * h1);
    c(i - 1, 1) = (m * set.t - tt * (n + m)) * l1 / (2.0 * h1) - m * tt * l2 / (2.0 * h2);
  }
  return c;
}

CMatrix correction_table_block(const SkewPolySet& set, int n) {
  CMatrix b(2, 2);
  b << set.table(n - 2, n - 3), set.table(n - 2, n - 4),
      set.table(n - 1, n - 3), set.table(n - 1, n - 4);
  return b;
}

namespace {

// Remainder R = r0 + r1 x of f modulo span{H_j}; needs tau_tilde > 0.
Eigen::Vector2cd h_remainder(const ModelParams& p, cplx t, Poly f) {
  for (int d = f.degree(); d >= 2; --d) {
    const Poly h = h_poly(p, d - 2, t);
    f = f - h * (f.coeff(d) / h.coeff(d));
  }
  return Eigen::Vector2cd(f.coeff(0), f.coeff(1));
}

Poly laguerre_poly(const LaguerreBasis& basis, const std::vector<cplx>& c) {
  Poly out = Poly::constant(0.0);
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] != cplx(0.0)) out = out + basis.monomial_form(static_cast<int>(k)) * c[k];
  }
  return out;
}

}  // namespace

MultiOrthReport check_multi_orthogonality(const LaguerreBasis& basis,
                                          const SkewForm& full,
                                          std::optional<cplx> g_override) {
  const ModelParams& p = basis.params();
  require_cd_size(p);
  const int n = p.n();
  const cplx t = full.t();
  const CMatrix tab = full.table(full.sample_laguerre(basis, n));
  MultiOrthReport rep;
  rep.g = tab(n - 1, n - 2);

  CMatrix q(2, 2);
  q << tab(n - 1, n - 3), tab(n - 2, n - 3), tab(n - 1, n - 4), tab(n - 2, n - 4);
  rep.det_direct = q.determinant();

  CMatrix system = q;
  if (p.tau_tilde() > 0.0) {
    const Eigen::Vector2cd rho = h_remainder(p, t, basis.monomial_form(n - 2));
    const Eigen::Vector2cd rho3 = h_remainder(p, t, basis.monomial_form(n - 3));
    const Eigen::Vector2cd rho4 = h_remainder(p, t, basis.monomial_form(n - 4));
    const Eigen::Vector2cd jrho(-rho(1), rho(0));
    const double a0 = basis.a(0);
    const Eigen::Vector2cd u1(tab(n - 1, 0), tab(n - 1, 1) + a0 * tab(n - 1, 0));
    const Eigen::Vector2cd u2(tab(n - 2, 0), tab(n - 2, 1) + a0 * tab(n - 2, 0));
    Eigen::Matrix2cd basis2;
    basis2 << rho, jrho;
    const Eigen::Vector2cd ab = basis2.fullPivLu().solve(u1);
    const cplx rr = rho.transpose() * rho;
    const cplx g_use = g_override.value_or(rep.g);
    const cplx alpha = g_use / rr;
    const cplx s = cplx(jrho.transpose() * u2) / rr;
    Eigen::Matrix2cd u;
    u.col(0) = alpha * rho + ab(1) * jrho;
    u.col(1) = s * jrho;
    Eigen::Matrix2cd rmat;
    rmat.row(0) = rho3.transpose();
    rmat.row(1) = rho4.transpose();
    const Eigen::Matrix2cd lemma = rmat * u;
    rep.det_lemma = lemma.determinant();
    if (g_override) system = lemma;
  } else {
    rep.det_lemma = cplx(std::nan(""), std::nan(""));
    if (g_override) throw ConfigError("the reduction route needs tau > 0");
  }

  const double scale = system.cwiseAbs().maxCoeff();
  rep.solvable = std::abs(system.determinant()) > 1e-12 * scale * scale;
  rep.moments = CMatrix::Zero(2, 2);
  if (!rep.solvable) return rep;

  const cplx minus_two_pi_i(0.0, -2.0 * std::numbers::pi);
  const CMatrix coeffs = system.fullPivLu().solve(minus_two_pi_i * CMatrix::Identity(2, 2));
  double worst = 0.0;
  const auto lag = full.sample_laguerre(basis, n);
  for (int m = 0; m < 2; ++m) {
    std::vector<cplx> c(n, 0.0);
    c[n - 1] = coeffs(0, m);
    c[n - 2] = coeffs(1, m);
    rep.p.push_back(c);
    const Poly pm = laguerre_poly(basis, c);
    const double pnorm = std::sqrt(std::abs(inner_product_2(p, pm, pm)));
    for (int j = 0; j <= n - 3; ++j) {
      const Poly xj = Poly::monomial(j);
      const double xnorm = std::sqrt(std::abs(inner_product_2(p, xj, xj)));
      worst = std::max(worst, std::abs(inner_product_2(p, pm, xj)) / (pnorm * xnorm));
    }
    const auto pvals = full.sample_poly(pm);
    for (int l = 1; l <= 2; ++l) {
      const cplx v = full.product(pvals, lag[n - l - 2]);
      rep.moments(l - 1, m) = v;
      const cplx target = (l - 1 == m) ? minus_two_pi_i : cplx(0.0);
      worst = std::max(worst, std::abs(v - target) / (2.0 * std::numbers::pi));
    }
  }
  rep.residual = worst;
  return rep;
}

}  // namespace wishart
