#include "wishart/skew.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wishart/errors.hpp"

namespace wishart {

std::vector<cplx> branch_points(const ModelParams& p, const std::vector<cplx>& ts) {
  std::vector<cplx> out;
  if (p.tau_tilde() == 0.0) return out;
  for (const cplx& t : ts) out.push_back(t / p.tau_tilde());
  return out;
}

namespace {

void check_t(const ModelParams& p, cplx t, double end) {
  if (t.imag() == 0.0 && p.tau_tilde() > 0.0 && t.real() >= 0.0 &&
      t.real() <= p.tau_tilde() * end) {
    throw SingularPointError("t lies on the branch cut of the weight");
  }
  if (t == cplx(0.0)) throw SingularPointError("t = 0");
}

}  // namespace

SkewForm::SkewForm(const ModelParams& p, cplx t, double end, int base_nodes,
                   double kappa, int degree)
    : params_(p), t_(t), end_(end), kappa_(kappa) {
  if (degree < 0) degree = p.n() + 2;
  if (!(end >= 0.0)) throw ConfigError("support end must be >= 0");
  check_t(p, t, end);
  if (end > 0.0) {
    rule_ = QuadratureRule::square({0.0, end}, {base_nodes}).refined(branch_points(p, {t}));
  } else {
    rule_ = QuadratureRule::square({0.0, 0.0}, {base_nodes});
  }
  w_.resize(rule_.size());
  for (std::size_t i = 0; i < rule_.size(); ++i) w_[i] = weight_w(p, t, rule_.nodes()[i]);
}

SkewForm::SkewForm(const ModelParams& p, cplx t, const QuadratureRule& rule,
                   double kappa)
    : params_(p), t_(t), end_(rule.upper()), kappa_(kappa), rule_(rule) {
  check_t(p, t, end_);
  w_.resize(rule_.size());
  for (std::size_t i = 0; i < rule_.size(); ++i) w_[i] = weight_w(p, t, rule_.nodes()[i]);
}

SkewForm SkewForm::halfline(const ModelParams& p, cplx t, const NumericsConfig& cfg,
                            int degree) {
  if (degree < 0) degree = p.n() + 2;
  return SkewForm(p, t, halfline_cutoff(p, degree), cfg.halfline_nodes, cfg.kappa, degree);
}

SkewForm SkewForm::truncated(const ModelParams& p, cplx t, double z,
                             const NumericsConfig& cfg, int degree) {
  if (degree < 0) degree = p.n() + 2;
  const double end = std::min(z, halfline_cutoff(p, degree));
  return SkewForm(p, t, end, cfg.halfline_nodes, cfg.kappa, degree);
}

std::vector<cplx> SkewForm::weighted(const std::vector<cplx>& f) const {
  std::vector<cplx> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * w_[i];
  return out;
}

std::vector<cplx> SkewForm::eps_nodes(const std::vector<cplx>& phi) const {
  return epsilon_at_nodes(rule_, phi, kappa_);
}

cplx SkewForm::eps_at(const std::vector<cplx>& phi, double x) const {
  return epsilon_at(rule_, phi, x, kappa_);
}

cplx SkewForm::product(const std::vector<cplx>& f, const std::vector<cplx>& g) const {
  const auto pf = weighted(f);
  const auto pg = weighted(g);
  const auto ef = eps_nodes(pf);
  const auto eg = eps_nodes(pg);
  cplx fg = 0.0, gf = 0.0;
  const auto& q = rule_.weights();
  for (std::size_t i = 0; i < q.size(); ++i) {
    fg += q[i] * pf[i] * eg[i];
    gf += q[i] * pg[i] * ef[i];
  }
  return 0.5 * (fg - gf);
}

CMatrix SkewForm::table(const std::vector<std::vector<cplx>>& f) const {
  const int n = static_cast<int>(f.size());
  std::vector<std::vector<cplx>> phi(n), eps(n);
  for (int a = 0; a < n; ++a) {
    phi[a] = weighted(f[a]);
    eps[a] = eps_nodes(phi[a]);
  }
  const auto& q = rule_.weights();
  CMatrix raw(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx acc = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) acc += q[i] * phi[a][i] * eps[b][i];
      raw(a, b) = acc;
    }
  }
  return 0.5 * (raw - raw.transpose());
}

std::vector<cplx> SkewForm::sample_poly(const Poly& f) const {
  std::vector<cplx> out(rule_.size());
  for (std::size_t i = 0; i < rule_.size(); ++i) out[i] = f(rule_.nodes()[i]);
  return out;
}

std::vector<std::vector<cplx>> SkewForm::sample_laguerre(const LaguerreBasis& b,
                                                         int count) const {
  std::vector<std::vector<cplx>> out(count, std::vector<cplx>(rule_.size()));
  std::vector<double> l;
  for (std::size_t i = 0; i < rule_.size(); ++i) {
    b.eval_all(rule_.nodes()[i], count, l);
    for (int k = 0; k < count; ++k) out[k][i] = l[k];
  }
  return out;
}

cplx skew_product(const SkewForm& form, const Poly& f, const Poly& g) {
  return form.product(form.sample_poly(f), form.sample_poly(g));
}

cplx inner_product_2(const ModelParams& p, const Poly& f, const Poly& g,
                     int base_nodes) {
  const int degree = std::max(0, f.degree()) + std::max(0, g.degree());
  const auto rule = QuadratureRule::halfline(p, base_nodes, degree);
  return integrate_halfline(
      [&](double x) { return f(x) * g(x) * weight_w0(p, x); }, rule);
}

Poly h_poly(const ModelParams& p, int j, cplx t) {
  if (j < 0) throw ConfigError("H_j needs j >= 0");
  const double tt = p.tau_tilde();
  // P = x^{j+1} (t - tt x); w'/w = -M/2 + (M-N-1)/(2x) + (tt/2)/(t - tt x).
  const Poly big_p = Poly::monomial(j + 1) * Poly({t, -tt});
  return big_p.derivative() + big_p * cplx(-0.5 * p.m()) +
         big_p.divide_by_x() * cplx(p.w_power()) +
         Poly::monomial(j + 1, 0.5 * tt);
}

std::pair<std::vector<cplx>, std::vector<cplx>> skew_pair(const CMatrix& table,
                                                          int k, double tol) {
  const int size = static_cast<int>(table.rows());
  std::vector<cplx> even(size, 0.0), odd(size, 0.0);
  if (2 * k + 1 >= size) throw ConfigError("skew pair index out of range");
  even[2 * k] = 1.0;
  odd[2 * k + 1] = 1.0;
  if (k == 0) return {even, odd};
  const cplx g = table(2 * k - 1, 2 * k - 2);
  // Laguerre norms fall off geometrically with degree; compare with the two rows involved.
  const double scale = std::sqrt(table.row(2 * k - 1).cwiseAbs().maxCoeff() *
                                 table.row(2 * k - 2).cwiseAbs().maxCoeff());
  if (!(std::abs(g) > tol * scale)) {
    throw DegenerateSkewProduct(
        "<L_" + std::to_string(2 * k - 1) + ", L_" + std::to_string(2 * k - 2) +
            ">_1 vanishes",
        k, std::abs(g) / (scale > 0.0 ? scale : 1.0));
  }
  even[2 * k - 1] = -table(2 * k, 2 * k - 2) / g;
  odd[2 * k - 1] = -table(2 * k + 1, 2 * k - 2) / g;
  odd[2 * k - 2] = table(2 * k + 1, 2 * k - 1) / g;
  return {even, odd};
}

SkewPolySet build_skew_polys(const LaguerreBasis& basis, const SkewForm& full,
                             double tol) {
  const int n = basis.params().n();
  SkewPolySet s;
  s.t = full.t();
  s.table = full.table(full.sample_laguerre(basis, n + 2));
  std::tie(s.pi_nm2, s.pi_nm1) = skew_pair(s.table, n / 2 - 1, tol);
  std::tie(s.pi_n, s.pi_np1) = skew_pair(s.table, n / 2, tol);
  CVector a = Eigen::Map<const CVector>(s.pi_nm2.data(), n + 2);
  CVector b = Eigen::Map<const CVector>(s.pi_nm1.data(), n + 2);
  s.h_nm1_1 = a.transpose() * s.table * b;
  return s;
}

CMatrix r_basis(const SkewPolySet& set, int n) {
  CMatrix r = CMatrix::Zero(n, n);
  for (int j = 0; j < n - 2; ++j) r(j, j) = 1.0;
  for (int k = 0; k < n; ++k) {
    r(n - 2, k) = set.pi_nm2[k];
    r(n - 1, k) = set.pi_nm1[k];
  }
  return r;
}

CMatrix moment_matrix(const LaguerreBasis& basis, const SkewPolySet& set,
                      const SkewForm& form) {
  const int n = basis.params().n();
  const CMatrix t = form.table(form.sample_laguerre(basis, n));
  const CMatrix r = r_basis(set, n);
  const CMatrix m = r * t * r.transpose();
  return 0.5 * (m - m.transpose());
}

cplx pfaffian(const CMatrix& a_in) {
  const int n = static_cast<int>(a_in.rows());
  if (a_in.cols() != n) throw ConfigError("pfaffian needs a square matrix");
  if (n % 2 != 0) throw ConfigError("pfaffian needs an even dimension");
  if (n == 0) return 1.0;
  const double norm = a_in.cwiseAbs().maxCoeff();
  if ((a_in + a_in.transpose()).cwiseAbs().maxCoeff() > 1e-10 * norm) {
    throw ConfigError("pfaffian input is not antisymmetric");
  }
  CMatrix a = a_in;
  cplx pf = 1.0;
  for (int k = 0; k + 1 < n; k += 2) {
    int kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (int i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == cplx(0.0)) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const int rest = n - k - 2;
      const CVector tau = a.row(k).segment(k + 2, rest).transpose() / a(k, k + 1);
      const CVector col = a.col(k + 1).segment(k + 2, rest);
      a.block(k + 2, k + 2, rest, rest) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

}  // namespace wishart
