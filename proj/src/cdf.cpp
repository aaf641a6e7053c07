#include "wishart/cdf.hpp"

#include <cmath>
#include <numbers>

#include "wishart/errors.hpp"
#include "wishart/parallel.hpp"

namespace wishart {

std::string to_string(CdfRoute r) {
  return r == CdfRoute::pfaffian ? "pfaffian" : "fredholm";
}

std::string to_string(Normalization n) {
  return n == Normalization::analytic ? "analytic" : "anchor";
}

namespace {

constexpr cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);

ContourSpec rotated(const ContourSpec& c, double dphase) {
  ContourSpec out = c;
  const double step = 2.0 * std::numbers::pi / c.node_count;
  out.phase = c.phase + dphase;
  for (int k = 0; k < c.node_count; ++k) {
    const cplx e = std::polar(1.0, step * (k + 0.5 + out.phase));
    out.nodes[k] = c.center + c.radius * e;
    out.weights[k] = cplx(0.0, 1.0) * c.radius * e * step;
  }
  return out;
}

void check_enclosure(const ModelParams& p, const ContourSpec& c, double z) {
  if (!c.encloses(0.0, p.tau_tilde() * z)) {
    throw ConfigError("contour must enclose [0, tau_tilde * z] for z=" + std::to_string(z));
  }
}

std::pair<cplx, double> weighted_sum(const ContourSpec& c, const std::vector<cplx>& terms) {
  cplx sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const cplx v = c.weights[k] * terms[k];
    sum += v;
    abs_sum += std::abs(v);
  }
  const double cancel = std::abs(sum) > 0.0 ? abs_sum / std::abs(sum) : 0.0;
  return {sum, cancel};
}

cplx analytic_norm(const ModelParams& p, const NumericsConfig& cfg) {
  const ModelParams p0(p.n(), p.m(), 0.0);
  const double pf0 = null_pfaffian(p0, halfline_cutoff(p0, p0.n()), cfg);
  return kTwoPiI * pf0 / sphere_constant(p);
}

double resolve_anchor(const ModelParams& p, const CdfOptions& opt) {
  if (opt.normalization == Normalization::analytic) return 0.0;
  return opt.z_anchor > 0.0 ? opt.z_anchor : anchor_z(p, opt.anchor_tail, opt.numerics);
}

CdfResult make_result(CdfRoute route, double z, cplx r, const ContourSpec& c, double z_anchor,
                      cplx norm, double cancel, int retries) {
  CdfResult res;
  res.z = z;
  res.value = r.real();
  res.imag = r.imag();
  res.route = route;
  res.node_count = c.node_count;
  res.radius = c.radius;
  res.z_anchor = z_anchor;
  res.normalization = norm;
  res.cancellation = cancel;
  res.retries = retries;
  return res;
}

}  // namespace

double null_pfaffian(const ModelParams& p, double end, const NumericsConfig& cfg) {
  const ModelParams p0(p.n(), p.m(), 0.0);
  const int n = p0.n();
  if (end <= 0.0) return 0.0;
  const auto basis = LaguerreBasis::build(p0, n + 2);
  const auto rule = QuadratureRule::square({0.0, end}, {cfg.halfline_nodes});
  std::vector<std::vector<cplx>> phi(n, std::vector<cplx>(rule.size()));
  std::vector<double> l;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes()[i];
    const double w = std::exp(-0.5 * p0.m() * x + p0.w_power() * std::log(x));
    basis.eval_all(x, n, l);
    for (int j = 0; j < n; ++j) phi[j][i] = l[j] * w;
  }
  std::vector<std::vector<cplx>> eps(n);
  for (int j = 0; j < n; ++j) eps[j] = epsilon_at_nodes(rule, phi[j], cfg.kappa);
  CMatrix m(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        acc += rule.weights()[i] * (phi[a][i] * eps[b][i]).real();
      }
      m(a, b) = acc;
    }
  }
  m = 0.5 * (m - m.transpose()).eval();
  return pfaffian(m).real();
}

double null_wishart_cdf(const ModelParams& p, double z, const NumericsConfig& cfg) {
  const ModelParams p0(p.n(), p.m(), 0.0);
  if (z <= 0.0) return 0.0;
  const double x_max = halfline_cutoff(p0, p0.n());
  if (z >= x_max) return 1.0;
  return null_pfaffian(p0, z, cfg) / null_pfaffian(p0, x_max, cfg);
}

double anchor_z(const ModelParams& p, double tail, const NumericsConfig& cfg) {
  if (!(tail > 0.0 && tail < 1.0)) throw ConfigError("anchor tail must lie in (0, 1)");
  const ModelParams p0(p.n(), p.m(), 0.0);
  const double x_max = halfline_cutoff(p0, p0.n());
  const double full = null_pfaffian(p0, x_max, cfg);
  const double hi = mp_edges(p0).second;
  const double step = 0.05 * hi;
  double z = hi;
  for (; z < x_max; z += step) {
    if (1.0 - null_pfaffian(p0, z, cfg) / full <= tail) break;
  }
  return (1.0 + p.tau()) * std::min(z, x_max);
}

double sphere_constant(const ModelParams& p) {
  const double n = p.n();
  const double m = p.m();
  return std::exp(-0.5 * m * std::log1p(p.tau()) + std::lgamma(0.5 * n) +
                  (1.0 - 0.5 * n) * std::log(m));
}

ContourSpec cdf_contour(const ModelParams& p, double z, int nodes, double margin,
                        double phase) {
  return make_contour(p.tau_tilde() * std::max(z, 0.0), nodes, margin, phase);
}

QuadratureRule contour_rule(const ModelParams& p, const std::vector<double>& breaks,
                            const std::vector<int>& base_nodes,
                            const std::vector<cplx>& ts) {
  return QuadratureRule::square(breaks, base_nodes).refined(branch_points(p, ts));
}

// ---------------------------------------------------------------- Pfaffian

PfaffianCdf::PfaffianCdf(const ModelParams& p, const CdfOptions& opt)
    : params_(p), opt_(opt), basis_(LaguerreBasis::build(p, p.n() + 2)) {
  x_max_ = halfline_cutoff(p, p.n() + 2);
  z_anchor_ = resolve_anchor(p, opt);
  norm_ = opt.normalization == Normalization::analytic ? analytic_norm(p, opt.numerics)
                                                       : contour_sum(z_anchor_).first;
  if (norm_ == cplx(0.0)) throw NumericalError("normalisation vanishes");
}

PfaffianCdf::PfaffianCdf(const ModelParams& p, const ContourSpec& contour,
                         const CdfOptions& opt)
    : params_(p), opt_(opt), basis_(LaguerreBasis::build(p, p.n() + 2)), fixed_(contour) {
  x_max_ = halfline_cutoff(p, p.n() + 2);
  z_anchor_ = resolve_anchor(p, opt);
  norm_ = opt.normalization == Normalization::analytic ? analytic_norm(p, opt.numerics)
                                                       : contour_sum(z_anchor_).first;
  if (norm_ == cplx(0.0)) throw NumericalError("normalisation vanishes");
}

ContourSpec PfaffianCdf::contour_for(double z) const {
  if (fixed_) {
    check_enclosure(params_, *fixed_, z);
    return *fixed_;
  }
  return cdf_contour(params_, z, opt_.contour_nodes, opt_.margin);
}

std::vector<cplx> PfaffianCdf::node_pfaffians(double z, const ContourSpec& c) const {
  std::vector<cplx> out(c.nodes.size(), 0.0);
  if (z <= 0.0) return out;
  const double end = std::min(z, x_max_);
  const int base = opt_.numerics.halfline_nodes;
  const auto full_rule = contour_rule(params_, {0.0, x_max_}, {base}, c.nodes);
  const auto rule = contour_rule(params_, {0.0, end}, {base}, c.nodes);
  parallel_for(out.size(), [&](std::size_t k) {
    const SkewForm full(params_, c.nodes[k], full_rule, opt_.numerics.kappa);
    const auto set = build_skew_polys(basis_, full, opt_.numerics.degenerate_tol);
    const SkewForm form(params_, c.nodes[k], rule, opt_.numerics.kappa);
    out[k] = pfaffian(moment_matrix(basis_, set, form));
  });
  return out;
}

std::pair<cplx, double> PfaffianCdf::contour_sum(double z, ContourSpec& c,
                                                 int& retries) const {
  retries = 0;
  std::vector<cplx> terms;
  try {
    terms = node_pfaffians(z, c);
  } catch (const DegenerateSkewProduct&) {
    // One quarter-step rotation moves every node off the degenerate point.
    c = rotated(c, 0.25);
    retries = 1;
    terms = node_pfaffians(z, c);
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    terms[k] *= std::exp(static_cast<double>(params_.m()) * c.nodes[k]);
  }
  return weighted_sum(c, terms);
}

std::pair<cplx, double> PfaffianCdf::contour_sum(double z) const {
  auto c = contour_for(z);
  int retries = 0;
  return contour_sum(z, c, retries);
}

CdfResult PfaffianCdf::operator()(double z) const {
  auto c = contour_for(z);
  int retries = 0;
  const auto [sum, cancel] = contour_sum(z, c, retries);
  return make_result(CdfRoute::pfaffian, z, sum / norm_, c, z_anchor_, norm_, cancel,
                     retries);
}

CdfResult cdf_pfaffian(const ModelParams& p, double z, const ContourSpec& contour,
                       const CdfOptions& opt) {
  return PfaffianCdf(p, contour, opt)(z);
}

// ------------------------------------------------------------ log det M

cplx logdet_m_derivative(const LaguerreBasis& basis, const SkewForm& full) {
  const auto kb = KernelBundle::brute_force(basis, full);
  const int n = basis.params().n();
  const auto& phi = kb.phi_nodes();
  std::vector<std::vector<cplx>> psi(n);
  for (int j = 0; j < n; ++j) psi[j] = full.eps_nodes(phi[j]);
  const auto& rule = full.rule();
  const CMatrix& mu = kb.mu();
  const double tt = basis.params().tau_tilde();
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    cplx diag = 0.0;
    for (int j = 0; j < n; ++j) {
      cplx inner = 0.0;
      for (int k = 0; k < n; ++k) inner += mu(j, k) * psi[k][i];
      diag -= phi[j][i] * inner;
    }
    acc += rule.weights()[i] * diag / (full.t() - tt * rule.nodes()[i]);
  }
  return -acc;
}

cplx logdet_m_derivative(const LaguerreBasis& basis, cplx t, const NumericsConfig& cfg) {
  return logdet_m_derivative(basis, SkewForm::halfline(basis.params(), t, cfg));
}

cplx det_moment(const LaguerreBasis& basis, const SkewForm& full) {
  const auto set = build_skew_polys(basis, full);
  return moment_matrix(basis, set, full).determinant();
}

// ------------------------------------------------------------ Fredholm

cplx fredholm_det_on(const LaguerreBasis& basis, cplx t, const QuadratureRule& split,
                     double kappa) {
  const auto [s, e] = split.segment_nodes(1);
  if (s == e) return 1.0;
  const SkewForm form(basis.params(), t, split, kappa);
  const auto kb = KernelBundle::brute_force(basis, form);
  const int big_n = basis.params().n();
  const int n = e - s;
  const auto& q = split.weights();
  const auto& phi = kb.phi_nodes();
  CMatrix pm(n, big_n), sm(n, big_n), th(n, big_n);
  for (int j = 0; j < big_n; ++j) {
    const auto psi = form.eps_nodes(phi[j]);
    const auto cum = split.cumulative(phi[j]);
    const cplx total = split.integrate(phi[j]);
    cplx cz = 0.0;
    for (int i = 0; i < s; ++i) cz += q[i] * phi[j][i];
    for (int i = 0; i < n; ++i) {
      const int g = s + i;
      const double sq = std::sqrt(q[g]);
      const cplx xi = kappa * (2.0 * (cum[g] - cz) - (total - cz));
      pm(i, j) = sq * phi[j][g];
      sm(i, j) = sq * psi[g];
      th(i, j) = sq * (psi[g] - xi);
    }
  }
  const CMatrix& mu = kb.mu();
  CMatrix k(2 * n, 2 * n);
  k.block(0, 0, n, n) = -pm * mu * sm.transpose();
  k.block(0, n, n, n) = pm * mu * pm.transpose();
  k.block(n, 0, n, n) = -th * mu * sm.transpose();
  k.block(n, n, n, n) = th * mu * pm.transpose();
  const CMatrix a = CMatrix::Identity(2 * n, 2 * n) - k;
  return a.partialPivLu().determinant();
}

FredholmDet fredholm_det(const LaguerreBasis& basis, cplx t, double z, int n_nystrom,
                         const NumericsConfig& cfg) {
  const ModelParams& p = basis.params();
  const double x_max = halfline_cutoff(p, p.n() + 2);
  FredholmDet out;
  if (z >= x_max) {
    out.value = out.refined = 1.0;
    return out;
  }
  const double zc = std::max(z, 0.0);
  const auto bp = branch_points(p, {t});
  const auto rule = QuadratureRule::square({0.0, zc, x_max}, {cfg.halfline_nodes, n_nystrom})
                        .refined(bp);
  const auto rule2 =
      QuadratureRule::square({0.0, zc, x_max}, {cfg.halfline_nodes, 2 * n_nystrom})
          .refined(bp);
  out.value = fredholm_det_on(basis, t, rule, cfg.kappa);
  out.refined = fredholm_det_on(basis, t, rule2, cfg.kappa);
  const auto [s, e] = rule.segment_nodes(1);
  out.nodes = e - s;
  out.unstable = std::abs(out.value - out.refined) > 1e-4 * std::abs(out.refined);
  return out;
}

FredholmCdf::FredholmCdf(const ModelParams& p, const CdfOptions& opt,
                         std::optional<cplx> c_ref)
    : params_(p), opt_(opt), basis_(LaguerreBasis::build(p, p.n() + 2)) {
  setup(c_ref);
}

FredholmCdf::FredholmCdf(const ModelParams& p, const ContourSpec& contour,
                         const CdfOptions& opt, std::optional<cplx> c_ref)
    : params_(p), opt_(opt), basis_(LaguerreBasis::build(p, p.n() + 2)), fixed_(contour) {
  setup(c_ref);
}

void FredholmCdf::setup(std::optional<cplx> c_ref) {
  x_max_ = halfline_cutoff(params_, params_.n() + 2);
  z_anchor_ = resolve_anchor(params_, opt_);
  if (c_ref) {
    c_ref_ = *c_ref;
  } else {
    // A point above the bulk, well clear of the cut.
    const double edge = params_.tau_tilde() * mp_edges(params_).second * (1.0 + params_.tau());
    c_ref_ = cplx(0.5 * edge, 0.5 * edge + opt_.margin);
  }
  if (!(c_ref_.imag() > 0.0)) throw ConfigError("c_ref must lie in the upper half plane");
  const auto full = SkewForm::halfline(params_, c_ref_, opt_.numerics);
  const auto set = build_skew_polys(basis_, full, opt_.numerics.degenerate_tol);
  pf_ref_ = pfaffian(moment_matrix(basis_, set, full));
  norm_ = opt_.normalization == Normalization::analytic
              ? analytic_norm(params_, opt_.numerics)
              : contour_sum(z_anchor_).first;
  if (norm_ == cplx(0.0)) throw NumericalError("normalisation vanishes");
}

ContourSpec FredholmCdf::contour_for(double z) const {
  if (fixed_) {
    check_enclosure(params_, *fixed_, z);
    return *fixed_;
  }
  return cdf_contour(params_, z, opt_.contour_nodes, opt_.margin);
}

std::vector<cplx> FredholmCdf::log_det_path(const ContourSpec& c) const {
  const auto& gl = gauss_legendre(opt_.chord_order);
  const std::size_t nodes = c.nodes.size();
  // Segment 0 runs c_ref -> t_0, segment k runs t_{k-1} -> t_k.
  std::vector<cplx> seg_a(nodes), seg_b(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    seg_a[k] = k == 0 ? c_ref_ : c.nodes[k - 1];
    seg_b[k] = c.nodes[k];
  }
  const int order = opt_.chord_order;
  std::vector<cplx> points(nodes * order);
  for (std::size_t k = 0; k < nodes; ++k) {
    for (int g = 0; g < order; ++g) {
      points[k * order + g] = seg_a[k] + 0.5 * (seg_b[k] - seg_a[k]) * (1.0 + gl.nodes[g]);
    }
  }
  std::vector<cplx> all = points;
  all.insert(all.end(), c.nodes.begin(), c.nodes.end());
  all.push_back(c_ref_);
  const auto rule = contour_rule(params_, {0.0, x_max_}, {opt_.numerics.halfline_nodes}, all);
  std::vector<cplx> deriv(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const SkewForm full(params_, points[i], rule, opt_.numerics.kappa);
    deriv[i] = logdet_m_derivative(basis_, full);
  });
  std::vector<cplx> out(nodes);
  cplx acc = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    cplx seg = 0.0;
    for (int g = 0; g < order; ++g) seg += gl.weights[g] * deriv[k * order + g];
    acc += 0.5 * (seg_b[k] - seg_a[k]) * seg;
    out[k] = acc;
  }
  return out;
}

std::pair<cplx, double> FredholmCdf::contour_sum(double z) const {
  if (z <= 0.0) return {0.0, 0.0};
  const auto c = contour_for(z);
  const std::size_t nodes = c.nodes.size();
  std::vector<cplx> dets(nodes, 1.0);
  if (z < x_max_) {
    const auto rule = contour_rule(params_, {0.0, z, x_max_},
                                   {opt_.numerics.halfline_nodes, opt_.numerics.nystrom_nodes},
                                   c.nodes);
    parallel_for(nodes, [&](std::size_t k) {
      dets[k] = fredholm_det_on(basis_, c.nodes[k], rule, opt_.numerics.kappa);
    });
  }
  const auto path = log_det_path(c);
  std::vector<cplx> terms(nodes);
  cplx prev = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    cplx s = std::sqrt(dets[k]);
    if (k > 0 && std::abs(s - prev) > std::abs(s + prev)) s = -s;
    prev = s;
    terms[k] = pf_ref_ *
               std::exp(static_cast<double>(params_.m()) * c.nodes[k] + 0.5 * path[k]) * s;
  }
  return weighted_sum(c, terms);
}

CdfResult FredholmCdf::operator()(double z) const {
  const auto [sum, cancel] = contour_sum(z);
  cplx r = sum / norm_;
  if (r.real() < 0.0) r = -r;
  const auto c = contour_for(std::max(z, 0.0));
  return make_result(CdfRoute::fredholm, z, r, c, z_anchor_, norm_, cancel, 0);
}

CdfResult cdf_fredholm(const ModelParams& p, double z, const ContourSpec& contour, cplx c0,
                       const CdfOptions& opt) {
  return FredholmCdf(p, contour, opt, c0)(z);
}

}  // namespace wishart
