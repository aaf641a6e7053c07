#include "wishart/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "wishart/cdf.hpp"
#include "wishart/errors.hpp"
#include "wishart/kernel.hpp"
#include "wishart/mc.hpp"
#include "wishart/zonal.hpp"

namespace wishart {

bool SuiteReport::passed() const {
  if (!error.empty() || checks.empty()) return false;
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

const CheckLine* SuiteReport::worst() const {
  const CheckLine* w = nullptr;
  double best = -1.0;
  for (const auto& c : checks) {
    const double r = c.tolerance > 0.0 ? c.value / c.tolerance : c.value;
    if (!c.pass) return &c;
    if (r > best) {
      best = r;
      w = &c;
    }
  }
  return w;
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["suite"] = name;
  j["description"] = description;
  j["passed"] = passed();
  j["seconds"] = seconds;
  if (!error.empty()) j["error"] = error;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    j["checks"].push_back(
        {{"label", c.label}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  return j;
}

namespace {

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string tname(cplx t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "t=%g%+gi", t.real(), t.imag());
  return buf;
}

void add(SuiteReport& r, std::string label, double value, double tol) {
  r.checks.push_back({std::move(label), value, tol, std::isfinite(value) && value < tol});
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

Poly laguerre_poly(const LaguerreBasis& b, const std::vector<cplx>& coeffs) {
  Poly out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != cplx(0.0)) out = out + b.monomial_form(static_cast<int>(k)) * coeffs[k];
  }
  return out;
}

const std::vector<cplx> kTs = {cplx(2, 1), cplx(1, 2)};
const std::vector<double> kTaus = {0.3, 1.0};

void parts_identity(SuiteReport& r, const SuiteOptions&) {
  for (double tau : kTaus) {
    const ModelParams p(4, 8, tau);
    const auto basis = LaguerreBasis::build(p, 10);
    for (cplx t : kTs) {
      const auto form = SkewForm::halfline(p, t, {}, 10);
      double worst = 0.0;
      for (int i = 0; i <= 5; ++i) {
        const Poly f = basis.monomial_form(i);
        for (int j = 0; j <= 4; ++j) {
          const Poly xj = Poly::monomial(j);
          const cplx lhs = skew_product(form, f, h_poly(p, j, t));
          const cplx rhs = inner_product_2(p, f, xj);
          const double scale =
              std::sqrt(std::abs(inner_product_2(p, f, f)) * std::abs(inner_product_2(p, xj, xj)));
          worst = std::max(worst, std::abs(lhs - rhs) / scale);
        }
      }
      add(r, "tau=" + fmt("%g", tau) + " " + tname(t) + " max rel err", worst, 1e-8);
    }
  }
}

void skew_op(SuiteReport& r, const SuiteOptions&) {
  const double tol = 1e-7;
  for (double tau : kTaus) {
    const ModelParams p(4, 8, tau);
    const int n = p.n();
    const auto basis = LaguerreBasis::build(p, 10);
    for (cplx t : kTs) {
      const std::string tag = "tau=" + fmt("%g", tau) + " " + tname(t);
      const auto form = SkewForm::halfline(p, t, {}, 10);
      const auto set = build_skew_polys(basis, form);
      const double table_scale = set.table.cwiseAbs().maxCoeff();
      // Conditions <pi, y^j>_1 = 0 for j <= N - 1.
      double scale = 0.0;
      for (int i = 0; i < n + 2; ++i) {
        for (int j = 0; j < n; ++j) {
          scale = std::max(scale, std::abs(skew_product(form, basis.monomial_form(i),
                                                        Poly::monomial(j))));
        }
      }
      for (const auto& [name, coeffs] :
           {std::pair{"pi_N", set.pi_n}, std::pair{"pi_N+1", set.pi_np1}}) {
        const Poly pi = laguerre_poly(basis, coeffs);
        double worst = 0.0;
        for (int j = 0; j < n; ++j) {
          worst = std::max(worst, std::abs(skew_product(form, pi, Poly::monomial(j))));
        }
        add(r, tag + " <" + name + ", y^j>_1, j<N (scaled)", worst / scale, tol);
        double worst2 = 0.0;
        for (int j = 0; j <= n - 3; ++j) {
          const Poly xj = Poly::monomial(j);
          const double s2 =
              std::sqrt(std::abs(inner_product_2(p, pi, pi)) * std::abs(inner_product_2(p, xj, xj)));
          worst2 = std::max(worst2, std::abs(inner_product_2(p, pi, xj)) / s2);
        }
        add(r, tag + " <" + name + ", x^j>_2, j<=N-3", worst2, tol);
      }
      double structural = 0.0, gamma2 = 0.0;
      for (int k = 1; 2 * k <= n; ++k) {
        structural = std::max(structural, std::abs(set.table(2 * k, 2 * k - 1)) / table_scale);
        gamma2 = std::max(gamma2, std::abs(set.table(2 * k, 2 * k - 1) /
                                           set.table(2 * k - 1, 2 * k - 2)));
      }
      add(r, tag + " <L_2k, L_2k-1>_1 (scaled)", structural, tol);
      add(r, tag + " |gamma_2k,2|", gamma2, tol);
    }
  }
}

void kernel_equiv(SuiteReport& r, const SuiteOptions&) {
  const std::vector<double> xs = {0.3, 0.8, 1.5, 2.5, 4.0};
  const std::vector<double> ys = {0.2, 0.9, 1.7, 3.0, 5.0};
  const std::vector<cplx> ts = {cplx(2, 1), cplx(1, 2), cplx(0.5, -1.5)};
  for (double tau : kTaus) {
    const ModelParams p(4, 8, tau);
    const auto basis = LaguerreBasis::build(p, p.n() + 2);
    for (cplx t : ts) {
      const auto form = SkewForm::halfline(p, t);
      const auto brute = KernelBundle::brute_force(basis, form);
      const auto cd = KernelBundle::cd_corrected(basis, form);
      // One global constant, fixed at the first grid point.
      const cplx anchor = brute.s1(xs[0], ys[0]) / cd.s1(xs[0], ys[0]);
      double worst = 0.0;
      for (double x : xs) {
        for (double y : ys) worst = std::max(worst, rel(anchor * cd.s1(x, y), brute.s1(x, y)));
      }
      const std::string tag = "tau=" + fmt("%g", tau) + " " + tname(t);
      add(r, tag + " S1 max rel err", worst, 1e-6);
      add(r, tag + " |anchor - 1|", std::abs(anchor - 1.0), 1e-6);
    }
  }
}

void derpar(SuiteReport& r, const SuiteOptions&) {
  for (double tau : kTaus) {
    const ModelParams p(4, 8, tau);
    const auto basis = LaguerreBasis::build(p, p.n() + 2);
    for (cplx t : kTs) {
      const double h = 1e-4 * std::abs(t);
      const cplx plus = det_moment(basis, SkewForm::halfline(p, t + h));
      const cplx minus = det_moment(basis, SkewForm::halfline(p, t - h));
      const cplx fd = std::log(plus / minus) / (2.0 * h);
      const cplx formula = logdet_m_derivative(basis, t);
      add(r, "tau=" + fmt("%g", tau) + " " + tname(t) + " rel err", rel(formula, fd), 1e-5);
    }
  }
}

void mc_cdf(SuiteReport& r, const SuiteOptions& opt) {
  const ModelParams p(2, 4, 1.0);
  const auto samples = sample_wishart_max_eig(McConfig::from(p, opt.seed, opt.mc_samples));
  const PfaffianCdf cdf(p);
  for (double z : {1.0, 2.0, 3.0, 4.0, 6.0}) {
    const auto e = empirical_cdf(samples, z);
    const double v = cdf(z).value;
    add(r, "tau=1 z=" + fmt("%g", z) + " |emp - cdf| / se (cdf " + fmt("%.5f", v) + ")",
        std::abs(e.mean - v) / e.se, 3.0);
  }
  const ModelParams p0(2, 4, 0.0);
  const PfaffianCdf cdf0(p0);
  for (double z : {1.0, 2.0, 3.0, 4.0, 6.0}) {
    add(r, "tau=0 z=" + fmt("%g", z) + " |cdf - null path|",
        std::abs(cdf0(z).value - null_wishart_cdf(p0, z)), 1e-6);
  }
}

void route_equiv(SuiteReport& r, const SuiteOptions&) {
  const ModelParams p(4, 8, 1.0);
  CdfOptions o;
  o.normalization = Normalization::anchor;
  o.z_anchor = anchor_z(p, o.anchor_tail, o.numerics);
  const PfaffianCdf pf(p, o);
  const FredholmCdf fr(p, o);
  for (double z : {2.0, 4.0, 6.0}) {
    const double a = pf(z).value;
    const double b = fr(z).value;
    add(r, "z=" + fmt("%g", z) + " |fredholm - pfaffian| (anchor z=" + fmt("%.3f", o.z_anchor) + ")",
        std::abs(a - b), 1e-3);
  }
}

void zonal(SuiteReport& r, const SuiteOptions& opt) {
  double worst_id = 0.0;
  for (int n : {2, 4, 6}) {
    const auto s = zonal_row(std::vector<double>(n, 1.0), 6);
    for (int k = 0; k <= 6; ++k) {
      const double closed = zonal_at_identity(n, k);
      worst_id = std::max(worst_id, std::abs(s.coefficients[k] - closed) / closed);
    }
  }
  add(r, "Z_(k)(I_N) vs closed form, k<=6, N=2,4,6", worst_id, 1e-10);

  McConfig mc;
  mc.seed = opt.seed;
  mc.n_samples = opt.mc_samples;
  const auto o4 = zonal_identity_check({0.1, 0.2, 0.3, 0.4}, 0.5, 2.0, 50, mc);
  add(r, "O(4) contour vs series rel", o4.rel_diff, 1e-8);
  add(r, "O(4) series tail bound (relative)", o4.series.tail_bound / o4.series.value, 1e-8);
  add(r, "O(4) Haar MC vs series, sigmas", o4.haar_z, 3.0);
  const auto o3 = zonal_identity_check({0.2, 0.5, 0.9}, 0.3, 1.0, 40, mc);
  add(r, "O(3) Haar MC vs series, sigmas", o3.haar_z, 3.0);

  const auto u2 = unitary_symplectic_identity_check(ZonalFamily::complex, {0.3, 0.7}, 0.4, 1.0,
                                                    50, mc);
  add(r, "U(2) contour vs series rel", u2.rel_diff, 1e-8);
  add(r, "U(2) Haar MC vs series, sigmas", u2.haar_z, 3.0);
  const auto sp2 =
      unitary_symplectic_identity_check(ZonalFamily::quaternionic, {0.3, 0.7}, 0.4, 1.0, 50);
  add(r, "Sp(2) contour vs series rel", sp2.rel_diff, 1e-8);

  const double x = 0.3, y = 0.4, m = 2.0;
  const cplx u1 = residue_contour({x}, y, m, ZonalFamily::complex);
  add(r, "U(1) contour vs e^{Mxy}", rel(u1, std::exp(m * x * y)), 1e-10);
  const cplx sp1 = residue_contour({x}, y, m, ZonalFamily::quaternionic);
  add(r, "Sp(1) contour vs M e^{Mxy}", rel(sp1, m * std::exp(m * x * y)), 1e-10);
}

void sphere_oracle(SuiteReport& r, const SuiteOptions& opt) {
  const ModelParams p(4, 8, 1.0);
  const std::vector<double> l1 = {0.5, 1.0, 1.5, 3.0};
  const std::vector<double> l2 = {0.2, 0.4, 0.8, 1.0};
  const auto c = make_contour(p.tau_tilde() * 3.0, 256, 1.0);
  const cplx ratio_c = contour_integral_I(p, l1, c) / contour_integral_I(p, l2, c);
  const auto m1 = sphere_integral_oracle(McConfig::from(p, opt.seed, opt.mc_samples), l1);
  const auto m2 = sphere_integral_oracle(McConfig::from(p, opt.seed + 1, opt.mc_samples), l2);
  const double ratio = m1.mean / m2.mean;
  const double se = ratio * std::hypot(m1.se / m1.mean, m2.se / m2.mean);
  add(r, "I ratio MC vs contour, sigmas (contour " + fmt("%.6e", ratio_c.real()) + ")",
      std::abs(ratio - ratio_c.real()) / se, 3.0);
  add(r, "contour ratio imaginary part", std::abs(ratio_c.imag() / ratio_c.real()), 1e-10);
}

void mp_density_suite(SuiteReport& r, const SuiteOptions& opt) {
  const ModelParams p(16, 64, 0.0);
  McConfig cfg = McConfig::from(p, opt.seed, 10000);
  const auto eigs = sample_wishart_eigs(cfg);
  const auto [lo, hi] = mp_edges(p);
  const int bins = 10;
  const auto h = histogram(eigs, lo, hi, bins);
  long inside = 0;
  for (long c : h.counts) inside += c;
  // Exact one-point density at finite N: S_1(x, x) / N, t-independent at tau = 0.
  const auto basis = LaguerreBasis::build(p, p.n() + 2);
  const auto kb = KernelBundle::brute_force(basis, cplx(1.0, 0.0), NumericsConfig{});
  const auto& gl = gauss_legendre(64);
  std::vector<double> mp(bins), exact(bins);
  double exact_total = 0.0;
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * h.width();
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double x = a + 0.5 * h.width() * (1.0 + gl.nodes[i]);
      const double q = 0.5 * h.width() * gl.weights[i];
      mp[b] += q * mp_density(p, x);
      exact[b] += q * kb.s1(x, x).real() / p.n();
    }
    exact_total += exact[b];
  }
  auto sigmas = [&](int b, double prob) {
    return std::abs(h.counts[b] - inside * prob) / std::sqrt(inside * prob * (1.0 - prob));
  };
  for (int b = 0; b < bins; ++b) {
    const double a = lo + b * h.width();
    add(r, "bin " + std::to_string(b) + " [" + fmt("%.3f", a) + ", " +
               fmt("%.3f", a + h.width()) + ") vs MP, sigmas",
        sigmas(b, mp[b]), 3.0);
  }
  double worst = 0.0;
  for (int b = 0; b < bins; ++b) worst = std::max(worst, sigmas(b, exact[b] / exact_total));
  add(r, "all bins vs exact N=16 density, max sigmas", worst, 3.0);
}

void numerics_hygiene(SuiteReport& r, const SuiteOptions&) {
  const ModelParams p(4, 8, 1.0);
  const std::vector<double> zs = {2.0, 4.0, 6.0};
  CdfOptions base;
  const PfaffianCdf ref(p, base);
  CdfOptions quad = base;
  quad.numerics.halfline_nodes *= 2;
  const PfaffianCdf ref_quad(p, quad);
  const FredholmCdf fred(p, base);
  CdfOptions nys = base;
  nys.numerics.nystrom_nodes *= 2;
  const FredholmCdf fred_nys(p, nys);
  double d_radius = 0.0, d_quad = 0.0, d_nys = 0.0, im = 0.0;
  for (double z : zs) {
    const auto a = ref(z);
    const auto c = ref.contour_for(z);
    const double seg = p.tau_tilde() * z;
    const auto doubled = make_contour(seg, 2 * c.node_count, 2.0 * c.radius - 0.5 * seg);
    d_radius = std::max(d_radius, std::abs(cdf_pfaffian(p, z, doubled, base).value - a.value));
    d_quad = std::max(d_quad, std::abs(ref_quad(z).value - a.value));
    const auto f = fred(z);
    d_nys = std::max(d_nys, std::abs(fred_nys(z).value - f.value));
    im = std::max({im, std::abs(a.imag), std::abs(f.imag)});
  }
  add(r, "contour radius doubling, max |dF|", d_radius, 1e-4);
  add(r, "half-line quadrature doubling, max |dF|", d_quad, 1e-4);
  add(r, "Nystrom doubling, max |dF|", d_nys, 1e-4);
  add(r, "max |Im F| over both routes", im, 1e-6);

  const auto basis = LaguerreBasis::build(p, p.n() + 2);
  const auto c = ref.contour_for(4.0);
  double pf_err = 0.0;
  for (std::size_t k = 0; k < c.nodes.size(); k += 16) {
    const auto full = SkewForm::halfline(p, c.nodes[k]);
    const auto set = build_skew_polys(basis, full);
    for (double z : zs) {
      const auto tr = SkewForm::truncated(p, c.nodes[k], z);
      const CMatrix m = moment_matrix(basis, set, tr);
      const cplx pf = pfaffian(m);
      pf_err = std::max(pf_err, rel(pf * pf, m.determinant()));
    }
  }
  add(r, "Pf^2 vs det on contour nodes, max rel", pf_err, 1e-9);
}

struct Entry {
  const char* description;
  std::function<void(SuiteReport&, const SuiteOptions&)> run;
};

const std::map<std::string, Entry>& registry() {
  static const std::map<std::string, Entry> reg = {
      {"parts-identity", {"<f, H_j>_1 = <f, x^j>_2, N=4, M=8", parts_identity}},
      {"skew-op", {"skew-orthogonality of pi_N, pi_N+1 and structural zeros", skew_op}},
      {"kernel-equiv", {"brute-force S1 vs CD kernel plus rank-2 correction", kernel_equiv}},
      {"derpar", {"d/dt log det M formula vs finite differences", derpar}},
      {"mc-cdf", {"Pfaffian CDF vs Monte-Carlo lambda_max; tau=0 vs null path", mc_cdf}},
      {"route-equiv", {"Fredholm route vs Pfaffian route, shared anchor", route_equiv}},
      {"zonal", {"zonal series, contour and Haar integrals", zonal}},
      {"sphere-oracle", {"contour formula for I(Sigma, Lambda) vs sphere MC ratios",
                         sphere_oracle}},
      {"mp-density", {"eigenvalue histogram vs Marchenko-Pastur, N=16, M=64", mp_density_suite}},
      {"numerics-hygiene", {"refinement stability, Pf^2 = det, Im F", numerics_hygiene}},
  };
  return reg;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "parts-identity", "skew-op",  "kernel-equiv",  "derpar",     "mc-cdf",
      "route-equiv",    "zonal",    "sphere-oracle", "mp-density", "numerics-hygiene"};
  return names;
}

bool is_suite(const std::string& name) { return registry().count(name) > 0; }

SuiteReport run_suite(const std::string& name, const SuiteOptions& opt) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ConfigError("unknown suite: " + name);
  SuiteReport r;
  r.name = name;
  r.description = it->second.description;
  const auto start = std::chrono::steady_clock::now();
  try {
    it->second.run(r, opt);
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace wishart
