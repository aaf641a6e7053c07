// wishart_lab: CDF tables, Monte-Carlo samples, verification suites and
// kernel dumps for the rank-1 real spiked Wishart model.
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 suite failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "wishart/cdf.hpp"
#include "wishart/errors.hpp"
#include "wishart/mc.hpp"
#include "wishart/parallel.hpp"
#include "wishart/suites.hpp"

using nlohmann::json;
using namespace wishart;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kSuite = 4 };

struct Common {
  std::string config;
  std::string out;
  std::string route = "pfaffian";
  std::uint64_t seed = 1;
  bool seed_set = false;
};

json load_config(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  // A run manifest carries the configuration it was produced from.
  if (j.contains("config") && j["config"].is_object()) return j["config"];
  return j;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

ModelParams params_of(const json& j) {
  return ModelParams(get_or(j, "N", 4), get_or(j, "M", 8), get_or(j, "tau", 1.0));
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Writes `body` to --out (or stdout) and the manifest next to it.
void emit(const Common& c, const std::string& body, json manifest) {
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + c.out);
  f << body;
  manifest["output"] = c.out;
  std::ofstream m(c.out + ".manifest.json");
  m << manifest.dump(2) << "\n";
}

json manifest_base(const std::string& verb, const json& config, double seconds) {
  return json{{"tool", "wishart_lab"},
              {"version", kVersion},
              {"verb", verb},
              {"config", config},
              {"threads", worker_count()},
              {"wall_seconds", seconds}};
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cdf(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  json cfg = load_config(c.config);
  if (c.route != "pfaffian" && c.route != "fredholm") {
    throw ConfigError("--route must be pfaffian or fredholm");
  }
  cfg["route"] = get_or<std::string>(cfg, "route", c.route);
  if (c.route != "pfaffian") cfg["route"] = c.route;
  const auto p = params_of(cfg);
  const auto zs = get_or(cfg, "z", std::vector<double>{});
  if (zs.empty()) throw ConfigError("z grid is empty");
  CdfOptions o;
  o.contour_nodes = get_or(cfg, "contour_nodes", o.contour_nodes);
  o.margin = get_or(cfg, "margin", o.margin);
  o.numerics.halfline_nodes = get_or(cfg, "halfline_nodes", o.numerics.halfline_nodes);
  o.numerics.nystrom_nodes = get_or(cfg, "nystrom_nodes", o.numerics.nystrom_nodes);
  o.chord_order = get_or(cfg, "chord_order", o.chord_order);
  const auto norm = get_or<std::string>(cfg, "normalization", "analytic");
  if (norm == "anchor") {
    o.normalization = Normalization::anchor;
  } else if (norm != "analytic") {
    throw ConfigError("normalization must be analytic or anchor");
  }
  o.anchor_tail = get_or(cfg, "anchor_tail", o.anchor_tail);
  o.z_anchor = get_or(cfg, "z_anchor", o.z_anchor);

  std::vector<CdfResult> rows;
  if (cfg["route"] == "fredholm") {
    const FredholmCdf f(p, o);
    for (double z : zs) rows.push_back(f(z));
  } else {
    const PfaffianCdf f(p, o);
    for (double z : zs) rows.push_back(f(z));
  }
  std::ostringstream csv;
  csv << "z,cdf,route,imag,cancellation,node_count,radius,retries\n";
  for (const auto& r : rows) {
    csv << num(r.z) << ',' << num(r.value) << ',' << to_string(r.route) << ',' << num(r.imag)
        << ',' << num(r.cancellation) << ',' << r.node_count << ',' << num(r.radius) << ','
        << r.retries << '\n';
  }
  json m = manifest_base("cdf", cfg, since(t0));
  to_json(m["params"], p);
  m["contour"] = {{"nodes", o.contour_nodes}, {"margin", o.margin},
                  {"normalization", to_string(o.normalization)},
                  {"z_anchor", rows.front().z_anchor}};
  m["quadrature"] = {{"halfline_nodes", o.numerics.halfline_nodes},
                     {"nystrom_nodes", o.numerics.nystrom_nodes},
                     {"chord_order", o.chord_order}};
  emit(c, csv.str(), m);
  return kOk;
}

int run_sample(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  json cfg = load_config(c.config);
  McConfig mc;
  mc.n = get_or(cfg, "N", 2);
  mc.m = get_or(cfg, "M", 4);
  mc.tau = get_or(cfg, "tau", 1.0);
  mc.n_samples = get_or(cfg, "n", 1000L);
  mc.seed = c.seed_set ? c.seed : get_or<std::uint64_t>(cfg, "seed", 1);
  cfg["seed"] = mc.seed;
  mc.validate();
  const auto mode = get_or<std::string>(cfg, "mode", "samples");
  const auto eigs = get_or<std::string>(cfg, "eigs", "max");
  if (eigs != "max" && eigs != "all") throw ConfigError("eigs must be max or all");
  const auto values = eigs == "max" ? sample_wishart_max_eig(mc) : sample_wishart_eigs(mc);
  std::ostringstream csv;
  if (mode == "samples") {
    csv << (eigs == "max" ? "index,lambda_max\n" : "index,lambda\n");
    for (std::size_t i = 0; i < values.size(); ++i) csv << i << ',' << num(values[i]) << '\n';
  } else if (mode == "histogram") {
    const int bins = get_or(cfg, "bins", 20);
    double top = 0.0;
    for (double v : values) top = std::max(top, v);
    const auto h = histogram(values, 0.0, 1.2 * top, bins);
    const double n = static_cast<double>(h.total);
    const bool overlay = mc.n % 2 == 0 && mc.m > mc.n;
    csv << "bin_lo,bin_hi,count,density,density_se" << (overlay ? ",mp_density" : "") << '\n';
    for (int b = 0; b < bins; ++b) {
      const double lo = h.lo + b * h.width();
      const double frac = h.counts[b] / n;
      csv << num(lo) << ',' << num(lo + h.width()) << ',' << h.counts[b] << ','
          << num(frac / h.width()) << ',' << num(std::sqrt(frac * (1.0 - frac) / n) / h.width());
      if (overlay) {
        csv << ',' << num(mp_density(ModelParams(mc.n, mc.m, mc.tau), lo + 0.5 * h.width()));
      }
      csv << '\n';
    }
  } else {
    throw ConfigError("mode must be samples or histogram");
  }
  json m = manifest_base("sample", cfg, since(t0));
  m["seed"] = mc.seed;
  m["chunk"] = kMcChunk;
  m["generator"] = "mt19937_64 per chunk, seeded by splitmix64; Marsaglia polar normals";
  emit(c, csv.str(), m);
  return kOk;
}

int run_verify(const Common& c, const std::string& suite) {
  if (!is_suite(suite)) {
    std::ostringstream os;
    os << "unknown suite '" << suite << "'; choose one of:";
    for (const auto& n : suite_names()) os << ' ' << n;
    throw ConfigError(os.str());
  }
  SuiteOptions opt;
  opt.seed = c.seed;
  const auto r = run_suite(suite, opt);
  std::printf("%-60s %12s %10s  %s\n", "check", "value", "tol", "result");
  for (const auto& ch : r.checks) {
    std::printf("%-60s %12.4g %10.3g  %s\n", ch.label.c_str(), ch.value, ch.tolerance,
                ch.pass ? "pass" : "FAIL");
  }
  if (!r.error.empty()) std::printf("error: %s\n", r.error.c_str());
  std::printf("%s: %s (%.1fs)\n", suite.c_str(), r.passed() ? "PASS" : "FAIL", r.seconds);
  if (!c.out.empty()) {
    json m = manifest_base("verify", json{{"suite", suite}, {"seed", c.seed}}, r.seconds);
    m["report"] = r.to_json();
    std::ofstream f(c.out);
    if (!f) throw ConfigError("cannot write " + c.out);
    f << m.dump(2) << "\n";
  }
  return r.passed() ? kOk : kSuite;
}

int run_kernel_dump(const Common& c) {
  const auto t0 = std::chrono::steady_clock::now();
  json cfg = load_config(c.config);
  const auto p = params_of(cfg);
  const auto tv = get_or(cfg, "t", std::vector<double>{2.0, 1.0});
  if (tv.size() != 2) throw ConfigError("t must be [re, im]");
  const cplx t(tv[0], tv[1]);
  const auto xs = get_or(cfg, "x", std::vector<double>{0.5, 1.0, 2.0});
  const auto ys = get_or(cfg, "y", xs);
  const auto basis = LaguerreBasis::build(p, p.n() + 2);
  const auto form = SkewForm::halfline(p, t);
  const auto brute = KernelBundle::brute_force(basis, form);
  const auto cd = KernelBundle::cd_corrected(basis, form);
  std::ostringstream csv;
  csv << "x,y,s1_re,s1_im,s1_cd_re,s1_cd_im,is1_re,is1_im,ds1_re,ds1_im\n";
  for (double x : xs) {
    for (double y : ys) {
      const cplx a = brute.s1(x, y), b = cd.s1(x, y), i = brute.is1(x, y), d = brute.ds1(x, y);
      csv << num(x) << ',' << num(y) << ',' << num(a.real()) << ',' << num(a.imag()) << ','
          << num(b.real()) << ',' << num(b.imag()) << ',' << num(i.real()) << ','
          << num(i.imag()) << ',' << num(d.real()) << ',' << num(d.imag()) << '\n';
    }
  }
  json m = manifest_base("kernel-dump", cfg, since(t0));
  to_json(m["params"], p);
  emit(c, csv.str(), m);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spiked real Wishart largest-eigenvalue laboratory"};
  app.require_subcommand(1);
  Common c;
  std::string suite;
  auto add_common = [&](CLI::App* s, bool config) {
    if (config) s->add_option("--config", c.config, "JSON configuration or run manifest");
    s->add_option("--out", c.out, "output file (a manifest is written alongside)");
    s->add_option("--seed", c.seed, "Monte-Carlo seed")->each([&](const std::string&) {
      c.seed_set = true;
    });
  };
  auto* cdf = app.add_subcommand("cdf", "largest-eigenvalue CDF table");
  add_common(cdf, true);
  cdf->add_option("--route", c.route, "pfaffian or fredholm");
  auto* sample = app.add_subcommand("sample", "Monte-Carlo eigenvalue samples or histogram");
  add_common(sample, true);
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, false);
  verify->add_option("suite", suite, "suite name")->required();
  auto* dump = app.add_subcommand("kernel-dump", "S1, IS1, dS1 on a grid");
  add_common(dump, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    if (*cdf) return run_cdf(c);
    if (*sample) return run_sample(c);
    if (*verify) return run_verify(c, suite);
    if (*dump) return run_kernel_dump(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
