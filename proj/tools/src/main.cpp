// sparsecp: command-line front end.
//
// Every subcommand prints one JSON document (or writes it to --output) that
// starts with the resolved configuration. Exit codes: 0 ok, 1 usage or I/O,
// 2 domain error, 3 numerical failure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsecp/ensemble_mc.hpp"
#include "sparsecp/errors.hpp"
#include "sparsecp/grassmann.hpp"
#include "sparsecp/limit_laws.hpp"
#include "sparsecp/phase_diagram.hpp"
#include "sparsecp/susy_oracle.hpp"

using json = nlohmann::ordered_json;
using cplx = std::complex<double>;
using namespace sparsecp;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cplx parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0, im = 0;
  char comma = 0;
  if (!(in >> re)) throw UsageError("expected re,im but got '" + text + "'");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw UsageError("expected re,im but got '" + text + "'");
  }
  in >> std::ws;
  if (!in.eof()) throw UsageError("trailing characters in complex value '" + text + "'");
  return {re, im};
}

GridRange parse_range(const std::string& text) {
  GridRange r{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.min >> c1 >> r.max >> c2 >> r.count) || c1 != ':' || c2 != ':')
    throw UsageError("expected min:max:count but got '" + text + "'");
  in >> std::ws;
  if (!in.eof()) throw UsageError("trailing characters in range '" + text + "'");
  if (r.count < 1) throw UsageError("range count must be positive in '" + text + "'");
  if (!(r.max >= r.min)) throw UsageError("range max below min in '" + text + "'");
  return r;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// JSON has no infinities: -inf saddle values become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SPARSECP_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') return v;
    std::cerr << "warning: ignoring non-numeric SPARSECP_SEED='" << env << "'\n";
  }
  return 1;
}

struct Globals {
  std::uint64_t seed = default_seed();
  unsigned workers = 1;
  std::string output;
};

void emit(const Globals& g, const json& doc) {
  const std::string text = doc.dump(2) + "\n";
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + g.output + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + g.output + "'");
}

// Gradient of f0 in (t1, t2, x, y); vanishes at every saddle.
std::array<double, 4> grad_f0(double t1, double t2, double x, double y, double b, double z) {
  const double h = (z + t1 * t1) * (z + t2 * t2) + 2 * b * t1 * t2 * x + b * b * (x * x + y * y);
  return {-2 * t1 + (2 * t1 * (z + t2 * t2) + 2 * b * t2 * x) / h,
          -2 * t2 + (2 * t2 * (z + t1 * t1) + 2 * b * t1 * x) / h,
          -2 * x + (2 * b * t1 * t2 + 2 * b * b * x) / h, -2 * y + 2 * b * b * y / h};
}

double max_abs(const std::array<double, 4>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------

struct PhaseDiagramArgs {
  std::string b = "0:1.5:301";
  std::string z = "0:2:401";
  std::string out = ".";
  int curve_samples = 200;
};

void run_phase_diagram(const Globals& g, const PhaseDiagramArgs& a) {
  const GridRange br = parse_range(a.b), zr = parse_range(a.z);
  if (a.curve_samples < 2) throw UsageError("--curve-samples must be at least 2");
  const auto res = export_grid(br, zr, a.out, a.curve_samples, g.workers);
  json doc;
  doc["config"] = {{"command", "phase-diagram"}, {"b", a.b},          {"z", a.z},
                   {"out", a.out},               {"curve_samples", a.curve_samples},
                   {"workers", g.workers}};
  doc["grid_csv"] = res.grid_csv.string();
  doc["curves_csv"] = res.curves_csv.string();
  doc["grid_rows"] = res.grid_rows;
  json curves = json::array();
  for (const auto& c : res.curves) {
    double worst = 0;
    for (const auto& s : c.samples) worst = std::max(worst, std::abs(s.residual));
    curves.push_back({{"curve", std::string(to_string(c.curve_id))},
                      {"samples", c.samples.size()},
                      {"b_min", c.samples.front().b},
                      {"b_max", c.samples.back().b},
                      {"max_residual", worst},
                      {"tolerance", c.tolerance}});
  }
  doc["curves"] = curves;
  {
    std::ofstream run(std::filesystem::path(a.out) / "run.json", std::ios::binary);
    run << doc["config"].dump(2) << "\n";
  }
  emit(g, doc);
}

struct SaddleArgs {
  double b = 0;
  double z0sq = 0;
};

void run_saddle(const Globals& g, const SaddleArgs& a) {
  const PhasePoint pt(a.b, a.z0sq);
  const auto set = saddle_values(pt);
  json doc;
  doc["config"] = {{"command", "saddle"}, {"b", a.b}, {"z0sq", a.z0sq}};
  doc["p"] = finite_or_null(pt.p());
  doc["region"] = static_cast<int>(classify_by_argmax(pt));
  doc["region_name"] = std::string(to_string(classify_by_argmax(pt)));
  if (set.star) {
    const auto& s = *set.star;
    const double t = std::sqrt(s.t_star_sq);
    json star = {{"alpha", s.alpha},   {"t_star", t},         {"t_star_sq", s.t_star_sq},
                 {"x_star", s.x_star}, {"h_star", s.h_star}, {"value", s.value}};
    star["residual_cubic"] = (a.b > 0 && a.z0sq > 0) ? std::abs(alpha_cubic(s.alpha, pt)) : 0.0;
    star["residual_gradient"] = max_abs(grad_f0(t, t, s.x_star, 0, a.b, a.z0sq));
    doc["star"] = star;
  } else {
    doc["star"] = nullptr;
  }
  if (set.vsaddle) {
    const double r0 = std::sqrt(std::max(0.0, set.vsaddle->r0_sq));
    doc["v"] = {{"r0_sq", set.vsaddle->r0_sq},
                {"value", set.vsaddle->value},
                {"residual_gradient", max_abs(grad_f0(0, 0, r0, 0, a.b, a.z0sq))}};
  } else {
    doc["v"] = nullptr;
  }
  doc["zero"] = {{"value", finite_or_null(set.zero.value)}};
  emit(g, doc);
}

struct LimitsArgs {
  double p = 4;
  std::string z0 = "0.5,0";
  std::string zeta1 = "1,0";
  std::string zeta2 = "-1,0";
};

void run_limits(const Globals& g, const LimitsArgs& a) {
  const cplx z0 = parse_complex(a.z0);
  const Displacement d{parse_complex(a.zeta1), parse_complex(a.zeta2)};
  const PhasePoint pt = PhasePoint::from_p(a.p, std::norm(z0));
  const Region region = classify_by_argmax(pt);
  const LimitParams params = make_limit_params(a.p, z0);
  json doc;
  doc["config"] = {{"command", "limits"},
                   {"p", a.p},
                   {"z0", complex_json(z0)},
                   {"zeta1", complex_json(d.zeta1)},
                   {"zeta2", complex_json(d.zeta2)}};
  doc["b"] = pt.b();
  doc["z0sq"] = pt.z0sq();
  doc["region"] = static_cast<int>(region);
  doc["region_name"] = std::string(to_string(region));
  doc["beta"] = params.beta ? json(*params.beta) : json(nullptr);
  doc["gamma_coeff"] = params.gamma_coeff ? json(*params.gamma_coeff) : json(nullptr);
  doc["ratio"] = limit_ratio(region, params, d);
  doc["ginibre_ratio"] = ginibre_limit_ratio(d);
  emit(g, doc);
}

struct McArgs {
  int n = 128;
  double p = 4;
  std::string z0 = "0.5,0";
  std::string zeta1 = "1,0";
  std::string zeta2 = "-1,0";
  std::size_t samples = 10000;
  std::size_t bootstrap = 400;
  std::size_t jackknife_groups = 50;
};

void run_mc(const Globals& g, const McArgs& a) {
  RatioConfig cfg;
  cfg.n = a.n;
  cfg.p = a.p;
  cfg.z0 = parse_complex(a.z0);
  cfg.zeta1 = parse_complex(a.zeta1);
  cfg.zeta2 = parse_complex(a.zeta2);
  cfg.samples = a.samples;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  cfg.bootstrap_resamples = a.bootstrap;
  cfg.jackknife_groups = a.jackknife_groups;
  const auto r = estimate_ratio(cfg);
  json doc;
  doc["config"] = {{"command", "mc"},
                   {"n", a.n},
                   {"p", a.p},
                   {"z0", complex_json(cfg.z0)},
                   {"zeta1", complex_json(cfg.zeta1)},
                   {"zeta2", complex_json(cfg.zeta2)},
                   {"samples", a.samples},
                   {"seed", g.seed},
                   {"workers", g.workers},
                   {"bootstrap", a.bootstrap},
                   {"jackknife_groups", a.jackknife_groups}};
  doc["ratio"] = r.estimate.mean;
  doc["ci_low"] = r.ci_low;
  doc["ci_high"] = r.ci_high;
  doc["stderr"] = r.estimate.std_error;
  doc["jackknife"] = r.jackknife;
  doc["reliable"] = r.reliable;
  doc["samples"] = r.estimate.n_samples;
  doc["discarded"] = r.discarded;
  doc["n"] = a.n;
  doc["p"] = a.p;
  doc["z0"] = complex_json(cfg.z0);
  doc["zeta1"] = complex_json(cfg.zeta1);
  doc["zeta2"] = complex_json(cfg.zeta2);
  doc["seed"] = g.seed;
  emit(g, doc);
}

struct OracleArgs {
  int n = 1;
  double p = 1;
  std::string z1 = "0.3,0";
  std::string z2 = "0.3,0";
  std::size_t samples = 100000;
};

void run_oracle(const Globals& g, const OracleArgs& a) {
  OracleConfig cfg;
  cfg.n = a.n;
  cfg.p = a.p;
  cfg.z1 = parse_complex(a.z1);
  cfg.z2 = parse_complex(a.z2);
  cfg.samples = a.samples;
  cfg.seed = g.seed;
  cfg.workers = g.workers;
  const auto est = f2_oracle(cfg);
  json doc;
  doc["config"] = {{"command", "oracle"}, {"n", a.n},           {"p", a.p},
                   {"z1", complex_json(cfg.z1)}, {"z2", complex_json(cfg.z2)},
                   {"samples", a.samples},      {"seed", g.seed}, {"workers", g.workers}};
  doc["mean_re"] = est.mean.real();
  doc["mean_im"] = est.mean.imag();
  doc["stderr"] = est.std_error_re;
  doc["stderr_im"] = est.std_error_im;
  doc["samples"] = est.n_samples;
  doc["seed"] = g.seed;
  doc["n"] = a.n;
  doc["p"] = a.p;
  doc["closed_form"] = a.n == 1 ? json(f2_closed_form_n1(a.p, cfg.z1, cfg.z2)) : json(nullptr);
  emit(g, doc);
}

struct GrassmannArgs {
  int trials = 1000;
  int max_dim = 4;
  double tolerance = 1e-10;
};

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = {gauss(rng), gauss(rng)};
  return m;
}

int run_grassmann(const Globals& g, const GrassmannArgs& a) {
  if (a.trials < 1) throw UsageError("--trials must be positive");
  if (a.max_dim < 1 || a.max_dim > 8) throw UsageError("--max-dim must be in [1, 8]");
  std::mt19937_64 rng(g.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> ub(0, 2);
  json dims = json::array();
  double worst_gauss = 0;
  const int per_dim = std::min(a.trials, 100);
  for (int d = 1; d <= a.max_dim; ++d) {
    double worst = 0;
    for (int i = 0; i < per_dim; ++i)
      worst = std::max(worst, verify_gaussian_grassmann(random_matrix(rng, d)).residual);
    dims.push_back({{"d", d}, {"matrices", per_dim}, {"max_residual", worst}});
    worst_gauss = std::max(worst_gauss, worst);
  }
  double worst_jk = 0;
  for (int i = 0; i < a.trials; ++i) {
    const Eigen::Matrix2cd Q = random_matrix(rng, 2);
    const cplx v{gauss(rng), gauss(rng)};
    const cplx z1{gauss(rng), gauss(rng)}, z2{gauss(rng), gauss(rng)};
    worst_jk = std::max(worst_jk, verify_jk(Q, v, z1, z2, ub(rng)).residual);
  }
  const double worst = std::max(worst_gauss, worst_jk);
  json doc;
  doc["config"] = {{"command", "grassmann-check"}, {"trials", a.trials},
                   {"max_dim", a.max_dim},         {"tolerance", a.tolerance},
                   {"seed", g.seed}};
  doc["gaussian"] = dims;
  doc["jk_trials"] = a.trials;
  doc["jk_max_residual"] = worst_jk;
  doc["max_residual"] = worst;
  doc["pass"] = worst <= a.tolerance;
  emit(g, doc);
  return worst <= a.tolerance ? 0 : kExitNumerical;
}

struct HcizArgs {
  std::string a = "0.5,-0.3";
  std::string b = "1,0.2";
  double t = 0.7;
  std::size_t samples = 100000;
};

void run_hciz(const Globals& g, const HcizArgs& a) {
  const cplx ea = parse_complex(a.a), eb = parse_complex(a.b);
  const std::array<double, 2> sa{ea.real(), ea.imag()}, sb{eb.real(), eb.imag()};
  const auto r = hciz_check(sa, sb, a.t, a.samples, g.seed, g.workers);
  json doc;
  doc["config"] = {{"command", "hciz"}, {"a", json::array({sa[0], sa[1]})},
                   {"b", json::array({sb[0], sb[1]})}, {"t", a.t},
                   {"samples", a.samples}, {"seed", g.seed}, {"workers", g.workers}};
  doc["mc"] = r.lhs.mean;
  doc["stderr"] = r.lhs.std_error;
  doc["formula"] = r.rhs;
  doc["sigma"] = r.lhs.std_error > 0 ? json(std::abs(r.lhs.mean - r.rhs) / r.lhs.std_error)
                                     : json(nullptr);
  emit(g, doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse non-Hermitian random matrices: phase diagram, saddle values, limit laws "
               "and Monte Carlo checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed (default: $SPARSECP_SEED or 1)")->capture_default_str();
  app.add_option("--workers", g.workers, "Worker threads for Monte Carlo paths")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--output,-o", g.output, "Write the JSON result to this file instead of stdout");

  PhaseDiagramArgs pd;
  auto* pd_cmd = app.add_subcommand("phase-diagram", "Export region grid and curve CSVs");
  pd_cmd->add_option("--b", pd.b, "b range min:max:count")->capture_default_str();
  pd_cmd->add_option("--z", pd.z, "|z0|^2 range min:max:count")->capture_default_str();
  pd_cmd->add_option("--out", pd.out, "Output directory")->capture_default_str();
  pd_cmd->add_option("--curve-samples", pd.curve_samples, "Samples per curve")
      ->capture_default_str();

  SaddleArgs sd;
  auto* sd_cmd = app.add_subcommand("saddle", "Saddle points and values of f0 at (b, |z0|^2)");
  sd_cmd->add_option("--b", sd.b, "Sparsity scale b >= 0")->required();
  sd_cmd->add_option("--z0sq", sd.z0sq, "|z0|^2 >= 0")->required();

  LimitsArgs lm;
  auto* lm_cmd = app.add_subcommand("limits", "Limiting normalized correlation ratio");
  lm_cmd->add_option("--p", lm.p, "Mean nonzeros per row")->capture_default_str();
  lm_cmd->add_option("--z0", lm.z0, "Spectral point re,im")->capture_default_str();
  lm_cmd->add_option("--zeta1", lm.zeta1, "Local displacement re,im")->capture_default_str();
  lm_cmd->add_option("--zeta2", lm.zeta2, "Local displacement re,im")->capture_default_str();

  McArgs mc;
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of the normalized ratio");
  mc_cmd->add_option("--n", mc.n, "Matrix size")->capture_default_str();
  mc_cmd->add_option("--p", mc.p, "Mean nonzeros per row")->capture_default_str();
  mc_cmd->add_option("--z0", mc.z0, "Spectral point re,im")->capture_default_str();
  mc_cmd->add_option("--zeta1", mc.zeta1, "Local displacement re,im")->capture_default_str();
  mc_cmd->add_option("--zeta2", mc.zeta2, "Local displacement re,im")->capture_default_str();
  mc_cmd->add_option("--samples", mc.samples, "Matrices drawn")->capture_default_str();
  mc_cmd->add_option("--bootstrap", mc.bootstrap, "Bootstrap resamples")->capture_default_str();
  mc_cmd->add_option("--jackknife-groups", mc.jackknife_groups, "Jackknife groups")
      ->capture_default_str();

  OracleArgs orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Gaussian-expectation oracle for f2(z1, z2)");
  orc_cmd->add_option("--n", orc.n, "Matrix size")->capture_default_str();
  orc_cmd->add_option("--p", orc.p, "Mean nonzeros per row")->capture_default_str();
  orc_cmd->add_option("--z1", orc.z1, "First point re,im")->capture_default_str();
  orc_cmd->add_option("--z2", orc.z2, "Second point re,im")->capture_default_str();
  orc_cmd->add_option("--samples", orc.samples, "Gaussian draws")->capture_default_str();

  GrassmannArgs gr;
  auto* gr_cmd =
      app.add_subcommand("grassmann-check", "Berezin integral identities on random inputs");
  gr_cmd->add_option("--trials", gr.trials, "Random draws for the j_k identity")
      ->capture_default_str();
  gr_cmd->add_option("--max-dim", gr.max_dim, "Largest Gaussian identity dimension")
      ->capture_default_str();
  gr_cmd->add_option("--tolerance", gr.tolerance, "Residual threshold")->capture_default_str();

  HcizArgs hz;
  auto* hz_cmd = app.add_subcommand("hciz", "Haar Monte Carlo check of the d=2 HCIZ formula");
  hz_cmd->add_option("--a", hz.a, "Spectrum of A as a1,a2")->capture_default_str();
  hz_cmd->add_option("--b", hz.b, "Spectrum of B as b1,b2")->capture_default_str();
  hz_cmd->add_option("--t", hz.t, "Coupling")->capture_default_str();
  hz_cmd->add_option("--samples", hz.samples, "Haar draws")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (pd_cmd->parsed()) run_phase_diagram(g, pd);
    if (sd_cmd->parsed()) run_saddle(g, sd);
    if (lm_cmd->parsed()) run_limits(g, lm);
    if (mc_cmd->parsed()) run_mc(g, mc);
    if (orc_cmd->parsed()) run_oracle(g, orc);
    if (gr_cmd->parsed()) return run_grassmann(g, gr);
    if (hz_cmd->parsed()) run_hciz(g, hz);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
