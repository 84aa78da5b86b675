// toricgeo: command-line front end for the toric geodesic library.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "toric/envelope.hpp"
#include "toric/geodesic.hpp"
#include "toric/model_library.hpp"
#include "toric/spec_io.hpp"
#include "toric/suites.hpp"

namespace fs = std::filesystem;
using namespace toric;

namespace {

constexpr int kExitParameter = 2;
constexpr int kExitDisagreement = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
  std::string command;
  std::string spec, u0, u1;
  std::size_t grid_n = 0;      // 0: taken from the specs
  std::size_t grid_size = 257;
  double depth = 4.0;
  double epsilon = 1e-3;
  std::string shape = "box";
  std::int64_t bmax = 5;
  std::size_t time_res = 33;
  std::vector<double> times{0.5};
  double trace_eps = 0.1;
  std::vector<double> trace_times{0.2, 0.1, 0.05, 0.025};
  double alpha = 0.4;
  bool oracle = false;
  bool strict = false;
  std::uint64_t seed = 20240611;
  std::string suite = "all";
  std::size_t cases = 0;       // 0: suite default
  std::size_t dual_size = 0;
  double dual_lo = kNaN, dual_hi = kNaN;  // NaN: command default
  std::string out = ".";

  json echo() const {
    return {{"command", command},   {"spec", spec},         {"u0", u0},
            {"u1", u1},             {"grid_n", grid_n},     {"grid_size", grid_size},
            {"depth", depth},       {"epsilon", epsilon},   {"shape", shape},
            {"bmax", bmax},         {"time_res", time_res}, {"t", times},
            {"trace_eps", trace_eps}, {"trace_t", trace_times}, {"alpha", alpha},
            {"oracle", oracle},     {"strict", strict},     {"seed", seed},
            {"suite", suite},       {"cases", cases},       {"dual_size", dual_size},
            {"dual_lo", dual_lo},   {"dual_hi", dual_hi}};
  }
};

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_csv(const fs::path& path, const GridNd& g, std::span<const double> values,
               const std::vector<std::string>& extra_names = {},
               const std::vector<std::vector<double>>& extra = {}) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  out << "# n=" << g.dimension() << ";extents=";
  for (std::size_t k = 0; k < g.dimension(); ++k) out << (k ? "x" : "") << g.extent(k);
  out << ";shape=" << to_string(g.shape()) << "\n";
  for (std::size_t k = 0; k < g.dimension(); ++k) out << "x" << k + 1 << ",";
  out << "value";
  for (const auto& e : extra_names) out << "," << e;
  out << "\n";
  std::vector<double> x(g.dimension());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    for (double xi : x) out << fmt(xi) << ",";
    out << fmt(values[i]);
    for (const auto& col : extra) out << "," << fmt(col[i]);
    out << "\n";
  }
}

void write_json(const RunConfig& cfg, json report) {
  report["config"] = cfg.echo();
  const fs::path path = fs::path(cfg.out) / (cfg.command + ".json");
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  out << report.dump(2) << "\n";
  std::cout << report.dump(2) << "\n";
}

FunctionSpec require(const std::string& path, const char* flag) {
  if (path.empty()) throw ParameterError(std::string("missing ") + flag);
  return load_spec(path);
}

std::size_t dimension_of(const RunConfig& cfg, std::initializer_list<const FunctionSpec*> specs) {
  std::optional<std::size_t> d;
  for (const auto* s : specs)
    if (auto sd = s->dimension()) {
      if (d && *d != *sd) throw DimensionError("specs differ in dimension");
      d = sd;
    }
  if (cfg.grid_n) {
    if (d && *d != cfg.grid_n) throw DimensionError("--grid-n does not match the spec dimension");
    return cfg.grid_n;
  }
  return d.value_or(1);
}

GridNd grid_for(const RunConfig& cfg, std::size_t n) {
  DomainSpec d{n, cfg.depth, cfg.epsilon, parse_shape(cfg.shape)};
  return build_grid(d, cfg.grid_size);
}

int cmd_conjugate(const RunConfig& cfg) {
  const auto spec = require(cfg.spec, "--spec");
  const auto grid = grid_for(cfg, dimension_of(cfg, {&spec}));
  const auto f = sample(spec, grid);
  // slope range of the data, widened to contain p = 0
  const auto fit = DualGrid::fitted(f, cfg.dual_size);
  std::vector<std::pair<double, double>> ranges;
  for (const auto& a : fit.axes())
    ranges.emplace_back(std::isnan(cfg.dual_lo) ? std::min(a.front(), 0.0) : cfg.dual_lo,
                        std::isnan(cfg.dual_hi) ? std::max(a.back(), 0.0) : cfg.dual_hi);
  const auto dual = DualGrid::uniform(ranges, fit.axis(0).size());
  const auto h = conjugate(f, dual);
  write_csv(fs::path(cfg.out) / "conjugate.csv", dual.nodes(), h.raw());
  json jr = json::array();
  for (const auto& a : dual.axes()) jr.push_back({{"lo", a.front()}, {"hi", a.back()}, {"size", a.size()}});
  write_json(cfg, {{"dual", jr}, {"input_convex", f.is_convex()}, {"conjugate_convex", h.is_convex()}});
  return 0;
}

int cmd_envelope(const RunConfig& cfg) {
  const auto a = require(cfg.u0.empty() ? cfg.spec : cfg.u0, "--u0 or --spec");
  std::optional<FunctionSpec> b;
  if (!cfg.u1.empty()) b = load_spec(cfg.u1);
  const auto grid = grid_for(cfg, b ? dimension_of(cfg, {&a, &*b}) : dimension_of(cfg, {&a}));
  const auto fa = sample(a, grid);
  const auto env = b ? envelope_pair(fa, sample(*b, grid), cfg.dual_size) : biconjugate(fa, cfg.dual_size);
  const auto raw = env.raw();
  write_csv(fs::path(cfg.out) / "envelope.csv", grid, raw);
  write_json(cfg, {{"nodes", grid.size()}, {"convex", env.is_convex()}});
  return 0;
}

int cmd_rooftop(const RunConfig& cfg) {
  const auto f = require(cfg.u0, "--u0");
  const auto g = require(cfg.u1, "--u1");
  const auto r = rooftop_limit(f, g);
  write_csv(fs::path(cfg.out) / "rooftop.csv", r.estimate.grid(), r.estimate.raw());
  write_json(cfg, {{"converged_to_f", r.converged_to_f},
                   {"stabilized", r.stabilized},
                   {"steps", r.steps},
                   {"residual", r.residual},
                   {"tolerance", r.tolerance},
                   {"sup_changes", r.sup_changes}});
  return 0;
}

int cmd_newton(const RunConfig& cfg) {
  const auto f = require(cfg.spec, "--spec");
  const std::size_t n = dimension_of(cfg, {&f});
  const double lo = std::isnan(cfg.dual_lo) ? -0.5 : cfg.dual_lo, hi = std::isnan(cfg.dual_hi) ? 2.5 : cfg.dual_hi;
  const auto dual = DualGrid::uniform(n, lo, hi, cfg.dual_size ? cfg.dual_size : 25);
  const auto body = newton_body(f, dual);
  std::vector<double> member(dual.size());
  for (std::size_t i = 0; i < member.size(); ++i) member[i] = body.mask[i];
  write_csv(fs::path(cfg.out) / "newton.csv", dual.nodes(), member, {"margin"}, {body.margin});
  write_json(cfg, {{"members", body.count()},
                   {"nodes", dual.size()},
                   {"unstable", body.unstable},
                   {"range_warning", body.range_warning},
                   {"upward_closed", is_upward_closed(body)},
                   {"discretely_convex", is_discretely_convex(body)}});
  return 0;
}

int cmd_slopes(const RunConfig& cfg) {
  const auto f = require(cfg.u0.empty() ? cfg.spec : cfg.u0, "--u0 or --spec");
  std::optional<FunctionSpec> g;
  if (!cfg.u1.empty()) g = load_spec(cfg.u1);
  const std::size_t n = g ? dimension_of(cfg, {&f, &*g}) : dimension_of(cfg, {&f});
  const auto curves = default_curves(n, cfg.bmax);
  json rows = json::array();
  json report;
  if (g) {
    const auto r = slope_condition(f, *g, curves);
    for (const auto& c : r.curves) rows.push_back({{"b", c.curve.exponents}, {"slope_f", c.slope_f}, {"slope_g", c.slope_g}});
    report = {{"holds", r.holds}, {"worst_curve", r.curves[r.worst].curve.exponents}, {"worst_gap", r.worst_gap}};
  } else {
    for (const auto& c : curves) {
      const auto s = directional_slope(f, c);
      rows.push_back({{"b", c.exponents}, {"slope", s.estimate}, {"stable", s.stable}, {"history", s.history}});
    }
  }
  report["curves"] = rows;
  write_json(cfg, report);
  return 0;
}

int cmd_geodesic(const RunConfig& cfg) {
  const auto f = require(cfg.u0, "--u0");
  const auto g = require(cfg.u1, "--u1");
  const auto grid = grid_for(cfg, dimension_of(cfg, {&f, &g}));
  const auto F = sample(f, grid), G = sample(g, grid);
  json slices = json::array();
  std::vector<std::string> names;
  std::vector<std::vector<double>> cols;
  for (double t : cfg.times) {
    if (!(t > 0 && t < 1)) throw ParameterError("--t values must lie in (0,1)");
    const auto s = geodesic_at(F, G, t);
    names.push_back("t=" + fmt(t));
    cols.push_back(s.values.raw());
    slices.push_back({{"t", t}, {"convex", s.values.is_convex()}, {"increasing", s.values.is_increasing()}});
  }
  json report{{"slices", slices}};
  if (cfg.oracle) {
    if (cfg.time_res < 8) throw ParameterError("--time-res must be at least 8");
    const auto ref = geodesic_oracle(F, G, cfg.time_res);
    double worst = 0;
    const auto dual = toric::detail::geodesic_dual(F, G, 0);
    for (const auto& s : ref) {
      const auto fast = geodesic_at(F, G, s.t, dual).values.raw();
      const auto slow = s.values.raw();
      for (std::size_t i = 0; i < fast.size(); ++i)
        if (std::isfinite(fast[i]) && std::isfinite(slow[i])) worst = std::max(worst, std::abs(fast[i] - slow[i]));
    }
    report["oracle_layers"] = cfg.time_res;
    report["oracle_sup_difference"] = worst;
  }
  // first slice in the value column, any further slices as extra columns
  const auto first = cols.front();
  names.erase(names.begin());
  cols.erase(cols.begin());
  write_csv(fs::path(cfg.out) / "geodesic.csv", grid, first, names, cols);
  write_json(cfg, report);
  return 0;
}

int cmd_energy(const RunConfig& cfg) {
  const auto profile = cfg.spec.empty() ? RadialProfile::power(cfg.alpha, cfg.epsilon)
                                        : RadialProfile::from_spec(load_spec(cfg.spec), cfg.epsilon);
  const auto e = energy_e1(profile);
  json report{{"alpha", profile.alpha ? json(*profile.alpha) : json(nullptr)},
              {"truncations", e.truncations},
              {"E_k", e.partial},
              {"verdict", e.verdict},
              {"reference", e.reference},
              {"calibration", {{"kappa", e.calibration.kappa}, {"pole_mass", e.calibration.pole_mass}}}};
  report["extrapolated"] = e.extrapolated ? json(*e.extrapolated) : json(nullptr);
  write_json(cfg, report);
  return 0;
}

int cmd_check(const RunConfig& cfg) {
  const auto f = require(cfg.u0, "--u0");
  const auto g = require(cfg.u1, "--u1");
  ConvergenceOptions opt;
  opt.eps = cfg.trace_eps;
  opt.times = cfg.trace_times;
  opt.bmax = cfg.bmax;
  opt.trace_grid.boundary_margin = cfg.epsilon;
  const auto r = theorem_check(f, g, opt);
  json trace = json::array();
  for (const auto& m : r.measure_trace) trace.push_back({{"t", m.t}, {"measure", m.measure}});
  write_json(cfg, {{"verdict_slopes", r.verdict_slopes},
                   {"verdict_rooftop", r.verdict_rooftop},
                   {"agreement", r.agreement},
                   {"measure_trace", trace},
                   {"diagnostics",
                    {{"worst_curve", r.slopes.curves[r.slopes.worst].curve.exponents},
                     {"worst_gap", r.slopes.worst_gap},
                     {"rooftop_residual", r.rooftop.residual},
                     {"rooftop_tolerance", r.rooftop.tolerance},
                     {"rooftop_steps", r.rooftop.steps},
                     {"rooftop_stabilized", r.rooftop.stabilized}}}});
  return cfg.strict && !r.agreement ? kExitDisagreement : 0;
}

json suite_json(const suites::SuiteResult& r) {
  return {{"suite", r.suite}, {"cases", r.cases}, {"failures", r.failures}, {"max_error", r.max_error}, {"notes", r.notes}};
}

int cmd_verify(const RunConfig& cfg) {
  const std::set<std::string> known{"all", "identities", "prop33", "transform", "envelope", "equivalence", "geodesic"};
  if (!known.count(cfg.suite)) throw ParameterError("unknown suite '" + cfg.suite + "'");
  auto want = [&](const char* s) { return cfg.suite == "all" || cfg.suite == s; };
  auto cases = [&](std::size_t def) { return cfg.cases ? cfg.cases : def; };
  json results = json::array();
  std::size_t failures = 0;
  auto add = [&](const suites::SuiteResult& r, json extra = json::object()) {
    json j = suite_json(r);
    j.update(extra);
    results.push_back(j);
    failures += r.failures;
  };
  if (want("transform")) add(suites::transform_suite(cfg.seed, cases(200)));
  if (want("identities") || cfg.suite == "prop33") add(suites::identities_suite(cfg.seed, cases(200)));
  if (want("envelope")) {
    const auto r = suites::envelope_suite(cfg.seed, cases(100), cases(20));
    add(r, {{"max_error_1d", r.max_error_1d}, {"max_error_2d", r.max_error_2d}});
  }
  if (want("equivalence"))
    for (std::size_t n : {1, 2, 3}) {
      const auto r = suites::equivalence_suite(cfg.seed, n, cases(100), cfg.bmax);
      add(r, {{"agreement", r.cases ? 1.0 - double(r.failures) / double(r.cases) : 0.0},
              {"oracle_mismatches", r.oracle_mismatches}});
    }
  if (want("geodesic")) {
    const auto r = suites::geodesic_suite(cfg.seed, cases(50), cfg.grid_size, cfg.time_res);
    add(r, {{"worst_ratio", r.worst_ratio}, {"linear_slice_error_cells", r.linear_slice_error},
            {"linear_slopes", r.linear_slopes}});
  }
  write_json(cfg, {{"suites", results}, {"failures", failures}});
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak geodesics between toric plurisubharmonic functions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* c) {
    c->add_option("--grid-n", cfg.grid_n, "number of variables (default: from the specs)");
    c->add_option("--grid-size", cfg.grid_size, "nodes per axis")->check(CLI::Range(2, 1 << 20));
    c->add_option("--depth", cfg.depth, "truncation depth L of the log box")->check(CLI::PositiveNumber);
    c->add_option("--epsilon", cfg.epsilon, "boundary margin")->check(CLI::Range(1e-12, 0.5));
    c->add_option("--shape", cfg.shape, "box or logball")->check(CLI::IsMember({"box", "logball"}));
    c->add_option("--bmax", cfg.bmax, "largest curve exponent")->check(CLI::Range(1, 64));
    c->add_option("--time-res", cfg.time_res, "time layers of the geodesic oracle")->check(CLI::Range(3, 4097));
    c->add_option("--seed", cfg.seed, "seed for randomized suites");
    c->add_option("--out", cfg.out, "output directory");
    c->add_option("--dual-size", cfg.dual_size, "dual grid nodes per axis (0: automatic)");
  };

  auto* conj = app.add_subcommand("conjugate", "discrete Legendre transform of a spec");
  auto* env = app.add_subcommand("envelope", "convex envelope P(f) or P(f, g)");
  auto* roof = app.add_subcommand("rooftop", "rooftop limit of P(f, g + c)");
  auto* newton = app.add_subcommand("newton", "Newton body of a spec on a dual grid");
  auto* slopes = app.add_subcommand("slopes", "asymptotic slopes along monomial curves");
  auto* geo = app.add_subcommand("geodesic", "geodesic slices u_t");
  auto* energy = app.add_subcommand("energy", "L1 energy of a radial profile");
  auto* check = app.add_subcommand("check", "two-sided endpoint convergence check");
  auto* verify = app.add_subcommand("verify", "randomized property suites");
  for (auto* c : {conj, env, roof, newton, slopes, geo, energy, check, verify}) common(c);

  for (auto* c : {conj, env, newton, slopes, energy}) c->add_option("--spec", cfg.spec, "spec JSON file");
  for (auto* c : {env, roof, slopes, geo, check}) {
    c->add_option("--u0", cfg.u0, "endpoint u0 (spec JSON)");
    c->add_option("--u1", cfg.u1, "endpoint u1 (spec JSON)");
  }
  for (auto* c : {conj, newton}) {
    c->add_option("--dual-lo", cfg.dual_lo, "lower end of the dual range");
    c->add_option("--dual-hi", cfg.dual_hi, "upper end of the dual range");
  }
  geo->add_option("--t", cfg.times, "times in (0,1)");
  geo->add_flag("--oracle", cfg.oracle, "also run the (x,t) envelope oracle");
  energy->add_option("--alpha", cfg.alpha, "exponent of the radial power profile")->check(CLI::Range(1e-9, 1.0));
  check->add_flag("--strict", cfg.strict, "exit 3 when the two verdicts disagree");
  check->add_option("--trace-eps", cfg.trace_eps, "threshold of the measure trace")->check(CLI::PositiveNumber);
  check->add_option("--trace-t", cfg.trace_times, "times of the measure trace");
  verify->add_option("--suite", cfg.suite, "all, transform, identities (alias prop33), envelope, equivalence, geodesic");
  verify->add_option("--cases", cfg.cases, "cases per suite (0: default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParameter;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    fs::create_directories(cfg.out);
    if (cfg.command == "conjugate") return cmd_conjugate(cfg);
    if (cfg.command == "envelope") return cmd_envelope(cfg);
    if (cfg.command == "rooftop") return cmd_rooftop(cfg);
    if (cfg.command == "newton") return cmd_newton(cfg);
    if (cfg.command == "slopes") return cmd_slopes(cfg);
    if (cfg.command == "geodesic") return cmd_geodesic(cfg);
    if (cfg.command == "energy") return cmd_energy(cfg);
    if (cfg.command == "check") return cmd_check(cfg);
    return cmd_verify(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const toric::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParameter;
  }
}
