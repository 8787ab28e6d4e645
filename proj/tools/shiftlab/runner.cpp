#include "runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

namespace shiftlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

json options_for(const ExperimentConfig& cfg, const std::string& id) {
  if (cfg.checks.contains(id) && cfg.checks.at(id).is_object()) return cfg.checks.at(id);
  return json::object();
}

template <class T>
T opt_or(const json& o, const char* key, T fallback) {
  if (!o.contains(key)) return fallback;
  try {
    return o.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for check option '") + key + "'");
  }
}

// one stream per check, all drawn from the run seed
std::uint64_t check_seed(std::uint64_t seed, const std::string& id) {
  const auto& ids = known_checks();
  const auto idx = static_cast<std::uint32_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
  std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), idx};
  std::uint32_t out[2];
  sq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

void set_verdict(CheckResult& r, bool pass) { r.verdict = pass ? "PASS" : "FAIL"; }

json spectrum_json(const verify::DecayReport& d) {
  json j;
  j["verdict"] = verify::to_string(d.verdict);
  j["rows"] = d.rows;
  j["dim"] = d.dim;
  j["kernel_dim"] = d.kernel_dim;
  j["sigma_max"] = d.sigma_max;
  j["sigma_min"] = d.sigma_min;
  j["ratio"] = d.ratio;
  j["gap"] = d.gap;
  j["metrics"] = d.metrics;
  j["row_tags"] = d.row_tags;
  j["notes"] = d.notes;
  return j;
}

PlotSeries spectrum_plot(const verify::DecayReport& d) {
  PlotSeries s{"spectrum", {}};
  for (std::size_t i = 0; i < d.spectrum.size(); ++i) s.points.emplace_back(static_cast<double>(i), d.spectrum[i]);
  return s;
}

void check_isometry(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T, const json& o) {
  const int trials = opt_or<int>(o, "trials", 200);
  const int res = opt_or<int>(o, "resolution", 4096);
  r.tolerance = opt_or<double>(o, "tolerance", 1e-9);
  const auto rep = shiftop::check_isometry(T, trials, res, check_seed(cfg.seed, r.id), r.tolerance);
  r.metric = rep.max_deviation;
  r.details = {{"trials", trials}, {"resolution", res}, {"sampled", rep.sampled}};
  set_verdict(r, rep.pass);
}

void check_codimension(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T, const json& o) {
  const int trials = opt_or<int>(o, "trials", 200);
  r.tolerance = opt_or<double>(o, "tolerance", 1e-12);
  const double wmin = opt_or<double>(o, "witness_min", 1e-3);
  std::mt19937_64 rng(check_seed(cfg.seed, r.id));
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const auto g = shiftop::random_input(T, rng);
    worst = std::max(worst, std::abs(shiftop::range_membership(T, shiftop::apply_T(T, g)).defect));
  }
  const auto w = shiftop::range_membership(T, funcspace::point_one_indicator(T.space));
  r.metric = worst;
  r.details = {{"trials", trials}, {"witness_defect", std::abs(w.defect)}, {"witness_min", wmin},
               {"witness_in_range", w.in_range}};
  set_verdict(r, worst <= r.tolerance && std::abs(w.defect) >= wmin);
}

void check_inverse(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T, const json& o) {
  const int trials = opt_or<int>(o, "trials", 200);
  r.tolerance = opt_or<double>(o, "tolerance", 1e-10);
  std::mt19937_64 rng(check_seed(cfg.seed, r.id));
  double worst = 0;
  for (int t = 0; t < trials; ++t) {
    const auto f = shiftop::random_input(T, rng);
    worst = std::max(worst, shiftop::distance(shiftop::apply_T_inverse(T, shiftop::apply_T(T, f)), f));
  }
  r.metric = worst;
  r.details = {{"trials", trials}};
  set_verdict(r, worst <= r.tolerance);
}

verify::RankOptions rank_options(const json& o) {
  verify::RankOptions ro;
  ro.gap = opt_or<double>(o, "gap", ro.gap);
  ro.null_tol = opt_or<double>(o, "null_tol", ro.null_tol);
  return ro;
}

void check_kernel(CheckResult& r, const ExperimentConfig&, const shiftop::ShiftOperator& T, const json& o) {
  const auto expect = opt_or<std::string>(o, "expect", "TRIVIAL_KERNEL");
  verify::DecayReport d;
  bool extra = true;
  if (T.block) {
    verify::SusoOptions so;
    so.window = opt_or<int>(o, "window", -1);
    so.orbit_samples = opt_or<int>(o, "orbit_samples", -1);
    so.include_derived = opt_or<bool>(o, "include_derived", true);
    so.rank = rank_options(o);
    d = verify::suso_constraint_kernel(T, so);
  } else if (T.composition) {
    verify::CompositionKernelOptions co;
    co.window = opt_or<int>(o, "window", co.window);
    co.view_depth = opt_or<int>(o, "view_depth", -1);
    co.orbit_budget = opt_or<std::int64_t>(o, "orbit_budget", -1);
    co.periodic_words = opt_or<int>(o, "periodic_words", co.periodic_words);
    co.rank = rank_options(o);
    d = verify::composition_kernel_check(T, co);
  } else if (T.golden) {
    const int degree = T.space->blocks.front().degree;
    d = verify::golden_arc_kernel(degree, T.golden->arc_ratio, rank_options(o));
    const double floor = opt_or<double>(o, "min_phase_gap", 1e-3);
    extra = degree == 0 || d.metrics.at("min_phase_gap") > floor;
  } else {
    throw ValidationError("no kernel system for this construction");
  }
  r.metric = d.ratio;
  r.tolerance = d.gap;
  r.details = spectrum_json(d);
  r.details["expect"] = expect;
  r.plots.push_back(spectrum_plot(d));
  set_verdict(r, verify::to_string(d.verdict) == expect && extra);
}

void check_recursion(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T, const json& o) {
  const int trials = opt_or<int>(o, "trials", 20);
  r.tolerance = opt_or<double>(o, "tolerance", 1e-10);
  const auto rep = verify::block_recursion_check(T, trials, check_seed(cfg.seed, r.id), opt_or<int>(o, "k_max", -1));
  r.metric = rep.max_residual;
  r.details = {{"trials", trials}, {"k_max", rep.k_max}, {"N_values", rep.N_values}};
  set_verdict(r, rep.max_residual <= r.tolerance);
}

void check_fibonacci(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator&, const json& o) {
  const int count = opt_or<int>(o, "polys", 100);
  const int degree = opt_or<int>(o, "degree", 12);
  const int n_max = opt_or<int>(o, "n_max", 10);
  r.tolerance = opt_or<double>(o, "tolerance", 1e-9);
  const auto seed = check_seed(cfg.seed, r.id);
  const auto rep = verify::fibonacci_recursion_check(verify::random_trig_polys(count, degree, seed), n_max, seed + 1);
  r.metric = rep.additivity_residual;
  r.details = {{"polys", count},
               {"degree", degree},
               {"n_max", n_max},
               {"phi_identity", rep.phi_identity},
               {"base_case_residual", rep.base_case_residual},
               {"hypothesis_residual", rep.hypothesis_residual},
               {"claim_residual", rep.claim_residual},
               {"hypothesis_holds", rep.hypothesis_holds},
               {"implication_holds", rep.implication_holds},
               {"fibonacci", rep.fibonacci}};
  set_verdict(r, rep.additivity_residual <= r.tolerance && rep.base_case_residual <= r.tolerance &&
                     rep.phi_identity <= 1e-15 && rep.implication_holds);
}

void check_orbits(CheckResult& r, const ExperimentConfig&, const shiftop::ShiftOperator& T, const json& o) {
  const bool symbolic = T.composition.has_value();
  const double eps = opt_or<double>(o, "eps", symbolic ? std::ldexp(1.0, -6) : 0.05);
  std::int64_t budget = opt_or<std::int64_t>(o, "budget", 100000);
  if (symbolic && !o.contains("budget")) budget = std::max<std::int64_t>(budget, T.composition->span + 64);
  r.tolerance = eps;
  r.metric = 1.0;
  bool ok = true;
  json comps = json::array();
  for (const auto& c : T.phi->components) {
    auto start = verify::generator_candidate(T, c.offset + 1);
    start.block -= c.offset;
    // phi runs backwards along the flows, walk its inverse
    const auto rep = dynamics::orbit_density(dynamics::inverse(c.map), start, eps, budget);
    ok = ok && rep.certified;
    r.metric = std::min(r.metric, rep.coverage);
    comps.push_back({{"offset", c.offset},
                     {"certified", rep.certified},
                     {"coverage", rep.coverage},
                     {"iterations", rep.iterations},
                     {"probes", rep.probes},
                     {"metric", rep.metric}});
    PlotSeries s{"orbit_" + std::to_string(c.offset + 1), {}};
    for (const auto& [it, cov] : rep.curve) s.points.emplace_back(it, cov);
    r.plots.push_back(std::move(s));
  }
  r.details = {{"eps", eps}, {"budget", budget}, {"components", comps}};
  set_verdict(r, ok);
}

void check_generators(CheckResult& r, const ExperimentConfig&, const shiftop::ShiftOperator& T, const json& o) {
  const double eps = opt_or<double>(o, "eps", 0.05);
  const auto budget = opt_or<std::int64_t>(o, "budget", 100000);
  const int expected = opt_or<int>(o, "expected", static_cast<int>(T.phi->components.size()));
  const auto g = verify::estimate_generators(T, eps, budget);
  r.metric = g.upper;
  r.tolerance = 0;
  r.details = {{"lower", g.lower},   {"upper", g.upper},       {"expected", expected}, {"seeds", g.seeds},
               {"eps", eps},         {"budget", budget},       {"probes", g.probes},   {"coverage", g.coverage},
               {"complete", g.complete}};
  set_verdict(r, g.complete && g.lower <= expected && expected <= g.upper);
}

void check_counterexample(CheckResult& r, const ExperimentConfig& cfg, const shiftop::ShiftOperator&, const json&) {
  verify::CounterexampleOptions co;
  const auto& p = cfg.params;
  co.nde_sequence_only = p.value("nde_sequence_only", false);
  if (p.contains("torero_a")) co.torero_a = p.at("torero_a").get<std::vector<double>>();
  co.tolerance = p.value("tolerance", co.tolerance);
  const auto rep = verify::run_counterexample(*cfg.fixture, co);
  r.metric = rep.residual;
  r.tolerance = rep.tolerance;
  r.details = {{"fixture", verify::to_string(rep.which)},
               {"verdict", rep.verdict},
               {"witness_norm", rep.witness_norm},
               {"metrics", rep.metrics},
               {"notes", rep.notes}};
  if (rep.which == verify::Fixture::Torero) r.details["pair"] = {rep.pair_i, rep.pair_j};
  set_verdict(r, rep.verified);
}

}  // namespace

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

CheckResult run_check(const std::string& id, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T) {
  CheckResult r;
  r.id = id;
  const auto t0 = Clock::now();
  const json o = options_for(cfg, id);
  try {
    if (id == "isometry") check_isometry(r, cfg, T, o);
    else if (id == "codimension") check_codimension(r, cfg, T, o);
    else if (id == "inverse") check_inverse(r, cfg, T, o);
    else if (id == "kernel") check_kernel(r, cfg, T, o);
    else if (id == "recursion") check_recursion(r, cfg, T, o);
    else if (id == "fibonacci") check_fibonacci(r, cfg, T, o);
    else if (id == "orbits") check_orbits(r, cfg, T, o);
    else if (id == "generators") check_generators(r, cfg, T, o);
    else if (id == "counterexample") check_counterexample(r, cfg, T, o);
    else throw ConfigError("unknown check '" + id + "'");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // a budget or truncation that ran out fails the check, it is not a config error
    r.verdict = "FAIL";
    r.details["error"] = e.what();
  }
  r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return r;
}

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
  const auto t0 = Clock::now();
  const auto T = build_operator(cfg);
  RunReport rep;
  rep.config = cfg.source;
  rep.construction = cfg.construction_name();
  rep.seed = cfg.seed;
  const auto ids = checks_for(cfg);
  if (opt.parallel) {
    std::vector<std::future<CheckResult>> jobs;
    for (const auto& id : ids) jobs.push_back(std::async(std::launch::async, [&, id] { return run_check(id, cfg, T); }));
    for (auto& j : jobs) rep.checks.push_back(j.get());
  } else {
    for (const auto& id : ids) rep.checks.push_back(run_check(id, cfg, T));
  }
  rep.total_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  return rep;
}

json report_to_json(const RunReport& r) {
  json j;
  j["schema"] = "shiftlab.run/1";
  j["construction"] = r.construction;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["passed"] = r.passed();
  j["checks"] = json::array();
  for (const auto& c : r.checks)
    j["checks"].push_back({{"check_id", c.id},
                           {"verdict", c.verdict},
                           {"metric", c.metric},
                           {"tolerance", c.tolerance},
                           {"elapsed_ms", c.elapsed_ms},
                           {"details", c.details}});
  j["total_ms"] = r.total_ms;
  j["versions"] = {{"shiftlab", kVersion},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  return j;
}

std::string report_to_csv(const RunReport& r) {
  std::ostringstream out;
  out << "check_id,construction,verdict,metric,tolerance,elapsed_ms\n";
  char buf[64];
  for (const auto& c : r.checks) {
    out << c.id << ',' << r.construction << ',' << c.verdict << ',';
    std::snprintf(buf, sizeof buf, "%.17g", c.metric);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", c.tolerance);
    out << buf << ',';
    std::snprintf(buf, sizeof buf, "%.3f", c.elapsed_ms);
    out << buf << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + p.string() + "' failed");
}

}  // namespace

std::string write_report(const RunReport& r, const std::string& dir, const std::string& format) {
  std::filesystem::create_directories(dir);
  std::filesystem::path p(dir);
  if (format == "json") {
    p /= "report.json";
    write_file(p, report_to_json(r).dump(2) + "\n");
  } else if (format == "csv") {
    p /= "report.csv";
    write_file(p, report_to_csv(r));
  } else {
    throw ConfigError("format must be json or csv");
  }
  return p.string();
}

std::vector<std::string> write_plots(const RunReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> out;
  char buf[80];
  for (const auto& c : r.checks)
    for (const auto& s : c.plots) {
      const auto p = std::filesystem::path(dir) / (c.id + "_" + s.name + ".dat");
      std::string text = "# " + c.id + " " + s.name + "\n";
      for (const auto& [x, y] : s.points) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x, y);
        text += buf;
      }
      write_file(p, text);
      out.push_back(p.string());
    }
  return out;
}

}  // namespace shiftlab::cli
