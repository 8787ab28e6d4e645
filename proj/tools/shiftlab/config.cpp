#include "config.hpp"

#include <fstream>
#include <set>

namespace shiftlab::cli {

namespace {

void allow_keys(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : obj.items())
    if (!keys.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

template <class T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

std::vector<Scalar> scalars(const json& j, const char* key) {
  if (!j.is_array()) throw ConfigError(std::string("'") + key + "' must be an array");
  std::vector<Scalar> out;
  for (const auto& x : j) out.push_back(scalar_from_json(x));
  return out;
}

std::pair<Scalar, Scalar> delta_pair(const json& p) {
  if (!p.contains("delta")) return {0.25, 0.25};
  const auto d = scalars(p.at("delta"), "delta");
  if (d.size() != 2) throw ConfigError("'delta' needs two entries");
  return {d[0], d[1]};
}

const std::map<shiftop::Construction, std::set<std::string>>& param_keys() {
  static const std::map<shiftop::Construction, std::set<std::string>> keys{
      {shiftop::Construction::BlockMethod,
       {"p", "all", "allow_integer_multiple", "gamma", "gamma_seed", "allow_singular", "degree", "torus_dim", "parity",
        "phases", "sequence_len"}},
      {shiftop::Construction::Composition,
       {"delta", "N", "depth", "alphabet", "flow", "seed_depth", "max_power", "schedule_budget", "L0", "M0",
        "sequence_len"}},
      {shiftop::Construction::GoldenArcModel,
       {"variant", "degree", "torus_degree", "kappa", "rho", "v", "step", "arc_ratio", "sequence_len"}},
      {shiftop::Construction::ComplexFamily, {"n", "kappa", "z", "v", "phases", "degree", "sequence_len"}},
      {shiftop::Construction::CantorToallas,
       {"p", "depth", "L0", "M0", "delta", "seed_depth", "schedule_budget", "sequence_len"}},
      {shiftop::Construction::Counterexample, {"fixture", "nde_sequence_only", "torero_a", "tolerance"}},
  };
  return keys;
}

}  // namespace

Scalar scalar_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
  throw ConfigError("expected a scalar: a number, [re, im] or {\"re\", \"im\"}");
}

json scalar_to_json(Scalar s) {
  if (s.imag() == 0) return s.real();
  return json::array({s.real(), s.imag()});
}

std::string ExperimentConfig::construction_name() const {
  auto s = shiftop::to_string(construction);
  if (fixture) s += ":" + verify::to_string(*fixture);
  return s;
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids{"isometry", "codimension", "inverse", "kernel", "recursion",
                                            "fibonacci", "orbits", "generators", "counterexample"};
  return ids;
}

std::vector<std::string> checks_for(const ExperimentConfig& cfg) {
  using C = shiftop::Construction;
  std::vector<std::string> base;
  switch (cfg.construction) {
    case C::BlockMethod: base = {"isometry", "codimension", "inverse", "kernel", "recursion", "orbits", "generators"}; break;
    case C::Composition:
    case C::CantorToallas: base = {"isometry", "codimension", "inverse", "kernel", "orbits", "generators"}; break;
    case C::GoldenArcModel:
      base = {"isometry", "codimension", "inverse", "kernel", "fibonacci", "orbits", "generators"};
      break;
    case C::ComplexFamily: base = {"isometry", "codimension", "inverse", "orbits", "generators"}; break;
    case C::Counterexample: base = {"counterexample"}; break;
  }
  std::vector<std::string> out;
  for (const auto& id : base) {
    if (cfg.checks.contains(id) && cfg.checks.at(id).is_boolean() && !cfg.checks.at(id).get<bool>()) continue;
    out.push_back(id);
  }
  return out;
}

ExperimentConfig parse_config(const json& doc) {
  allow_keys(doc, {"construction", "field", "seed", "params", "checks", "description"}, "config");
  ExperimentConfig cfg;
  if (!doc.contains("construction") || !doc.at("construction").is_string())
    throw ConfigError("config needs a 'construction' string");
  std::string name = doc.at("construction").get<std::string>();
  const auto colon = name.find(':');
  std::string fixture;
  if (colon != std::string::npos) {
    fixture = name.substr(colon + 1);
    name = name.substr(0, colon);
  }
  try {
    cfg.construction = shiftop::construction_from_string(name);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  cfg.params = doc.value("params", json::object());
  allow_keys(cfg.params, param_keys().at(cfg.construction), "params");
  if (cfg.construction == shiftop::Construction::Counterexample) {
    if (cfg.params.contains("fixture")) {
      const auto f = get_or<std::string>(cfg.params, "fixture", "");
      if (!fixture.empty() && f != fixture) throw ConfigError("fixture given twice with different names");
      fixture = f;
    }
    if (fixture.empty()) throw ConfigError("COUNTEREXAMPLE needs a fixture (e.g. COUNTEREXAMPLE:NOTRANSI)");
    try {
      cfg.fixture = verify::fixture_from_string(fixture);
    } catch (const ValidationError& e) {
      throw ConfigError(e.what());
    }
  } else if (!fixture.empty()) {
    throw ConfigError("only COUNTEREXAMPLE takes a fixture suffix");
  }

  const auto default_field =
      cfg.construction == shiftop::Construction::ComplexFamily ? std::string("COMPLEX") : std::string("REAL");
  try {
    cfg.field = field_from_string(get_or<std::string>(doc, "field", default_field));
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  if (doc.contains("seed")) {
    const auto& sj = doc.at("seed");
    if (!sj.is_number_integer() || (!sj.is_number_unsigned() && sj.get<std::int64_t>() < 0))
      throw ConfigError("'seed' must be a nonnegative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  cfg.checks = doc.value("checks", json::object());
  if (!cfg.checks.is_object()) throw ConfigError("'checks' must be an object");
  for (const auto& [k, v] : cfg.checks.items()) {
    if (std::find(known_checks().begin(), known_checks().end(), k) == known_checks().end())
      throw ConfigError("unknown check '" + k + "'");
    if (!v.is_object() && !v.is_boolean()) throw ConfigError("check '" + k + "' takes an object or a boolean");
  }
  cfg.source = doc;
  cfg.source["seed"] = cfg.seed;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

namespace {

shiftop::ShiftOperator build_unchecked(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  const int seq_len = get_or<int>(p, "sequence_len", 256);
  switch (cfg.construction) {
    case shiftop::Construction::BlockMethod: {
      shiftop::BlockMethodOptions o;
      o.p = get_or<std::vector<int>>(p, "p", o.p);
      o.all = get_or<bool>(p, "all", false);
      o.allow_integer_multiple = get_or<bool>(p, "allow_integer_multiple", false);
      if (p.contains("gamma")) o.gamma = scalars(p.at("gamma"), "gamma");
      o.gamma_seed = get_or<std::uint64_t>(p, "gamma_seed", 0);
      o.allow_singular = get_or<bool>(p, "allow_singular", false);
      o.field = cfg.field;
      o.degree = get_or<int>(p, "degree", o.degree);
      o.torus_dim = get_or<int>(p, "torus_dim", o.torus_dim);
      o.parity = get_or<bool>(p, "parity", false);
      o.phases = get_or<std::vector<std::vector<double>>>(p, "phases", {});
      o.sequence_len = seq_len;
      return shiftop::build_block_method(o);
    }
    case shiftop::Construction::Composition: {
      shiftop::CompositionOptions o;
      std::tie(o.d1, o.d2) = delta_pair(p);
      o.period = get_or<int>(p, "N", o.period);
      o.depth = get_or<int>(p, "depth", o.depth);
      o.alphabet = get_or<int>(p, "alphabet", o.alphabet);
      const auto flow = get_or<std::string>(p, "flow", "SHIFT");
      if (flow == "SHIFT") o.flow = shiftop::CompositionFlow::Shift;
      else if (flow == "CANTOR") o.flow = shiftop::CompositionFlow::Cantor;
      else throw ConfigError("flow must be SHIFT or CANTOR");
      o.seed_depth = get_or<int>(p, "seed_depth", o.seed_depth);
      o.max_power = get_or<int>(p, "max_power", o.max_power);
      o.schedule_budget = get_or<std::int64_t>(p, "schedule_budget", o.schedule_budget);
      o.L0 = get_or<std::vector<int>>(p, "L0", {});
      o.M0 = get_or<std::vector<int>>(p, "M0", {});
      o.field = cfg.field;
      o.sequence_len = seq_len;
      return shiftop::build_composition(o);
    }
    case shiftop::Construction::GoldenArcModel: {
      shiftop::GoldenOptions o;
      o.variant = get_or<std::string>(p, "variant", o.variant);
      o.degree = get_or<int>(p, "degree", o.degree);
      o.torus_degree = get_or<int>(p, "torus_degree", o.torus_degree);
      o.kappa = get_or<int>(p, "kappa", o.kappa);
      o.rho = get_or<std::vector<double>>(p, "rho", {});
      o.v = get_or<std::vector<double>>(p, "v", {});
      o.step = get_or<double>(p, "step", o.step);
      o.arc_ratio = get_or<double>(p, "arc_ratio", o.arc_ratio);
      o.field = cfg.field;
      o.sequence_len = seq_len;
      return shiftop::build_golden_arc(o);
    }
    case shiftop::Construction::ComplexFamily: {
      shiftop::ComplexOptions o;
      o.n = get_or<int>(p, "n", o.n);
      o.kappa = get_or<std::vector<int>>(p, "kappa", {});
      if (p.contains("z")) o.z = scalars(p.at("z"), "z");
      o.v = get_or<std::vector<std::vector<double>>>(p, "v", {});
      o.phases = get_or<std::vector<std::vector<double>>>(p, "phases", {});
      o.degree = get_or<int>(p, "degree", o.degree);
      o.field = cfg.field;
      o.sequence_len = seq_len;
      return shiftop::build_complex_family(o);
    }
    case shiftop::Construction::CantorToallas: {
      shiftop::CantorOptions o;
      o.p = get_or<int>(p, "p", o.p);
      o.depth = get_or<int>(p, "depth", o.depth);
      o.L0 = get_or<std::vector<int>>(p, "L0", o.L0);
      o.M0 = get_or<std::vector<int>>(p, "M0", o.M0);
      std::tie(o.d1, o.d2) = delta_pair(p);
      o.seed_depth = get_or<int>(p, "seed_depth", o.seed_depth);
      o.schedule_budget = get_or<std::int64_t>(p, "schedule_budget", o.schedule_budget);
      o.field = cfg.field;
      o.sequence_len = seq_len;
      return shiftop::build_cantor_toallas(o);
    }
    case shiftop::Construction::Counterexample: {
      verify::CounterexampleOptions o;
      o.nde_sequence_only = get_or<bool>(p, "nde_sequence_only", false);
      o.torero_a = get_or<std::vector<double>>(p, "torero_a", o.torero_a);
      return verify::build_fixture(*cfg.fixture, o);
    }
  }
  throw ConfigError("unhandled construction");
}

}  // namespace

shiftop::ShiftOperator build_operator(const ExperimentConfig& cfg) {
  try {
    return build_unchecked(cfg);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

const std::vector<Preset>& catalog() {
  static const std::vector<Preset> presets{
      {"block_method_p2", "block method, one family p = (2); expect a trivial kernel and 1 generator",
       json{{"construction", "BLOCK_METHOD"}, {"seed", 1}, {"params", {{"p", {2}}, {"degree", 8}}}}},
      {"block_method_p24", "block method, two families p = (2, 4); expect a trivial kernel and 2 generators",
       json{{"construction", "BLOCK_METHOD"}, {"seed", 1}, {"params", {{"p", {2, 4}}, {"degree", 8}}}}},
      {"composition", "weighted composition on the binary shift, N = 2, delta = (1/4, 1/4)",
       json{{"construction", "COMPOSITION"},
            {"seed", 1},
            {"params", {{"delta", {0.25, 0.25}}, {"N", 2}, {"depth", 8}}}}},
      {"golden_arc", "arc functional of length 2 pi Phi on a rotated circle",
       json{{"construction", "GOLDEN_ARC_MODEL"}, {"seed", 1}, {"params", {{"degree", 16}}}}},
      {"complex_family", "complex weights zeta_i on n = 2 circles",
       json{{"construction", "COMPLEX_FAMILY"}, {"seed", 1}, {"field", "COMPLEX"}, {"params", {{"n", 2}}}}},
      {"cantor_composition", "composition on Z_2 with a flow fixing L0, depth 8",
       json{{"construction", "CANTOR_TOALLAS"}, {"seed", 1}, {"params", {{"p", 2}, {"depth", 8}}}}},
      {"counterexample_nde", "Delta mixing a block and the sequence: a fixed function survives",
       json{{"construction", "COUNTEREXAMPLE:NDE"}, {"seed", 1}}},
      {"counterexample_torero", "three blocks with real weights: two share a sign",
       json{{"construction", "COUNTEREXAMPLE:TORERO"}, {"seed", 1}}},
      {"counterexample_notransi", "parity fibers break total transitivity: T^2 f = -f",
       json{{"construction", "COUNTEREXAMPLE:NOTRANSI"}, {"seed", 1}}},
      {"counterexample_odd_multiple", "p = (3, 9), an odd multiple: T f = -f",
       json{{"construction", "COUNTEREXAMPLE:ODD_MULTIPLE"}, {"seed", 1}}},
  };
  return presets;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : catalog())
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace shiftlab::cli
