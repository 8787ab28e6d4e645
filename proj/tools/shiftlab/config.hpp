#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/shiftlab.hpp"

namespace shiftlab::cli {

using json = nlohmann::json;

// Bad JSON, unknown keys, wrong types or a construction guard breach.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  shiftop::Construction construction = shiftop::Construction::BlockMethod;
  std::optional<verify::Fixture> fixture;  // COUNTEREXAMPLE only
  ScalarField field = ScalarField::Real;
  std::uint64_t seed = 1;
  json params = json::object();
  // check id -> options; a check missing here runs with defaults if it
  // applies to the construction, `false` switches it off
  json checks = json::object();
  json source;  // the document as read, seed applied

  std::string construction_name() const;
};

// throws ConfigError
ExperimentConfig parse_config(const json& doc);
ExperimentConfig load_config(const std::string& path);

// builds the operator, turning every guard breach into ConfigError
shiftop::ShiftOperator build_operator(const ExperimentConfig& cfg);

// check ids in run order
const std::vector<std::string>& known_checks();
std::vector<std::string> checks_for(const ExperimentConfig& cfg);

struct Preset {
  std::string name;
  std::string summary;
  json config;
};

const std::vector<Preset>& catalog();
const Preset* find_preset(const std::string& name);

// scalars in configs: a number, [re, im] or {"re": .., "im": ..}
Scalar scalar_from_json(const json& j);
json scalar_to_json(Scalar s);

}  // namespace shiftlab::cli
