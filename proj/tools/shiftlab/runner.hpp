#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace shiftlab::cli {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct CheckResult {
  std::string id;
  std::string verdict;  // PASS or FAIL
  double metric = 0;
  double tolerance = 0;
  double elapsed_ms = 0;
  json details = json::object();
  std::vector<PlotSeries> plots;

  bool passed() const { return verdict == "PASS"; }
};

struct RunReport {
  json config;  // echo, re-validates to the same run
  std::string construction;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  double total_ms = 0;

  bool passed() const;
};

struct RunOptions {
  bool parallel = false;
};

RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});
CheckResult run_check(const std::string& id, const ExperimentConfig& cfg, const shiftop::ShiftOperator& T);

json report_to_json(const RunReport& r);
std::string report_to_csv(const RunReport& r);
// writes report.json or report.csv into dir, returns the path
std::string write_report(const RunReport& r, const std::string& dir, const std::string& format);
// two-column text files, one per plot series; returns the paths
std::vector<std::string> write_plots(const RunReport& r, const std::string& dir);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace shiftlab::cli
