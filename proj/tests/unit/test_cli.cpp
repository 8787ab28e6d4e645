#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

using namespace shiftlab;
using namespace shiftlab::cli;
namespace fs = std::filesystem;

namespace {

json small_block_method(json checks) {
  return json{{"construction", "BLOCK_METHOD"},
              {"seed", 3},
              {"params", {{"p", {2}}, {"degree", 4}}},
              {"checks", std::move(checks)}};
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("shiftlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SHIFTLAB_BIN) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, UnknownKeysAreRejected) {
  auto doc = small_block_method(json::object());
  doc["colour"] = "blue";
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = small_block_method({{"no_such_check", true}});
  EXPECT_THROW(parse_config(doc), ConfigError);
  doc = small_block_method(json::object());
  doc["seed"] = -1;
  EXPECT_THROW(parse_config(doc), ConfigError);
  EXPECT_THROW(parse_config(json{{"seed", 1}}), ConfigError);
}

TEST(Config, FixtureSuffix) {
  const auto cfg = parse_config(json{{"construction", "COUNTEREXAMPLE:TORERO"}});
  EXPECT_EQ(cfg.construction, shiftop::Construction::Counterexample);
  ASSERT_TRUE(cfg.fixture.has_value());
  EXPECT_EQ(*cfg.fixture, verify::Fixture::Torero);
  EXPECT_EQ(cfg.construction_name(), "COUNTEREXAMPLE:TORERO");
  EXPECT_THROW(parse_config(json{{"construction", "COUNTEREXAMPLE"}}), ConfigError);
  EXPECT_THROW(parse_config(json{{"construction", "BLOCK_METHOD:NDE"}}), ConfigError);
}

TEST(Config, GuardBreachIsConfigError) {
  const auto cfg = parse_config(json{{"construction", "COMPOSITION"},
                                     {"params", {{"delta", {0.5, 0.5}}, {"N", 1}, {"depth", 4}}}});
  EXPECT_THROW(build_operator(cfg), ConfigError);
}

TEST(Config, Scalars) {
  EXPECT_EQ(scalar_from_json(json(0.5)), Scalar(0.5));
  EXPECT_EQ(scalar_from_json(json::array({0.0, 1.0})), Scalar(0.0, 1.0));
  EXPECT_EQ(scalar_from_json(json{{"re", 1.0}, {"im", -2.0}}), Scalar(1.0, -2.0));
  EXPECT_EQ(scalar_from_json(scalar_to_json(Scalar(0.25, -0.5))), Scalar(0.25, -0.5));
  EXPECT_THROW(scalar_from_json(json("x")), ConfigError);
}

TEST(Config, DisabledChecksAreSkipped) {
  const auto all = checks_for(parse_config(small_block_method(json::object())));
  EXPECT_NE(std::find(all.begin(), all.end(), "kernel"), all.end());
  const auto some = checks_for(parse_config(small_block_method({{"kernel", false}})));
  EXPECT_EQ(std::find(some.begin(), some.end(), "kernel"), some.end());
  EXPECT_EQ(some.size() + 1, all.size());
}

TEST(Runner, ZeroChecksStillGiveAReport) {
  json off = json::object();
  for (const auto& id : known_checks()) off[id] = false;
  const auto rep = run_experiment(parse_config(small_block_method(off)));
  EXPECT_TRUE(rep.checks.empty());
  EXPECT_TRUE(rep.passed());
  const auto j = report_to_json(rep);
  EXPECT_EQ(j.at("schema"), "shiftlab.run/1");
  EXPECT_TRUE(j.at("checks").is_array());
  EXPECT_EQ(json::parse(j.dump()), j);
}

TEST(Runner, CsvHasOneRowPerCheck) {
  json checks = json::object();
  for (const auto& id : known_checks()) checks[id] = false;
  checks["isometry"] = json{{"trials", 3}};
  checks["inverse"] = true;
  const auto rep = run_experiment(parse_config(small_block_method(checks)));
  ASSERT_EQ(rep.checks.size(), 2u);
  EXPECT_TRUE(rep.passed());
  std::istringstream in(report_to_csv(rep));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "check_id,construction,verdict,metric,tolerance,elapsed_ms");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(Runner, EchoedConfigReproducesTheRun) {
  json checks = json::object();
  for (const auto& id : known_checks()) checks[id] = false;
  checks["isometry"] = json{{"trials", 3}};
  checks["kernel"] = true;
  const auto first = run_experiment(parse_config(small_block_method(checks)));
  const auto second = run_experiment(parse_config(first.config));
  ASSERT_EQ(first.checks.size(), second.checks.size());
  for (std::size_t i = 0; i < first.checks.size(); ++i) {
    EXPECT_EQ(first.checks[i].verdict, second.checks[i].verdict);
    EXPECT_EQ(first.checks[i].metric, second.checks[i].metric);
  }
}

TEST(Runner, KernelSpectrumPlotIsNonincreasing) {
  json checks = json::object();
  for (const auto& id : known_checks()) checks[id] = false;
  checks["kernel"] = true;
  const auto rep = run_experiment(parse_config(small_block_method(checks)));
  ASSERT_EQ(rep.checks.size(), 1u);
  ASSERT_FALSE(rep.checks[0].plots.empty());
  for (const auto& s : rep.checks[0].plots)
    for (std::size_t i = 1; i < s.points.size(); ++i) EXPECT_LE(s.points[i].second, s.points[i - 1].second) << s.name;
  const auto dir = scratch("plots");
  const auto files = write_plots(rep, dir.string());
  EXPECT_EQ(files.size(), rep.checks[0].plots.size());
  for (const auto& f : files) EXPECT_TRUE(fs::exists(f));
}

TEST(Catalog, PresetsParse) {
  EXPECT_GE(catalog().size(), 10u);
  for (const auto& p : catalog()) EXPECT_NO_THROW(parse_config(p.config)) << p.name;
  EXPECT_NE(find_preset("golden_arc"), nullptr);
  EXPECT_EQ(find_preset("nope"), nullptr);
}

TEST(Binary, ExitCodes) {
  const auto dir = scratch("exit");
  json checks = json::object();
  for (const auto& id : known_checks()) checks[id] = false;
  checks["isometry"] = json{{"trials", 2}};
  std::ofstream(dir / "good.json") << small_block_method(checks).dump();
  std::ofstream(dir / "bad.json") << json{{"construction", "COMPOSITION"},
                                          {"params", {{"delta", {0.5, 0.5}}, {"N", 1}}}}
                                         .dump();
  std::ofstream(dir / "broken.json") << "{ not json";
  // a tolerance nothing can meet makes the check fail
  checks["isometry"] = json{{"trials", 2}, {"tolerance", -1.0}};
  std::ofstream(dir / "failing.json") << small_block_method(checks).dump();

  const std::string out = " --out " + dir.string();
  EXPECT_EQ(run_binary("run " + (dir / "good.json").string() + out), 0);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_EQ(run_binary("run " + (dir / "good.json").string() + out + " --format csv"), 0);
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_EQ(run_binary("run " + (dir / "failing.json").string() + out), 1);
  EXPECT_EQ(run_binary("run " + (dir / "bad.json").string() + out), 2);
  EXPECT_EQ(run_binary("run " + (dir / "broken.json").string() + out), 2);
  EXPECT_EQ(run_binary("run no_such_preset" + out), 2);
  EXPECT_EQ(run_binary("run " + (dir / "good.json").string() + " --format xml"), 2);
  EXPECT_EQ(run_binary("catalog"), 0);
}
