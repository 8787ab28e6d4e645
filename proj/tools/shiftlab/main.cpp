#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "runner.hpp"

using namespace shiftlab::cli;

namespace {

int do_run(const std::string& source, const std::string& out, const std::string& format, bool plots,
           std::optional<std::uint64_t> seed, bool parallel) {
  ExperimentConfig cfg;
  try {
    json doc;
    if (std::filesystem::exists(source)) {
      cfg = load_config(source);
      doc = cfg.source;
    } else if (const auto* p = find_preset(source.rfind("preset:", 0) == 0 ? source.substr(7) : source)) {
      doc = p->config;
    } else {
      throw ConfigError("no config file or preset named '" + source + "'");
    }
    if (seed) doc["seed"] = *seed;
    cfg = parse_config(doc);
    RunOptions ro;
    ro.parallel = parallel;
    const auto rep = run_experiment(cfg, ro);
    for (const auto& c : rep.checks)
      std::printf("%-14s %-4s metric=%.3e tol=%.3e %.1f ms\n", c.id.c_str(), c.verdict.c_str(), c.metric, c.tolerance,
                  c.elapsed_ms);
    if (rep.checks.size() == 1 && rep.checks[0].details.contains("verdict"))
      std::printf("%s\n", rep.checks[0].details["verdict"].get<std::string>().c_str());
    const auto path = write_report(rep, out, format);
    std::printf("report: %s\n", path.c_str());
    if (plots)
      for (const auto& p : write_plots(rep, out)) std::printf("plot: %s\n", p.c_str());
    return rep.passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shiftlab: certification runs for isometric shift constructions"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the checks of one experiment config");
  std::string source, out = ".", format = "json";
  bool plots = false, parallel = false;
  std::optional<std::uint64_t> seed;
  run->add_option("config", source, "config JSON path, or a catalog preset name")->required();
  run->add_option("--out", out, "output directory");
  run->add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--emit-plots", plots, "write two-column plot data files");
  run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--parallel", parallel, "run independent checks concurrently");

  auto* cat = app.add_subcommand("catalog", "list the built-in presets");
  std::string show;
  cat->add_option("--show", show, "print the config of one preset");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*run) {
    try {
      return do_run(source, out, format, plots, seed, parallel);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
  }
  if (!show.empty()) {
    const auto* p = find_preset(show);
    if (!p) {
      std::fprintf(stderr, "no preset '%s'\n", show.c_str());
      return 2;
    }
    std::cout << p->config.dump(2) << "\n";
    return 0;
  }
  for (const auto& p : catalog()) std::printf("%-30s %s\n", p.name.c_str(), p.summary.c_str());
  return 0;
}
