// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

// otafc: multi-hop over-the-air FC layer experiments.
//
//   otafc run --config exp.json [--out results.csv] [--seed S] [--trials T] [--heuristic NAME]
//   otafc --list-heuristics

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "otafc/allocation.hpp"
#include "otafc/config.hpp"
#include "otafc/errors.hpp"
#include "otafc/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Multi-hop amplify-and-forward OTA FC layer simulator"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-heuristics", list, "Print the pilot allocation heuristics and exit");

  auto* run = app.add_subcommand("run", "Run a parameter sweep and write a CSV table");
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::vector<std::string> heuristics;
  bool serial = false;
  bool dump_config = false;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_path, "Output CSV (default: stdout)");
  run->add_option("--seed", seed, "Override base_seed");
  run->add_option("--trials", trials, "Override the trial count");
  run->add_option("--heuristic", heuristics, "Restrict the sweep to these heuristics (repeatable)");
  run->add_flag("--serial", serial, "Run trials serially instead of on the OpenMP pool");
  run->add_flag("--print-config", dump_config, "Print the effective config to stderr");

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (auto id : otafc::kAllHeuristics) std::cout << otafc::heuristic_name(id) << '\n';
    std::cout << otafc::kPerfectCsi << '\n';
    return 0;
  }
  if (!run->parsed()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    otafc::ExperimentConfig cfg = otafc::load_config(config_path);
    if (seed) cfg.base_seed = *seed;
    if (trials) cfg.trials = *trials;
    if (!heuristics.empty()) cfg.sweep.heuristics = heuristics;
    cfg.validate();
    if (dump_config) std::cerr << otafc::to_json(cfg).dump(2) << '\n';

    const auto table = otafc::run_experiment(
        cfg, serial ? otafc::Execution::Serial : otafc::Execution::Parallel);
    if (out_path.empty()) {
      otafc::emit_csv(table, std::cout);
    } else {
      otafc::emit_csv(table, out_path);
    }
    int failed = 0;
    for (const auto& r : table.rows) failed += r.failed;
    if (failed > 0) std::cerr << "warning: " << failed << " trial(s) failed\n";
  } catch (const otafc::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
