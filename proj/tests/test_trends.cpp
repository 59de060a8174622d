// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

// Seed-pinned statistical trends over 40 paired trials at desk scale.

#include <doctest.h>

#include "otafc/harness.hpp"

using namespace otafc;

namespace {

ExperimentConfig desk() {
  ExperimentConfig cfg;
  cfg.antennas = 8;
  cfg.sweep.num_groups = {3};
  cfg.sweep.group_size = {12};
  cfg.sweep.heuristics = {"uniform"};
  cfg.trials = 40;
  cfg.task_samples = 400;
  cfg.base_seed = 2024;
  return cfg;
}

const ResultRow& find(const ResultTable& t, double pp, int budget) {
  for (const auto& r : t.rows)
    if (r.point.pilot_power == pp && r.point.excess_budget == budget) return r;
  throw std::logic_error("missing sweep point");
}

}  // namespace

TEST_CASE("pilot power: better CSI, lower NMSE, smaller accuracy gap") {
  auto cfg = desk();
  cfg.sweep.pilot_power = {0.01, 0.1, 1.0};
  cfg.sweep.excess_budget = {0};
  const auto table = run_experiment(cfg);
  const auto& low = find(table, 0.01, 0).trials;
  const auto& mid = find(table, 0.1, 0).trials;
  const auto& high = find(table, 1.0, 0).trials;

  int nmse_wins = 0;
  int pairs = 0, gap_ok = 0;
  for (std::size_t t = 0; t < high.size(); ++t) {
    REQUIRE(high[t].ok);
    REQUIRE(mid[t].ok);
    REQUIRE(low[t].ok);
    nmse_wins += high[t].nmse <= mid[t].nmse;
    const TrialOutcome* chain[] = {&low[t], &mid[t], &high[t]};
    for (int i = 0; i < 2; ++i) {
      const auto& worse = *chain[i];
      const auto& better = *chain[i + 1];
      if (better.nmse >= worse.nmse) continue;
      ++pairs;
      gap_ok += (better.digital_acc - better.ota_acc) <= (worse.digital_acc - worse.ota_acc);
    }
  }
  MESSAGE("nmse(p=1) <= nmse(p=0.1) in " << nmse_wins << "/40; gap shrinks in " << gap_ok << "/" << pairs);
  CHECK(nmse_wins >= 32);
  REQUIRE(pairs >= 40);
  CHECK(gap_ok >= 0.8 * pairs);
}

TEST_CASE("excess budget: mean NMSE falls with training time") {
  auto cfg = desk();
  cfg.sweep.pilot_power = {0.1};
  cfg.sweep.excess_budget = {200, 400, 600, 800, 1000};
  const auto table = run_experiment(cfg);
  int ok = 0;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    MESSAGE("budget " << table.rows[i].point.excess_budget << " nmse " << table.rows[i].nmse.mean);
    ok += table.rows[i].nmse.mean <= table.rows[i - 1].nmse.mean;
  }
  CHECK(ok >= 0.8 * 4);
}
