// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "otafc/config.hpp"

namespace otafc {

struct SweepPoint {
  std::string heuristic;
  int excess_budget = 0;
  double pilot_power = 1.0;
  int num_groups = 1;
  int group_size = 1;
};

struct TrialOutcome {
  bool ok = false;
  std::string error;
  double nmse = 0.0;
  double objective_true = 0.0;
  double ota_acc = 0.0;
  double digital_acc = 0.0;
  int tau_tot = 0;
  std::vector<int> rep;
  int iterations = 0;
  double max_relay_power_ratio = 0.0;
};

struct Stat {
  double mean = 0.0;
  double se = 0.0;
};

struct ResultRow {
  SweepPoint point;
  std::vector<TrialOutcome> trials;
  int failed = 0;
  Stat nmse, objective_true, ota_acc, digital_acc, tau_tot, iterations;
  std::vector<double> rep_mean;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  /// Widest L in the sweep; fixes the m0..mL columns.
  int max_groups = 0;
};

enum class Execution { Parallel, Serial };

/// Cartesian product of the sweep axes, sorted by (L, K, p_p, heuristic, budget).
std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

/// placement -> channels -> allocation -> estimation -> solve -> evaluate for one seed.
/// Placement, channels, and test samples depend only on (base_seed, trial), so every
/// sweep point sees the same realizations. Failures are captured, never thrown.
TrialOutcome run_trial(const ExperimentConfig& cfg, const SweepPoint& point, int trial);

/// Mean and standard error over successful trials, in trial-index order.
ResultRow aggregate(const SweepPoint& point, std::vector<TrialOutcome> trials);

ResultTable run_experiment(const ExperimentConfig& cfg, Execution mode = Execution::Parallel);

/// Columns: heuristic,excess_budget,pilot_power,L,K_per_group,tau_tot,m0..mL,nmse_mean,
/// nmse_se,acc_ota_mean,acc_ota_se,acc_dig_mean,acc_dig_se,iters_mean,trials_failed.
/// Reals use 9 significant digits; m columns past a row's L are empty.
void emit_csv(const ResultTable& table, std::ostream& out);
void emit_csv(const ResultTable& table, const std::filesystem::path& path);

std::string csv_header(int max_groups);

}  // namespace otafc
