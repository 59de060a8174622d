// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "otafc/channel.hpp"
#include "otafc/solver.hpp"

namespace otafc {

/// Pseudo-heuristic that designs on the true channels (no training error).
inline constexpr std::string_view kPerfectCsi = "perfect_csi";

enum class EstimatorMode {
  LeastSquares,  ///< simulate pilot transmission and correlate
  InjectError,   ///< add the equivalent Gaussian error directly
};

struct SweepAxes {
  std::vector<int> excess_budget{0};
  std::vector<std::string> heuristics{"uniform"};
  std::vector<double> pilot_power{1.0};
  std::vector<int> group_size{40};
  std::vector<int> num_groups{3};
};

struct ExperimentConfig {
  // network
  int antennas = 49;  ///< N = N_t = N_r
  bool direct_link = false;
  double d_max = 200.0;
  PathlossParams pathloss;
  // noise floor N_o B
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 300e6;
  // power
  std::optional<double> bs_power_w;  ///< defaults to N watts
  double relay_power_w = 1.0;

  SolverConfig solver;
  EstimatorMode estimator = EstimatorMode::LeastSquares;

  // synthetic task
  int task_classes = 10;
  double task_noise_var = 0.1;
  int task_samples = 1000;

  SweepAxes sweep;
  int trials = 40;
  std::uint64_t base_seed = 1;

  double bs_power() const { return bs_power_w.value_or(static_cast<double>(antennas)); }
  /// Throws ValidationError on empty sweeps, unknown heuristics, or bad values.
  void validate() const;
};

/// Strict parse: unknown keys are rejected. Missing keys keep their defaults.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The effective configuration, in the same schema parse_config accepts.
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace otafc
