// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include "otafc/allocation.hpp"
#include "otafc/errors.hpp"

namespace otafc {
namespace {

using nlohmann::json;

void only_keys(const json& node, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!node.is_object()) throw ValidationError("config section '" + std::string(where) + "' must be an object");
  for (const auto& [key, _] : node.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ValidationError("unknown config key '" + std::string(where) + "." + key + "'");
  }
}

template <class T>
void read(const json& node, const char* key, T& out) {
  if (node.contains(key)) out = node.at(key).get<T>();
}

PathlossModel parse_model(const std::string& s) {
  if (s == "umi_nlos") return PathlossModel::UmiNlos;
  if (s == "umi_los") return PathlossModel::UmiLos;
  if (s == "umi_los_prob") return PathlossModel::UmiLosProbability;
  throw ValidationError("unknown pathloss model '" + s + "'");
}

std::string model_name(PathlossModel m) {
  switch (m) {
    case PathlossModel::UmiNlos: return "umi_nlos";
    case PathlossModel::UmiLos: return "umi_los";
    case PathlossModel::UmiLosProbability: return "umi_los_prob";
  }
  return "umi_nlos";
}

}  // namespace

void ExperimentConfig::validate() const {
  if (antennas < 1) throw ValidationError("antennas must be >= 1");
  if (!(d_max > 0.0)) throw ValidationError("d_max must be positive");
  if (!(pathloss.carrier_ghz > 0.0)) throw ValidationError("carrier_ghz must be positive");
  if (!(bandwidth_hz > 0.0)) throw ValidationError("bandwidth_hz must be positive");
  if (!(bs_power() > 0.0) || !(relay_power_w > 0.0)) throw ValidationError("powers must be positive");
  if (solver.max_outer_iters < 1 || !(solver.objective_tolerance > 0.0) ||
      !(solver.bisection_tolerance > 0.0)) {
    throw ValidationError("solver settings must be positive");
  }
  if (task_classes < 2 || task_samples < 1 || task_noise_var < 0.0) {
    throw ValidationError("task needs >= 2 classes, >= 1 sample, and non-negative noise");
  }
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (sweep.excess_budget.empty() || sweep.heuristics.empty() || sweep.pilot_power.empty() ||
      sweep.group_size.empty() || sweep.num_groups.empty()) {
    throw ValidationError("every sweep axis needs at least one value");
  }
  for (const auto& h : sweep.heuristics) {
    if (h != kPerfectCsi && !parse_heuristic(h)) throw ValidationError("unknown heuristic '" + h + "'");
  }
  for (int b : sweep.excess_budget) {
    if (b < 0) throw ValidationError("excess budgets must be non-negative");
  }
  for (double p : sweep.pilot_power) {
    if (!(p > 0.0)) throw ValidationError("pilot powers must be positive");
  }
  for (int k : sweep.group_size) {
    if (k < 1) throw ValidationError("group sizes must be >= 1");
  }
  for (int l : sweep.num_groups) {
    if (l < 1) throw ValidationError("num_groups must be >= 1");
  }
}

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig cfg;
  only_keys(doc, "", {"network", "pathloss", "noise", "power", "solver", "estimator", "task",
                      "sweep", "trials", "base_seed"});
  try {
    if (doc.contains("network")) {
      const auto& n = doc.at("network");
      only_keys(n, "network", {"antennas", "direct_link", "d_max"});
      read(n, "antennas", cfg.antennas);
      read(n, "direct_link", cfg.direct_link);
      read(n, "d_max", cfg.d_max);
    }
    if (doc.contains("pathloss")) {
      const auto& p = doc.at("pathloss");
      only_keys(p, "pathloss", {"carrier_ghz", "model", "ricean_k_db"});
      read(p, "carrier_ghz", cfg.pathloss.carrier_ghz);
      read(p, "ricean_k_db", cfg.pathloss.ricean_k_db);
      if (p.contains("model")) cfg.pathloss.model = parse_model(p.at("model").get<std::string>());
    }
    if (doc.contains("noise")) {
      const auto& n = doc.at("noise");
      only_keys(n, "noise", {"psd_dbm_hz", "bandwidth_hz"});
      read(n, "psd_dbm_hz", cfg.noise_psd_dbm_hz);
      read(n, "bandwidth_hz", cfg.bandwidth_hz);
    }
    if (doc.contains("power")) {
      const auto& p = doc.at("power");
      only_keys(p, "power", {"bs_w", "relay_w"});
      if (p.contains("bs_w") && !p.at("bs_w").is_null()) cfg.bs_power_w = p.at("bs_w").get<double>();
      read(p, "relay_w", cfg.relay_power_w);
    }
    if (doc.contains("solver")) {
      const auto& s = doc.at("solver");
      only_keys(s, "solver", {"max_outer_iters", "objective_tolerance", "bisection_tolerance", "init"});
      read(s, "max_outer_iters", cfg.solver.max_outer_iters);
      read(s, "objective_tolerance", cfg.solver.objective_tolerance);
      read(s, "bisection_tolerance", cfg.solver.bisection_tolerance);
      if (s.contains("init")) {
        const auto init = s.at("init").get<std::string>();
        if (init == "identity") cfg.solver.init_mode = InitMode::ScaledIdentity;
        else if (init == "random_phase") cfg.solver.init_mode = InitMode::RandomPhase;
        else throw ValidationError("unknown solver init '" + init + "'");
      }
    }
    if (doc.contains("estimator")) {
      const auto e = doc.at("estimator").get<std::string>();
      if (e == "ls") cfg.estimator = EstimatorMode::LeastSquares;
      else if (e == "inject") cfg.estimator = EstimatorMode::InjectError;
      else throw ValidationError("unknown estimator '" + e + "'");
    }
    if (doc.contains("task")) {
      const auto& t = doc.at("task");
      only_keys(t, "task", {"classes", "sample_noise_var", "samples"});
      read(t, "classes", cfg.task_classes);
      read(t, "sample_noise_var", cfg.task_noise_var);
      read(t, "samples", cfg.task_samples);
    }
    if (doc.contains("sweep")) {
      const auto& s = doc.at("sweep");
      only_keys(s, "sweep", {"excess_budget", "heuristics", "pilot_power", "group_size", "num_groups"});
      read(s, "excess_budget", cfg.sweep.excess_budget);
      read(s, "heuristics", cfg.sweep.heuristics);
      read(s, "pilot_power", cfg.sweep.pilot_power);
      read(s, "group_size", cfg.sweep.group_size);
      read(s, "num_groups", cfg.sweep.num_groups);
    }
    read(doc, "trials", cfg.trials);
    read(doc, "base_seed", cfg.base_seed);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config type error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["network"] = {{"antennas", cfg.antennas}, {"direct_link", cfg.direct_link}, {"d_max", cfg.d_max}};
  doc["pathloss"] = {{"carrier_ghz", cfg.pathloss.carrier_ghz},
                     {"model", model_name(cfg.pathloss.model)},
                     {"ricean_k_db", cfg.pathloss.ricean_k_db}};
  doc["noise"] = {{"psd_dbm_hz", cfg.noise_psd_dbm_hz}, {"bandwidth_hz", cfg.bandwidth_hz}};
  doc["power"] = {{"bs_w", cfg.bs_power()}, {"relay_w", cfg.relay_power_w}};
  doc["solver"] = {{"max_outer_iters", cfg.solver.max_outer_iters},
                   {"objective_tolerance", cfg.solver.objective_tolerance},
                   {"bisection_tolerance", cfg.solver.bisection_tolerance},
                   {"init", cfg.solver.init_mode == InitMode::ScaledIdentity ? "identity" : "random_phase"}};
  doc["estimator"] = cfg.estimator == EstimatorMode::LeastSquares ? "ls" : "inject";
  doc["task"] = {{"classes", cfg.task_classes},
                 {"sample_noise_var", cfg.task_noise_var},
                 {"samples", cfg.task_samples}};
  doc["sweep"] = {{"excess_budget", cfg.sweep.excess_budget},
                  {"heuristics", cfg.sweep.heuristics},
                  {"pilot_power", cfg.sweep.pilot_power},
                  {"group_size", cfg.sweep.group_size},
                  {"num_groups", cfg.sweep.num_groups}};
  doc["trials"] = cfg.trials;
  doc["base_seed"] = cfg.base_seed;
  return doc;
}

}  // namespace otafc
