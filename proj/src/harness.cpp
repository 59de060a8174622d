// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <tuple>

#include "otafc/allocation.hpp"
#include "otafc/channel.hpp"
#include "otafc/errors.hpp"
#include "otafc/estimation.hpp"
#include "otafc/inference.hpp"
#include "otafc/rng.hpp"
#include "otafc/solver.hpp"
#include "otafc/topology.hpp"

namespace otafc {
namespace {

std::uint64_t point_key(const SweepPoint& p) {
  return derive_seed(hash_label(p.heuristic),
                     {static_cast<std::uint64_t>(p.excess_budget), std::bit_cast<std::uint64_t>(p.pilot_power),
                      static_cast<std::uint64_t>(p.num_groups), static_cast<std::uint64_t>(p.group_size)});
}

std::uint64_t stream(const ExperimentConfig& cfg, std::string_view label, int trial,
                     std::uint64_t extra = 0) {
  return derive_seed(cfg.base_seed, {hash_label(label), static_cast<std::uint64_t>(trial), extra});
}

Stat mean_se(const std::vector<double>& v) {
  Stat s;
  if (v.empty()) {
    s.mean = s.se = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  }
  return s;
}

std::string real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> pts;
  for (int L : cfg.sweep.num_groups) {
    for (int K : cfg.sweep.group_size) {
      for (double pp : cfg.sweep.pilot_power) {
        for (const auto& h : cfg.sweep.heuristics) {
          for (int b : cfg.sweep.excess_budget) pts.push_back({h, b, pp, L, K});
        }
      }
    }
  }
  std::stable_sort(pts.begin(), pts.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return std::tie(a.num_groups, a.group_size, a.pilot_power, a.heuristic, a.excess_budget) <
           std::tie(b.num_groups, b.group_size, b.pilot_power, b.heuristic, b.excess_budget);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const SweepPoint& a, const SweepPoint& b) {
                          return std::tie(a.num_groups, a.group_size, a.pilot_power, a.heuristic,
                                          a.excess_budget) ==
                                 std::tie(b.num_groups, b.group_size, b.pilot_power, b.heuristic,
                                          b.excess_budget);
                        }),
            pts.end());
  return pts;
}

TrialOutcome run_trial(const ExperimentConfig& cfg, const SweepPoint& point, int trial) {
  TrialOutcome out;
  try {
    const Topology topo =
        Topology::uniform(cfg.antennas, point.num_groups, point.group_size, cfg.d_max, cfg.direct_link);
    const Placement placement = generate_placement(topo, stream(cfg, "placement", trial));
    const ChannelSet ch = draw_channels(topo, placement, cfg.pathloss, stream(cfg, "channels", trial));
    const NoiseModel noise =
        NoiseModel::thermal(point.num_groups, cfg.noise_psd_dbm_hz, cfg.bandwidth_hz);
    const PowerBudget budget = PowerBudget::uniform(topo, cfg.bs_power(), cfg.relay_power_w);
    const TargetLayer layer = TargetLayer::random(
        cfg.antennas, cfg.antennas,
        derive_seed(cfg.base_seed, {hash_label("layer"), static_cast<std::uint64_t>(cfg.antennas)}));
    const SyntheticTask task = SyntheticTask::make(
        layer, cfg.task_classes, cfg.task_noise_var,
        derive_seed(cfg.base_seed, {hash_label("task"), static_cast<std::uint64_t>(cfg.antennas)}));

    ChannelSet est;
    PilotPlan plan;
    if (point.heuristic == kPerfectCsi) {
      plan = PilotPlan::minimal(topo, point.pilot_power);
      est = ch;
    } else {
      const HopStatistics stats = hop_statistics(topo, placement, cfg.pathloss);
      const auto id = parse_heuristic(point.heuristic);
      if (!id) throw ValidationError("unknown heuristic '" + point.heuristic + "'");
      plan = allocate(*id, topo, point.excess_budget, stats.beta, point.pilot_power);
      const auto seed = stream(cfg, "estimation", trial, point_key(point));
      est = cfg.estimator == EstimatorMode::LeastSquares ? estimate_all(ch, plan, noise, seed)
                                                          : inject_error(ch, plan, noise, seed);
    }
    out.rep = plan.rep;
    out.tau_tot = plan.total();

    const SolveResult sol = solve(est, layer, noise, budget, cfg.solver, stream(cfg, "solver", trial));
    const TrueEvaluation ev = evaluate_true(sol.params, ch, layer, noise, budget);
    const AccuracyResult acc =
        accuracy_serial(task, sol.params, ch, noise, cfg.task_samples, stream(cfg, "samples", trial));
    out.nmse = ev.nmse;
    out.objective_true = ev.objective_true;
    out.max_relay_power_ratio = ev.max_relay_power_ratio;
    out.ota_acc = acc.ota_acc;
    out.digital_acc = acc.digital_acc;
    out.iterations = sol.iterations;
    out.ok = true;
  } catch (const std::exception& e) {
    out.ok = false;
    out.error = e.what();
  }
  return out;
}

ResultRow aggregate(const SweepPoint& point, std::vector<TrialOutcome> trials) {
  ResultRow row;
  row.point = point;
  std::vector<double> nmse, obj, ota, dig, tau, iters;
  std::vector<std::vector<double>> reps(static_cast<std::size_t>(point.num_groups) + 1);
  for (const auto& t : trials) {
    if (!t.ok) {
      ++row.failed;
      continue;
    }
    nmse.push_back(t.nmse);
    obj.push_back(t.objective_true);
    ota.push_back(t.ota_acc);
    dig.push_back(t.digital_acc);
    tau.push_back(t.tau_tot);
    iters.push_back(t.iterations);
    for (std::size_t l = 0; l < reps.size() && l < t.rep.size(); ++l) reps[l].push_back(t.rep[l]);
  }
  row.nmse = mean_se(nmse);
  row.objective_true = mean_se(obj);
  row.ota_acc = mean_se(ota);
  row.digital_acc = mean_se(dig);
  row.tau_tot = mean_se(tau);
  row.iterations = mean_se(iters);
  for (const auto& r : reps) row.rep_mean.push_back(mean_se(r).mean);
  row.trials = std::move(trials);
  return row;
}

ResultTable run_experiment(const ExperimentConfig& cfg, Execution mode) {
  cfg.validate();
  const auto points = sweep_points(cfg);
  const auto n_points = static_cast<long>(points.size());
  const long n_tasks = n_points * cfg.trials;
  std::vector<std::vector<TrialOutcome>> outcomes(points.size(),
                                                  std::vector<TrialOutcome>(static_cast<std::size_t>(cfg.trials)));

  auto work = [&](long task) {
    const auto p = static_cast<std::size_t>(task / cfg.trials);
    const auto t = static_cast<int>(task % cfg.trials);
    outcomes[p][static_cast<std::size_t>(t)] = run_trial(cfg, points[p], t);
  };
  if (mode == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long task = 0; task < n_tasks; ++task) work(task);
  } else {
    for (long task = 0; task < n_tasks; ++task) work(task);
  }

  ResultTable table;
  for (std::size_t p = 0; p < points.size(); ++p) {
    table.max_groups = std::max(table.max_groups, points[p].num_groups);
    table.rows.push_back(aggregate(points[p], std::move(outcomes[p])));
  }
  return table;
}

std::string csv_header(int max_groups) {
  std::string h = "heuristic,excess_budget,pilot_power,L,K_per_group,tau_tot";
  for (int l = 0; l <= max_groups; ++l) h += ",m" + std::to_string(l);
  h += ",nmse_mean,nmse_se,acc_ota_mean,acc_ota_se,acc_dig_mean,acc_dig_se,iters_mean,trials_failed";
  return h;
}

void emit_csv(const ResultTable& table, std::ostream& out) {
  out << csv_header(table.max_groups) << '\n';
  for (const auto& r : table.rows) {
    out << r.point.heuristic << ',' << r.point.excess_budget << ',' << real(r.point.pilot_power)
        << ',' << r.point.num_groups << ',' << r.point.group_size << ',' << real(r.tau_tot.mean);
    for (int l = 0; l <= table.max_groups; ++l) {
      out << ',';
      if (static_cast<std::size_t>(l) < r.rep_mean.size()) out << real(r.rep_mean[static_cast<std::size_t>(l)]);
    }
    out << ',' << real(r.nmse.mean) << ',' << real(r.nmse.se) << ',' << real(r.ota_acc.mean) << ','
        << real(r.ota_acc.se) << ',' << real(r.digital_acc.mean) << ',' << real(r.digital_acc.se)
        << ',' << real(r.iterations.mean) << ',' << r.failed << '\n';
  }
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_csv(table, f);
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace otafc
