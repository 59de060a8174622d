// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

// Wall-clock comparison of the OpenMP kernels against their serial references:
// the trial pool of run_experiment and the per-sample accuracy batch.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "otafc/channel.hpp"
#include "otafc/harness.hpp"
#include "otafc/inference.hpp"
#include "otafc/solver.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const int trials = argc > 1 ? std::atoi(argv[1]) : 8;
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  otafc::ExperimentConfig cfg;
  cfg.antennas = 16;
  cfg.sweep.num_groups = {3};
  cfg.sweep.group_size = {12};
  cfg.sweep.heuristics = {"uniform", "all_first"};
  cfg.sweep.excess_budget = {200, 600};
  cfg.trials = trials;
  cfg.task_samples = 500;

  otafc::ResultTable serial, parallel;
  const double ts = seconds([&] { serial = otafc::run_experiment(cfg, otafc::Execution::Serial); });
  const double tp = seconds([&] { parallel = otafc::run_experiment(cfg, otafc::Execution::Parallel); });
  bool same = serial.rows.size() == parallel.rows.size();
  for (std::size_t i = 0; same && i < serial.rows.size(); ++i) {
    same = serial.rows[i].nmse.mean == parallel.rows[i].nmse.mean &&
           serial.rows[i].ota_acc.mean == parallel.rows[i].ota_acc.mean;
  }
  std::printf("trial pool   serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical=%s\n", ts,
              tp, ts / tp, same ? "yes" : "no");

  const auto topo = otafc::Topology::uniform(16, 3, 12, 200.0);
  const auto placement = otafc::generate_placement(topo, 1);
  const auto ch = otafc::draw_channels(topo, placement, {}, 2);
  const auto noise = otafc::NoiseModel::thermal(3);
  const auto budget = otafc::PowerBudget::uniform(topo, 16.0, 1.0);
  const auto layer = otafc::TargetLayer::random(16, 16, 3);
  const auto task = otafc::SyntheticTask::make(layer, 10, 0.1, 4);
  const auto sol = otafc::solve(ch, layer, noise, budget, {}, 5);
  const int samples = 20000;
  otafc::AccuracyResult as, ap;
  const double ss = seconds([&] { as = otafc::accuracy_serial(task, sol.params, ch, noise, samples, 6); });
  const double sp = seconds([&] { ap = otafc::accuracy(task, sol.params, ch, noise, samples, 6); });
  std::printf("sample batch serial %8.3f s  parallel %8.3f s  speedup %5.2fx  identical=%s\n", ss,
              sp, ss / sp, as.ota_acc == ap.ota_acc && as.digital_acc == ap.digital_acc ? "yes" : "no");
  return 0;
}
