// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/allocation.hpp"

#include <algorithm>
#include <numeric>

#include "otafc/errors.hpp"

namespace otafc {

std::string_view heuristic_name(HeuristicId id) {
  switch (id) {
    case HeuristicId::Uniform: return "uniform";
    case HeuristicId::ProportionalToMin: return "prop_min";
    case HeuristicId::FrontLoaded: return "front_loaded";
    case HeuristicId::AllToFirstHop: return "all_first";
    case HeuristicId::ChannelAware: return "channel_aware";
  }
  return "unknown";
}

std::optional<HeuristicId> parse_heuristic(std::string_view name) {
  for (HeuristicId id : kAllHeuristics) {
    if (heuristic_name(id) == name) return id;
  }
  return std::nullopt;
}

std::vector<int> tau_minimums(const Topology& topology) {
  topology.validate();
  std::vector<int> t{topology.n_tx};
  t.insert(t.end(), topology.group_sizes.begin(), topology.group_sizes.end());
  return t;
}

int tau_min_total(const Topology& topology) {
  const auto t = tau_minimums(topology);
  return std::accumulate(t.begin(), t.end(), 0);
}

std::vector<double> heuristic_weights(HeuristicId id, const AllocationState& state,
                                      std::span<const double> beta) {
  const std::size_t hops = state.rep.size();
  if (state.tau_min.size() != hops) throw ValidationError("allocation state is inconsistent");
  if (id == HeuristicId::ChannelAware && beta.size() != hops) {
    throw ValidationError("channel_aware needs one large-scale gain per hop");
  }
  std::vector<double> w(hops, 0.0);
  for (std::size_t l = 0; l < hops; ++l) {
    const double m = state.rep[l];
    const double tmin = state.tau_min[l];
    switch (id) {
      case HeuristicId::Uniform: w[l] = 1.0 / m; break;
      case HeuristicId::ProportionalToMin: w[l] = tmin / m; break;
      case HeuristicId::FrontLoaded: w[l] = 1.0 / (static_cast<double>(l + 1) * m * tmin); break;
      case HeuristicId::AllToFirstHop: w[l] = l == 0 ? 1.0 : 0.0; break;
      case HeuristicId::ChannelAware: w[l] = 1.0 / (beta[l] * m * tmin); break;
    }
  }
  return w;
}

PilotPlan allocate(HeuristicId id, const Topology& topology, int excess_budget,
                   std::span<const double> beta, double pilot_power) {
  AllocationState state;
  state.tau_min = tau_minimums(topology);
  state.rep.assign(state.tau_min.size(), 1);
  state.budget_remaining = std::max(excess_budget, 0);

  std::vector<std::size_t> order(state.rep.size());
  for (;;) {
    const auto w = heuristic_weights(id, state, beta);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    const auto pick = std::find_if(order.begin(), order.end(), [&](std::size_t l) {
      return w[l] > 0.0 && state.tau_min[l] <= state.budget_remaining;
    });
    if (pick == order.end()) break;
    ++state.rep[*pick];
    state.budget_remaining -= state.tau_min[*pick];
  }

  PilotPlan plan;
  plan.pilot_power = pilot_power;
  plan.tau_min = state.tau_min;
  plan.rep = state.rep;
  plan.tau.resize(plan.rep.size());
  for (std::size_t l = 0; l < plan.rep.size(); ++l) plan.tau[l] = plan.rep[l] * plan.tau_min[l];
  return plan;
}

}  // namespace otafc
