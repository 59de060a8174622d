// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "otafc/estimation.hpp"
#include "otafc/topology.hpp"

namespace otafc {

enum class HeuristicId { Uniform, ProportionalToMin, FrontLoaded, AllToFirstHop, ChannelAware };

inline constexpr std::array<HeuristicId, 5> kAllHeuristics{
    HeuristicId::Uniform, HeuristicId::ProportionalToMin, HeuristicId::FrontLoaded,
    HeuristicId::AllToFirstHop, HeuristicId::ChannelAware};

/// CLI names: uniform, prop_min, front_loaded, all_first, channel_aware.
std::string_view heuristic_name(HeuristicId id);
std::optional<HeuristicId> parse_heuristic(std::string_view name);

/// (N_t, K_1, ..., K_L).
std::vector<int> tau_minimums(const Topology& topology);
/// N_t + sum_l K_l.
int tau_min_total(const Topology& topology);

struct AllocationState {
  std::vector<int> rep;
  std::vector<int> tau_min;
  int budget_remaining = 0;
};

/// Greedy priority of each hop. beta (one entry per hop) is only read by ChannelAware,
/// which throws ValidationError when it is missing.
std::vector<double> heuristic_weights(HeuristicId id, const AllocationState& state,
                                      std::span<const double> beta = {});

/// Starts from m = 1 everywhere and repeatedly increments the highest-weight hop whose
/// tau_min still fits the remaining excess budget. Hops with zero weight are never picked;
/// ties go to the lowest hop index; leftover budget smaller than every candidate is dropped.
PilotPlan allocate(HeuristicId id, const Topology& topology, int excess_budget,
                   std::span<const double> beta = {}, double pilot_power = 1.0);

}  // namespace otafc
