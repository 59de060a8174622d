// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <vector>

#include "otafc/channel.hpp"
#include "otafc/rng.hpp"
#include "otafc/topology.hpp"

namespace otafc {

/// Per-hop training schedule. Hop 0 is the BS phase; hop l is group l transmitting.
struct PilotPlan {
  double pilot_power = 1.0;
  std::vector<int> tau;
  std::vector<int> rep;
  std::vector<int> tau_min;

  int num_hops() const { return static_cast<int>(tau.size()); }
  int total() const;
  /// Throws InfeasiblePilotError unless tau = rep * tau_min with rep >= 1 on every hop.
  void validate() const;

  /// Every hop trained at its minimum length.
  static PilotPlan minimal(const Topology& topology, double pilot_power);
};

/// Channel estimates share the layout of the true channel set.
using EstimatedChannelSet = ChannelSet;

/// tau x m pilot matrix built from the first m DFT columns; Phi^H Phi = tau I.
CMat make_pilots(int tau, int m);

/// Distinct sequences a run ever needs: max{N_t, K_1, ..., K_L}.
int pilot_dictionary_size(const PilotPlan& plan);

/// LS estimate of h (receivers x transmitters) from tau pilot symbols:
/// Y = sqrt(p) H Phi^T + N, H_hat = Y conj(Phi) / (sqrt(p) tau).
CMat estimate_link(const CMat& h_true, double pilot_power, int tau, double noise_var, Rng& rng);

/// Receiver-side noise of training hop l: group l+1 for l < L, the Rx for l = L.
double training_noise_var(const NoiseModel& noise, int hop);

CMat estimate_hop(const CMat& h_true, const PilotPlan& plan, int hop, double noise_var,
                  std::uint64_t seed);

/// Simulated training of every hop with independent noise. H_0 is estimated during the
/// BS phase at the Rx when it is nonzero.
EstimatedChannelSet estimate_all(const ChannelSet& ch, const PilotPlan& plan,
                                 const NoiseModel& noise, std::uint64_t seed);

/// H_hat = H + E, E i.i.d. CN(0, sigma^2 / (p tau)): same distribution as estimate_all.
EstimatedChannelSet inject_error(const ChannelSet& ch, const PilotPlan& plan,
                                 const NoiseModel& noise, std::uint64_t seed);

}  // namespace otafc
