// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "otafc/errors.hpp"

namespace otafc {
namespace {

bool is_blocked(const CMat& h) { return h.size() == 0 || h.isZero(0.0); }

void check_plan_matches(const ChannelSet& ch, const PilotPlan& plan) {
  plan.validate();
  const int L = ch.num_groups();
  if (plan.num_hops() != L + 1) {
    throw ValidationError("pilot plan has " + std::to_string(plan.num_hops()) +
                          " hops for a " + std::to_string(L) + "-group network");
  }
  for (int hop = 0; hop <= L; ++hop) {
    const auto transmitters = ch.h[static_cast<std::size_t>(hop) + 1].cols();
    if (plan.tau_min[static_cast<std::size_t>(hop)] != transmitters) {
      throw ValidationError("tau_min of hop " + std::to_string(hop) +
                            " does not match its transmitter count");
    }
  }
}

}  // namespace

int PilotPlan::total() const { return std::accumulate(tau.begin(), tau.end(), 0); }

void PilotPlan::validate() const {
  if (tau.empty() || tau.size() != rep.size() || tau.size() != tau_min.size()) {
    throw InfeasiblePilotError("pilot plan vectors must be non-empty and of equal length");
  }
  if (!(pilot_power > 0.0)) throw InfeasiblePilotError("pilot power must be positive");
  for (std::size_t l = 0; l < tau.size(); ++l) {
    if (rep[l] < 1 || tau_min[l] < 1 || tau[l] != rep[l] * tau_min[l]) {
      throw InfeasiblePilotError("hop " + std::to_string(l) +
                                 " violates tau = m * tau_min with m >= 1");
    }
  }
}

PilotPlan PilotPlan::minimal(const Topology& topology, double pilot_power) {
  PilotPlan p;
  p.pilot_power = pilot_power;
  p.tau_min.push_back(topology.n_tx);
  for (int k : topology.group_sizes) p.tau_min.push_back(k);
  p.rep.assign(p.tau_min.size(), 1);
  p.tau = p.tau_min;
  return p;
}

CMat make_pilots(int tau, int m) {
  if (m < 1 || tau < m) {
    throw InfeasiblePilotError("pilot length " + std::to_string(tau) + " cannot separate " +
                               std::to_string(m) + " transmitters");
  }
  CMat phi(tau, m);
  for (int k = 0; k < m; ++k) {
    for (int t = 0; t < tau; ++t) {
      // Reduce the exponent first so long pilots keep full phase accuracy.
      const auto idx = (static_cast<long long>(t) * k) % tau;
      phi(t, k) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(idx) / tau);
    }
  }
  return phi;
}

int pilot_dictionary_size(const PilotPlan& plan) {
  return *std::max_element(plan.tau_min.begin(), plan.tau_min.end());
}

CMat estimate_link(const CMat& h_true, double pilot_power, int tau, double noise_var, Rng& rng) {
  const CMat phi = make_pilots(tau, static_cast<int>(h_true.cols()));
  if (std::isinf(pilot_power)) return h_true;
  const double amp = std::sqrt(pilot_power);
  CMat y = amp * h_true * phi.transpose();
  if (noise_var > 0.0) y += complex_normal_matrix(rng, y.rows(), y.cols(), noise_var);
  return y * phi.conjugate() / (amp * tau);
}

double training_noise_var(const NoiseModel& noise, int hop) {
  const int L = static_cast<int>(noise.relay_var.size());
  if (hop < 0 || hop > L) throw ValidationError("training hop out of range");
  return hop < L ? noise.relay(hop + 1) : noise.rx_var;
}

CMat estimate_hop(const CMat& h_true, const PilotPlan& plan, int hop, double noise_var,
                  std::uint64_t seed) {
  plan.validate();
  if (hop < 0 || hop >= plan.num_hops()) throw ValidationError("training hop out of range");
  Rng rng(seed);
  return estimate_link(h_true, plan.pilot_power, plan.tau[static_cast<std::size_t>(hop)],
                       noise_var, rng);
}

EstimatedChannelSet estimate_all(const ChannelSet& ch, const PilotPlan& plan,
                                 const NoiseModel& noise, std::uint64_t seed) {
  ch.validate();
  check_plan_matches(ch, plan);
  const int L = ch.num_groups();
  noise.validate(L);
  EstimatedChannelSet est;
  est.h.resize(ch.h.size());
  for (int hop = 0; hop <= L; ++hop) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(hop)}));
    est.h[static_cast<std::size_t>(hop) + 1] =
        estimate_link(ch.h[static_cast<std::size_t>(hop) + 1], plan.pilot_power,
                      plan.tau[static_cast<std::size_t>(hop)], training_noise_var(noise, hop), rng);
  }
  if (is_blocked(ch.direct())) {
    est.h[0] = CMat::Zero(ch.direct().rows(), ch.direct().cols());
  } else {
    Rng rng(derive_seed(seed, {hash_label("direct")}));
    est.h[0] = estimate_link(ch.direct(), plan.pilot_power, plan.tau[0], noise.rx_var, rng);
  }
  return est;
}

EstimatedChannelSet inject_error(const ChannelSet& ch, const PilotPlan& plan,
                                 const NoiseModel& noise, std::uint64_t seed) {
  ch.validate();
  check_plan_matches(ch, plan);
  const int L = ch.num_groups();
  noise.validate(L);
  auto perturb = [&](const CMat& h, double var, std::uint64_t key) -> CMat {
    if (!(var > 0.0)) return h;
    Rng rng(derive_seed(seed, {key}));
    return h + complex_normal_matrix(rng, h.rows(), h.cols(), var);
  };
  EstimatedChannelSet est;
  est.h.resize(ch.h.size());
  for (int hop = 0; hop <= L; ++hop) {
    const double var = training_noise_var(noise, hop) /
                       (plan.pilot_power * plan.tau[static_cast<std::size_t>(hop)]);
    est.h[static_cast<std::size_t>(hop) + 1] =
        perturb(ch.h[static_cast<std::size_t>(hop) + 1], var, static_cast<std::uint64_t>(hop));
  }
  if (is_blocked(ch.direct())) {
    est.h[0] = CMat::Zero(ch.direct().rows(), ch.direct().cols());
  } else {
    est.h[0] = perturb(ch.direct(), noise.rx_var / (plan.pilot_power * plan.tau[0]),
                       hash_label("direct"));
  }
  return est;
}

}  // namespace otafc
