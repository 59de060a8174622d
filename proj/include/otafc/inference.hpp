// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <vector>

#include "otafc/channel.hpp"
#include "otafc/rng.hpp"
#include "otafc/solver.hpp"

namespace otafc {

/// Gaussian-mixture classification task read out after the FC layer.
///
/// Class means have equal norm sqrt(N_t), so the correlation head
/// rows m_c^H W^+ implement nearest-mean decisions on the digital output.
struct SyntheticTask {
  TargetLayer layer;
  std::vector<CVec> class_means;
  double sample_noise_var = 0.1;
  /// C x N_r, applied to (layer output - bias).
  CMat classifier_head;

  int num_classes() const { return static_cast<int>(class_means.size()); }
  /// argmax_c Re(head (y - b))_c.
  int classify(const CVec& layer_output) const;

  static SyntheticTask make(const TargetLayer& layer, int num_classes, double sample_noise_var,
                            std::uint64_t seed);
};

/// One pass x -> F1 -> relay chain with per-group noise -> Rx noise -> F2, plus the bias.
CVec ota_forward(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                 const NoiseModel& noise, const CVec& bias, Rng& rng);
CVec ota_forward(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                 const NoiseModel& noise, const CVec& bias, std::uint64_t seed);

/// Noise-free pass, F2 H_eff F1 x + b.
CVec ota_forward_noiseless(const CVec& x, const OtaParams& params, const ChannelSet& true_ch,
                           const CVec& bias);

struct AccuracyResult {
  double ota_acc = 0.0;
  double digital_acc = 0.0;
};

/// Sample i is drawn from its own stream derive_seed(seed, {i}), so the OpenMP batch
/// and the serial reference agree exactly.
AccuracyResult accuracy(const SyntheticTask& task, const OtaParams& params,
                        const ChannelSet& true_ch, const NoiseModel& noise, int num_samples,
                        std::uint64_t seed);
AccuracyResult accuracy_serial(const SyntheticTask& task, const OtaParams& params,
                               const ChannelSet& true_ch, const NoiseModel& noise,
                               int num_samples, std::uint64_t seed);

}  // namespace otafc
