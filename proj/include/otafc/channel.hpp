// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "otafc/topology.hpp"

namespace otafc {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class PathlossModel {
  UmiNlos,            ///< UMi street canyon NLoS for every link
  UmiLos,             ///< UMi street canyon LoS for every link
  UmiLosProbability,  ///< per-link LoS state drawn from the UMi LoS probability
};

struct PathlossParams {
  double carrier_ghz = 28.0;
  PathlossModel model = PathlossModel::UmiNlos;
  /// Ricean factor of the direct BS-Rx link, in dB.
  double ricean_k_db = 0.0;
};

/// Channel matrices of one realization, indexed exactly like the cascade:
/// h[0] = direct BS->Rx (N_r x N_t), h[1] = BS->group 1 (K_1 x N_t),
/// h[l] = group l-1 -> group l (K_l x K_{l-1}), h[L+1] = group L -> Rx (N_r x K_L).
struct ChannelSet {
  std::vector<CMat> h;

  int num_groups() const { return static_cast<int>(h.size()) - 2; }
  const CMat& direct() const { return h.front(); }
  const CMat& last() const { return h.back(); }

  /// Throws ValidationError if the dimension chain is broken.
  void validate() const;
};

/// Average noise powers in watts. relay_var[l - 1] belongs to group l.
struct NoiseModel {
  std::vector<double> relay_var;
  double rx_var = 0.0;

  double relay(int l) const { return relay_var.at(static_cast<std::size_t>(l - 1)); }
  void validate(int num_groups) const;

  /// Same thermal floor N_o * B at every node.
  static NoiseModel thermal(int num_groups, double psd_dbm_per_hz = -174.0,
                            double bandwidth_hz = 300e6);
  static NoiseModel uniform(int num_groups, double variance);
};

/// Precoder, relay gains, and combiner of the analog layer.
///
/// f1 is N_t x N, f2 is N x N_r (it is applied to the received vector), and
/// a[l - 1] holds the K_l complex gains of group l.
struct OtaParams {
  CMat f1;
  CMat f2;
  std::vector<CVec> a;

  const CVec& gain(int l) const { return a.at(static_cast<std::size_t>(l - 1)); }
  CVec& gain(int l) { return a.at(static_cast<std::size_t>(l - 1)); }
};

/// Mean linear large-scale gain of each training hop. beta[0] is BS -> group 1,
/// beta[l] is group l -> next stage, beta[L] is group L -> Rx.
struct HopStatistics {
  std::vector<double> beta;
};

/// UMi street canyon pathloss in dB; distances below 1 m are clamped to 1 m.
/// For UmiLosProbability this is the dB value of the LoS-probability-weighted linear gain.
double pathloss_db(double distance_m, const PathlossParams& params);

/// Linear power gain 10^(-PL/10).
double linear_gain(double distance_m, const PathlossParams& params);

/// UMi LoS probability as a function of horizontal distance.
double los_probability(double distance_2d_m);

/// Large-scale gain x i.i.d. CN(0,1); the direct link is Ricean with a random
/// unit-modulus rank-one LoS part. Deterministic in seed.
ChannelSet draw_channels(const Topology& topology, const Placement& placement,
                         const PathlossParams& params, std::uint64_t seed);

/// H_0 + H_{L+1} A_L H_L ... A_1 H_1.
CMat effective_channel(const ChannelSet& ch, const OtaParams& gains);

/// T_j = H_{L+1} A_L H_L ... H_{j+1} A_j for j in 1..L.
CMat transfer_matrix(const ChannelSet& ch, const OtaParams& gains, int j);

/// sigma_c^2 I + sum_j sigma_{u,j}^2 T_j T_j^H.
CMat noise_covariance(const ChannelSet& ch, const OtaParams& gains, const NoiseModel& noise);

/// Squared norm of row k of H_l A_{l-1} ... A_1 H_1 F_1 plus sigma_{u,l}^2 (k is 0-based).
double relay_input_power(const ChannelSet& ch, const OtaParams& gains, const CMat& f1,
                         const NoiseModel& noise, int l, int k);

/// All input powers of group l at once.
Eigen::VectorXd relay_input_powers(const ChannelSet& ch, const OtaParams& gains,
                                   const CMat& f1, const NoiseModel& noise, int l);

HopStatistics hop_statistics(const Topology& topology, const Placement& placement,
                             const PathlossParams& params);

}  // namespace otafc
