// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <cstdint>
#include <vector>

#include "otafc/channel.hpp"
#include "otafc/estimation.hpp"
#include "otafc/topology.hpp"

namespace otafc {

/// y = W x + b; the bias is added digitally after the analog layer.
struct TargetLayer {
  CMat w;
  CVec bias;

  /// W with i.i.d. CN(0, 1/n_in) entries and zero bias.
  static TargetLayer random(int n_out, int n_in, std::uint64_t seed);
};

struct PowerBudget {
  double p_max_bs = 49.0;
  /// p_relay[l - 1](k) is the power limit of device k in group l.
  std::vector<Eigen::VectorXd> p_relay;

  const Eigen::VectorXd& relay(int l) const { return p_relay.at(static_cast<std::size_t>(l - 1)); }
  static PowerBudget uniform(const Topology& topology, double p_max_bs, double p_relay);
};

enum class InitMode {
  ScaledIdentity,  ///< F1 = sqrt(P_max / N_t) I
  RandomPhase,     ///< F1 with random unit-modulus entries at full power
};

struct SolverConfig {
  int max_outer_iters = 100;
  double objective_tolerance = 1e-6;
  /// Relative tolerance on ||F1||_F^2 - P_max when the BS constraint binds.
  double bisection_tolerance = 1e-9;
  InitMode init_mode = InitMode::ScaledIdentity;
};

struct SolveResult {
  OtaParams params;
  /// Objective after initialization, then after every outer iteration.
  std::vector<double> trace;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// ||F2 H_eff F1 - W||_F^2 + tr(F2 R_n F2^H) on whichever channels are passed in.
double objective(const OtaParams& params, const ChannelSet& est, const TargetLayer& target,
                 const NoiseModel& noise);

/// F2 = W B^H (B B^H + R_n)^{-1} with B = H_eff F1.
CMat update_f2(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
               const OtaParams& params);

struct PrecoderUpdate {
  CMat f1;
  /// Lagrange multiplier of the BS power constraint (0 when it is slack).
  double mu = 0.0;
};

/// F1(mu) = (C^H C + mu I)^{-1} C^H W with C = F2 H_eff; mu found by bisection
/// when the unregularized (minimum-norm) solution exceeds P_max.
PrecoderUpdate update_f1(const ChannelSet& est, const TargetLayer& target,
                         const NoiseModel& noise, const OtaParams& params,
                         const PowerBudget& budget, double tolerance);

/// The objective restricted to the gains a of group l:
///   J(a) = a^H gram a - 2 Re(rhs^H a) + constant.
struct GainQuadratic {
  CMat gram;
  CVec rhs;
  double constant = 0.0;

  double value(const CVec& a) const;
};

GainQuadratic gain_quadratic(const ChannelSet& est, const TargetLayer& target,
                             const NoiseModel& noise, const OtaParams& params, int l);

/// Minimizer of the quadratic; falls back to a ridge of 1e-12 trace when singular.
CVec solve_gain_quadratic(const GainQuadratic& q);

/// Scales each gain down to the largest magnitude with |a_k|^2 p_in_k <= P_k.
CVec project_gains(const CVec& a, const Eigen::VectorXd& p_in, const Eigen::VectorXd& p_max);

/// Regularized LS in a_l followed by the per-relay projection, with input powers
/// evaluated on the estimated channels for the current upstream blocks.
CVec update_a(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
              const OtaParams& params, const PowerBudget& budget, int l);

/// Feasible starting point: F1 from init_mode, relays at full power, F2 from update_f2.
OtaParams initial_params(const ChannelSet& est, const TargetLayer& target,
                         const NoiseModel& noise, const PowerBudget& budget,
                         const SolverConfig& cfg, std::uint64_t seed);

/// BS and every relay constraint satisfied within relative slack rel_tol.
bool is_feasible(const OtaParams& params, const ChannelSet& est, const NoiseModel& noise,
                 const PowerBudget& budget, double rel_tol = 1e-9);

/// Alternating optimization F1 -> A_1..A_L -> F2 on the estimated channels.
/// Throws SolverDivergence if the objective rises or becomes non-finite.
SolveResult solve(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
                  const PowerBudget& budget, const SolverConfig& cfg, std::uint64_t seed);

struct TrueEvaluation {
  double nmse = 0.0;
  double objective_true = 0.0;
  /// max over relays of |a|^2 p_in / P on the true channels; diagnostic only.
  double max_relay_power_ratio = 0.0;
};

TrueEvaluation evaluate_true(const OtaParams& params, const ChannelSet& true_ch,
                             const TargetLayer& target, const NoiseModel& noise,
                             const PowerBudget& budget);

}  // namespace otafc
