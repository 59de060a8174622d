// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "otafc/errors.hpp"
#include "otafc/rng.hpp"

namespace otafc {
namespace {

constexpr int kMaxBacktracks = 12;

// Hermitian positive definite solve with a trace-scaled ridge when the matrix is singular.
CMat hpd_solve(const CMat& m, const CMat& rhs) {
  Eigen::LLT<CMat> llt(m);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-15) return llt.solve(rhs);
  const double eps = 1e-12 * std::max(m.trace().real(), std::numeric_limits<double>::min());
  CMat ridged = m;
  ridged.diagonal().array() += eps;
  return Eigen::LDLT<CMat>(ridged).solve(rhs);
}

OtaParams blend(const OtaParams& from, const OtaParams& to, double theta) {
  OtaParams out = from;
  out.f1 = from.f1 + theta * (to.f1 - from.f1);
  out.f2 = from.f2 + theta * (to.f2 - from.f2);
  for (std::size_t l = 0; l < out.a.size(); ++l) out.a[l] = from.a[l] + theta * (to.a[l] - from.a[l]);
  return out;
}

struct Iterate {
  OtaParams params;
  double value;
};

// Radially shrinks every relay gain that exceeds its limit, walking the chain from the BS
// so that each group sees its updated upstream input power.
void restore_feasibility(OtaParams& p, const ChannelSet& est, const NoiseModel& noise,
                         const PowerBudget& budget) {
  CMat chain = est.h[1] * p.f1;
  for (int l = 1; l <= est.num_groups(); ++l) {
    const Eigen::VectorXd pin = chain.rowwise().squaredNorm().array() + noise.relay(l);
    p.gain(l) = project_gains(p.gain(l), pin, budget.relay(l));
    chain = est.h[static_cast<std::size_t>(l) + 1] * (p.gain(l).asDiagonal() * chain);
  }
}

// Moves one block from a feasible iterate toward its closed-form update. Downstream
// relays are re-projected and F2 re-solved at every trial point; the step is halved
// until the objective does not increase, and abandoned if that never happens.
Iterate descent_step(const Iterate& current, const OtaParams& candidate, const ChannelSet& est,
                     const TargetLayer& target, const NoiseModel& noise,
                     const PowerBudget& budget) {
  double theta = 1.0;
  for (int attempt = 0; attempt < kMaxBacktracks; ++attempt, theta *= 0.5) {
    OtaParams p = blend(current.params, candidate, theta);
    restore_feasibility(p, est, noise, budget);
    p.f2 = update_f2(est, target, noise, p);
    const double v = objective(p, est, target, noise);
    if (v <= current.value) return {std::move(p), v};
  }
  return current;
}

}  // namespace

TargetLayer TargetLayer::random(int n_out, int n_in, std::uint64_t seed) {
  Rng rng(seed);
  TargetLayer t;
  t.w = complex_normal_matrix(rng, n_out, n_in, 1.0 / n_in);
  t.bias = CVec::Zero(n_out);
  return t;
}

PowerBudget PowerBudget::uniform(const Topology& topology, double p_max_bs, double p_relay) {
  PowerBudget b;
  b.p_max_bs = p_max_bs;
  for (int k : topology.group_sizes) b.p_relay.push_back(Eigen::VectorXd::Constant(k, p_relay));
  return b;
}

double objective(const OtaParams& params, const ChannelSet& est, const TargetLayer& target,
                 const NoiseModel& noise) {
  const CMat heff = effective_channel(est, params);
  const CMat r = noise_covariance(est, params, noise);
  const double imitation = (params.f2 * heff * params.f1 - target.w).squaredNorm();
  const double penalty = (params.f2 * r * params.f2.adjoint()).trace().real();
  return imitation + penalty;
}

CMat update_f2(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
               const OtaParams& params) {
  const CMat b = effective_channel(est, params) * params.f1;
  const CMat gram = b * b.adjoint() + noise_covariance(est, params, noise);
  // F2 = W B^H G^{-1}  <=>  G F2^H = B W^H for Hermitian G.
  return hpd_solve(gram, b * target.w.adjoint()).adjoint();
}

PrecoderUpdate update_f1(const ChannelSet& est, const TargetLayer& target,
                         const NoiseModel& /*noise*/, const OtaParams& params,
                         const PowerBudget& budget, double tolerance) {
  const CMat c = params.f2 * effective_channel(est, params);
  Eigen::SelfAdjointEigenSolver<CMat> eig(c.adjoint() * c);
  const Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  const CMat& v = eig.eigenvectors();
  const CMat proj = v.adjoint() * c.adjoint() * target.w;
  const Eigen::VectorXd row_energy = proj.rowwise().squaredNorm();
  const double lambda_max = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
  const double null_floor = 1e-13 * lambda_max;

  auto scales = [&](double mu) {
    Eigen::VectorXd s(lambda.size());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const double d = lambda(i) + mu;
      s(i) = (mu == 0.0 && lambda(i) <= null_floor) ? 0.0 : 1.0 / d;
    }
    return s;
  };
  auto power = [&](double mu) { return row_energy.dot(scales(mu).cwiseAbs2()); };

  double mu = 0.0;
  if (power(0.0) > budget.p_max_bs) {
    double lo = 0.0;
    double hi = std::sqrt(row_energy.sum() / budget.p_max_bs);
    while (power(hi) > budget.p_max_bs) hi *= 2.0;  // guards rounding in the analytic bracket
    for (int i = 0; i < 400; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double p = power(mid);
      if (!std::isfinite(p)) throw SolverDivergence("non-finite precoder power in bisection");
      if (p > budget.p_max_bs) lo = mid; else hi = mid;
      if (std::abs(power(hi) - budget.p_max_bs) <= tolerance * budget.p_max_bs) break;
    }
    mu = hi;  // feasible side
  }
  PrecoderUpdate out;
  out.mu = mu;
  out.f1 = v * (scales(mu).cast<std::complex<double>>().asDiagonal() * proj);
  return out;
}

double GainQuadratic::value(const CVec& a) const {
  return (a.adjoint() * gram * a)(0, 0).real() - 2.0 * rhs.dot(a).real() + constant;
}

GainQuadratic gain_quadratic(const ChannelSet& est, const TargetLayer& target,
                             const NoiseModel& noise, const OtaParams& params, int l) {
  const int L = est.num_groups();
  if (l < 1 || l > L) throw ValidationError("relay group index " + std::to_string(l) + " out of range");
  const auto hop = [&](int m) -> const CMat& { return est.h[static_cast<std::size_t>(m)]; };

  CMat lft = est.last();
  for (int m = L; m > l; --m) lft = lft * params.gain(m).asDiagonal() * hop(m);
  CMat rgt = hop(1);
  for (int m = 1; m < l; ++m) rgt = hop(m + 1) * (params.gain(m).asDiagonal() * rgt);

  const CMat p = params.f2 * lft;
  const CMat q = rgt * params.f1;
  const CMat e = target.w - params.f2 * est.direct() * params.f1;

  // Every T_j with j <= l factors as Lft A_l S_j.
  const Eigen::Index k = hop(l).rows();
  CMat z = q * q.adjoint();
  z.diagonal().array() += noise.relay(l);
  CMat s = CMat::Identity(k, k);
  for (int j = l - 1; j >= 1; --j) {
    s = s * hop(j + 1) * params.gain(j).asDiagonal();
    z.noalias() += noise.relay(j) * (s * s.adjoint());
  }

  GainQuadratic out;
  out.gram = (p.adjoint() * p).cwiseProduct(z.conjugate());
  out.rhs = p.conjugate().cwiseProduct(e * q.adjoint()).colwise().sum().transpose();
  OtaParams zeroed = params;
  zeroed.gain(l).setZero();
  out.constant = objective(zeroed, est, target, noise);
  return out;
}

CVec solve_gain_quadratic(const GainQuadratic& q) {
  const Eigen::Index n = q.gram.rows();
  CVec a = CVec::Zero(n);
  // Jacobi scaling; relays whose path is annihilated stay at zero.
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (q.gram(i, i).real() > 0.0) active.push_back(i);
  }
  if (active.empty()) return a;
  const auto m = static_cast<Eigen::Index>(active.size());
  CMat g(m, m);
  CVec b(m);
  Eigen::VectorXd d(m);
  for (Eigen::Index i = 0; i < m; ++i) d(i) = 1.0 / std::sqrt(q.gram(active[i], active[i]).real());
  for (Eigen::Index i = 0; i < m; ++i) {
    b(i) = d(i) * q.rhs(active[i]);
    for (Eigen::Index j = 0; j < m; ++j) g(i, j) = d(i) * d(j) * q.gram(active[i], active[j]);
  }
  const CVec y = hpd_solve(g, b);
  for (Eigen::Index i = 0; i < m; ++i) a(active[i]) = d(i) * y(i);
  return a;
}

CVec project_gains(const CVec& a, const Eigen::VectorXd& p_in, const Eigen::VectorXd& p_max) {
  CVec out = a;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const double mag = std::abs(a(k));
    const double limit = std::sqrt(p_max(k) / p_in(k));
    if (mag > limit) out(k) *= limit / mag;
  }
  return out;
}

CVec update_a(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
              const OtaParams& params, const PowerBudget& budget, int l) {
  const CVec a = solve_gain_quadratic(gain_quadratic(est, target, noise, params, l));
  return project_gains(a, relay_input_powers(est, params, params.f1, noise, l), budget.relay(l));
}

OtaParams initial_params(const ChannelSet& est, const TargetLayer& target,
                         const NoiseModel& noise, const PowerBudget& budget,
                         const SolverConfig& cfg, std::uint64_t seed) {
  const Eigen::Index nt = est.h[1].cols();
  const Eigen::Index n = target.w.cols();
  OtaParams p;
  if (cfg.init_mode == InitMode::ScaledIdentity) {
    p.f1 = std::sqrt(budget.p_max_bs / static_cast<double>(nt)) * CMat::Identity(nt, n);
  } else {
    Rng rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    p.f1.resize(nt, n);
    const double amp = std::sqrt(budget.p_max_bs / static_cast<double>(nt * n));
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < nt; ++i) p.f1(i, j) = std::polar(amp, phase(rng));
    }
  }
  const int L = est.num_groups();
  for (int l = 1; l <= L; ++l) p.a.push_back(CVec::Zero(est.h[static_cast<std::size_t>(l)].rows()));
  for (int l = 1; l <= L; ++l) {
    const Eigen::VectorXd pin = relay_input_powers(est, p, p.f1, noise, l);
    for (Eigen::Index k = 0; k < pin.size(); ++k) {
      p.gain(l)(k) = pin(k) > 0.0 ? std::sqrt(budget.relay(l)(k) / pin(k)) : 0.0;
    }
  }
  p.f2 = CMat::Zero(target.w.rows(), est.last().rows());
  p.f2 = update_f2(est, target, noise, p);
  return p;
}

bool is_feasible(const OtaParams& params, const ChannelSet& est, const NoiseModel& noise,
                 const PowerBudget& budget, double rel_tol) {
  if (params.f1.squaredNorm() > budget.p_max_bs * (1.0 + rel_tol)) return false;
  CMat chain = est.h[1] * params.f1;
  for (int l = 1; l <= est.num_groups(); ++l) {
    const Eigen::VectorXd pin = chain.rowwise().squaredNorm().array() + noise.relay(l);
    const Eigen::VectorXd used = params.gain(l).cwiseAbs2().cwiseProduct(pin);
    if ((used.array() > budget.relay(l).array() * (1.0 + rel_tol)).any()) return false;
    chain = est.h[static_cast<std::size_t>(l) + 1] * (params.gain(l).asDiagonal() * chain);
  }
  return true;
}

SolveResult solve(const ChannelSet& est, const TargetLayer& target, const NoiseModel& noise,
                  const PowerBudget& budget, const SolverConfig& cfg, std::uint64_t seed) {
  est.validate();
  noise.validate(est.num_groups());
  if (!(cfg.objective_tolerance > 0.0) || !(cfg.bisection_tolerance > 0.0)) {
    throw ValidationError("solver tolerances must be positive");
  }
  SolveResult result;
  Iterate it{initial_params(est, target, noise, budget, cfg, seed), 0.0};
  it.value = objective(it.params, est, target, noise);
  result.trace.push_back(it.value);

  for (int iter = 1; iter <= cfg.max_outer_iters; ++iter) {
    const double previous = it.value;

    OtaParams cand = it.params;
    cand.f1 = update_f1(est, target, noise, it.params, budget, cfg.bisection_tolerance).f1;
    it = descent_step(it, cand, est, target, noise, budget);

    for (int l = 1; l <= est.num_groups(); ++l) {
      cand = it.params;
      cand.gain(l) = update_a(est, target, noise, it.params, budget, l);
      it = descent_step(it, cand, est, target, noise, budget);
    }

    it.params.f2 = update_f2(est, target, noise, it.params);
    it.value = objective(it.params, est, target, noise);

    if (!std::isfinite(it.value)) throw SolverDivergence("objective became non-finite");
    if (it.value > previous * (1.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "objective increased from " << previous << " to " << it.value << " at iteration "
          << iter;
      throw SolverDivergence(msg.str());
    }
    result.trace.push_back(it.value);
    result.iterations = iter;
    if (previous - it.value <= cfg.objective_tolerance * previous) {
      result.converged = true;
      break;
    }
  }
  result.params = std::move(it.params);
  result.objective = it.value;
  return result;
}

TrueEvaluation evaluate_true(const OtaParams& params, const ChannelSet& true_ch,
                             const TargetLayer& target, const NoiseModel& noise,
                             const PowerBudget& budget) {
  TrueEvaluation ev;
  const CMat heff = effective_channel(true_ch, params);
  ev.nmse = (params.f2 * heff * params.f1 - target.w).squaredNorm() / target.w.squaredNorm();
  ev.objective_true = objective(params, true_ch, target, noise);
  for (int l = 1; l <= true_ch.num_groups(); ++l) {
    const Eigen::VectorXd pin = relay_input_powers(true_ch, params, params.f1, noise, l);
    const Eigen::VectorXd ratio =
        params.gain(l).cwiseAbs2().cwiseProduct(pin).cwiseQuotient(budget.relay(l));
    ev.max_relay_power_ratio = std::max(ev.max_relay_power_ratio, ratio.maxCoeff());
  }
  return ev;
}

}  // namespace otafc
