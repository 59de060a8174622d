// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include "otafc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "otafc/errors.hpp"
#include "otafc/rng.hpp"

namespace otafc {
namespace {

double nlos_db(double d, double fc) { return 35.3 * std::log10(d) + 22.4 + 21.3 * std::log10(fc); }
double los_db(double d, double fc) { return 32.4 + 21.0 * std::log10(d) + 20.0 * std::log10(fc); }

double clamp_distance(double d) { return std::max(d, 1.0); }

double horizontal_distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

// Linear gain of one node-to-node link; in LoS-probability mode the state is drawn.
double draw_link_gain(const Position& tx, const Position& rx, const PathlossParams& params,
                      Rng& rng) {
  const double d = clamp_distance(distance(tx, rx));
  switch (params.model) {
    case PathlossModel::UmiNlos:
      return std::pow(10.0, -nlos_db(d, params.carrier_ghz) / 10.0);
    case PathlossModel::UmiLos:
      return std::pow(10.0, -los_db(d, params.carrier_ghz) / 10.0);
    case PathlossModel::UmiLosProbability: {
      std::bernoulli_distribution los(los_probability(horizontal_distance(tx, rx)));
      const double pl = los(rng) ? los_db(d, params.carrier_ghz) : nlos_db(d, params.carrier_ghz);
      return std::pow(10.0, -pl / 10.0);
    }
  }
  return 0.0;
}

// Rows are receivers, columns transmitters.
CMat scattering_link(const std::vector<Position>& rx, const std::vector<Position>& tx,
                     const PathlossParams& params, Rng& rng) {
  CMat h(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
      const double g = draw_link_gain(tx[static_cast<std::size_t>(j)],
                                      rx[static_cast<std::size_t>(i)], params, rng);
      h(i, j) = std::sqrt(g) * complex_normal(rng, 1.0);
    }
  }
  return h;
}

void check_gains(const ChannelSet& ch, const OtaParams& gains) {
  ch.validate();
  if (static_cast<int>(gains.a.size()) != ch.num_groups()) {
    throw ValidationError("gain vector count does not match group count");
  }
  for (int l = 1; l <= ch.num_groups(); ++l) {
    if (gains.gain(l).size() != ch.h[static_cast<std::size_t>(l)].rows()) {
      throw ValidationError("gain vector of group " + std::to_string(l) +
                            " does not match its size");
    }
  }
}

}  // namespace

void ChannelSet::validate() const {
  if (h.size() < 3) {
    throw ValidationError("a channel set needs a direct link, at least one hop, and a last link");
  }
  const auto L = h.size() - 2;
  for (std::size_t l = 1; l <= L; ++l) {
    if (h[l + 1].cols() != h[l].rows()) {
      throw ValidationError("channel chain broken between H_" + std::to_string(l) + " and H_" +
                            std::to_string(l + 1));
    }
  }
  if (h[0].rows() != h[L + 1].rows() || h[0].cols() != h[1].cols()) {
    throw ValidationError("direct link shape does not match the cascade");
  }
}

void NoiseModel::validate(int num_groups) const {
  if (static_cast<int>(relay_var.size()) != num_groups) {
    throw ValidationError("relay noise list does not match group count");
  }
  for (double v : relay_var) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ValidationError("noise variances must be finite and >= 0");
  }
  if (!(rx_var >= 0.0) || !std::isfinite(rx_var)) {
    throw ValidationError("noise variances must be finite and >= 0");
  }
}

NoiseModel NoiseModel::thermal(int num_groups, double psd_dbm_per_hz, double bandwidth_hz) {
  const double watts = std::pow(10.0, (psd_dbm_per_hz - 30.0) / 10.0) * bandwidth_hz;
  return uniform(num_groups, watts);
}

NoiseModel NoiseModel::uniform(int num_groups, double variance) {
  NoiseModel n;
  n.relay_var.assign(static_cast<std::size_t>(num_groups), variance);
  n.rx_var = variance;
  return n;
}

double pathloss_db(double distance_m, const PathlossParams& params) {
  const double d = clamp_distance(distance_m);
  switch (params.model) {
    case PathlossModel::UmiNlos:
      return nlos_db(d, params.carrier_ghz);
    case PathlossModel::UmiLos:
      return los_db(d, params.carrier_ghz);
    case PathlossModel::UmiLosProbability: {
      const double p = los_probability(d);
      const double g = p * std::pow(10.0, -los_db(d, params.carrier_ghz) / 10.0) +
                       (1.0 - p) * std::pow(10.0, -nlos_db(d, params.carrier_ghz) / 10.0);
      return -10.0 * std::log10(g);
    }
  }
  return 0.0;
}

double linear_gain(double distance_m, const PathlossParams& params) {
  return std::pow(10.0, -pathloss_db(distance_m, params) / 10.0);
}

double los_probability(double distance_2d_m) {
  if (distance_2d_m <= 18.0) return 1.0;
  return 18.0 / distance_2d_m + std::exp(-distance_2d_m / 36.0) * (1.0 - 18.0 / distance_2d_m);
}

ChannelSet draw_channels(const Topology& topology, const Placement& placement,
                         const PathlossParams& params, std::uint64_t seed) {
  topology.validate();
  if (!(params.carrier_ghz > 0.0)) throw ValidationError("carrier frequency must be positive");
  Rng rng(seed);
  const int L = topology.num_groups();
  const std::vector<Position> bs(static_cast<std::size_t>(topology.n_tx), placement.bs);
  const std::vector<Position> rx(static_cast<std::size_t>(topology.n_rx), placement.rx);

  ChannelSet ch;
  ch.h.resize(static_cast<std::size_t>(L) + 2);

  ch.h[1] = scattering_link(placement.relays[0], bs, params, rng);
  for (int l = 2; l <= L; ++l) {
    ch.h[static_cast<std::size_t>(l)] =
        scattering_link(placement.relays[static_cast<std::size_t>(l - 1)],
                        placement.relays[static_cast<std::size_t>(l - 2)], params, rng);
  }
  ch.h[static_cast<std::size_t>(L) + 1] =
      scattering_link(rx, placement.relays[static_cast<std::size_t>(L - 1)], params, rng);

  if (topology.direct_link_present) {
    const double g = draw_link_gain(placement.bs, placement.rx, params, rng);
    const double k = std::pow(10.0, params.ricean_k_db / 10.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    CVec ar(topology.n_rx);
    CVec at(topology.n_tx);
    for (auto& v : ar) v = std::polar(1.0, phase(rng));
    for (auto& v : at) v = std::polar(1.0, phase(rng));
    const CMat los = ar * at.transpose();
    const CMat nlos = complex_normal_matrix(rng, topology.n_rx, topology.n_tx, 1.0);
    ch.h[0] = std::sqrt(g) * (std::sqrt(k / (k + 1.0)) * los + std::sqrt(1.0 / (k + 1.0)) * nlos);
  } else {
    ch.h[0] = CMat::Zero(topology.n_rx, topology.n_tx);
  }
  return ch;
}

CMat effective_channel(const ChannelSet& ch, const OtaParams& gains) {
  check_gains(ch, gains);
  CMat chain = ch.h[1];
  for (int l = 1; l <= ch.num_groups(); ++l) {
    chain = ch.h[static_cast<std::size_t>(l) + 1] * (gains.gain(l).asDiagonal() * chain);
  }
  return ch.direct() + chain;
}

CMat transfer_matrix(const ChannelSet& ch, const OtaParams& gains, int j) {
  check_gains(ch, gains);
  const int L = ch.num_groups();
  if (j < 1 || j > L) {
    throw ValidationError("transfer matrix index " + std::to_string(j) + " out of range");
  }
  CMat t = ch.last();
  for (int l = L; l >= j; --l) {
    t = t * gains.gain(l).asDiagonal();
    if (l > j) t = t * ch.h[static_cast<std::size_t>(l)];
  }
  return t;
}

CMat noise_covariance(const ChannelSet& ch, const OtaParams& gains, const NoiseModel& noise) {
  check_gains(ch, gains);
  const int L = ch.num_groups();
  noise.validate(L);
  const Eigen::Index nr = ch.last().rows();
  CMat r = noise.rx_var * CMat::Identity(nr, nr);
  // Walk the chain backwards so that each T_j reuses T_{j+1}.
  CMat t = ch.last();
  for (int j = L; j >= 1; --j) {
    t = t * gains.gain(j).asDiagonal();
    r.noalias() += noise.relay(j) * (t * t.adjoint());
    if (j > 1) t = t * ch.h[static_cast<std::size_t>(j)];
  }
  return r;
}

Eigen::VectorXd relay_input_powers(const ChannelSet& ch, const OtaParams& gains,
                                   const CMat& f1, const NoiseModel& noise, int l) {
  check_gains(ch, gains);
  if (l < 1 || l > ch.num_groups()) {
    throw ValidationError("relay group index " + std::to_string(l) + " out of range");
  }
  CMat chain = ch.h[1] * f1;
  for (int m = 1; m < l; ++m) {
    chain = ch.h[static_cast<std::size_t>(m) + 1] * (gains.gain(m).asDiagonal() * chain);
  }
  return chain.rowwise().squaredNorm().array() + noise.relay(l);
}

double relay_input_power(const ChannelSet& ch, const OtaParams& gains, const CMat& f1,
                         const NoiseModel& noise, int l, int k) {
  const Eigen::VectorXd p = relay_input_powers(ch, gains, f1, noise, l);
  if (k < 0 || k >= p.size()) {
    throw ValidationError("relay index " + std::to_string(k) + " out of range");
  }
  return p(k);
}

HopStatistics hop_statistics(const Topology& topology, const Placement& placement,
                             const PathlossParams& params) {
  const int L = topology.num_groups();
  auto mean_gain = [&](const std::vector<Position>& from, const std::vector<Position>& to) {
    double sum = 0.0;
    for (const auto& a : from) {
      for (const auto& b : to) sum += linear_gain(distance(a, b), params);
    }
    return sum / static_cast<double>(from.size() * to.size());
  };
  HopStatistics s;
  s.beta.push_back(mean_gain({placement.bs}, placement.relays.front()));
  for (int l = 1; l < L; ++l) {
    s.beta.push_back(mean_gain(placement.relays[static_cast<std::size_t>(l - 1)],
                               placement.relays[static_cast<std::size_t>(l)]));
  }
  s.beta.push_back(mean_gain(placement.relays.back(), {placement.rx}));
  return s;
}

}  // namespace otafc
