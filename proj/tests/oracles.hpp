// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

// Reference computations for the test suites. Everything here is written with plain loops
// over std::complex so it shares no linear-algebra code path with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "otafc/channel.hpp"
#include "otafc/solver.hpp"

namespace oracle {

using cd = std::complex<double>;
using otafc::CMat;
using otafc::CVec;

inline CMat matmul(const CMat& a, const CMat& b) {
  CMat c = CMat::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      cd s = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline CMat scale_rows(const CVec& d, const CMat& m) {
  CMat out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = d(i) * m(i, j);
  return out;
}

inline CMat adjoint(const CMat& m) {
  CMat out(m.cols(), m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline double fro2(const CMat& m) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) s += std::norm(m(i, j));
  return s;
}

/// H_0 + H_{L+1} A_L H_L ... A_1 H_1, evaluated left to right.
inline CMat chain(const otafc::ChannelSet& ch, const otafc::OtaParams& p) {
  const int L = ch.num_groups();
  CMat acc = ch.h[static_cast<std::size_t>(L) + 1];
  for (int l = L; l >= 1; --l) {
    CMat scaled = acc;
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j) scaled(i, j) = acc(i, j) * p.gain(l)(j);
    acc = matmul(scaled, ch.h[static_cast<std::size_t>(l)]);
  }
  return acc + ch.h[0];
}

/// Noise injected at group j reaches the Rx through H_{L+1} A_L ... H_{j+1} A_j.
inline CMat transfer(const otafc::ChannelSet& ch, const otafc::OtaParams& p, int j) {
  const int L = ch.num_groups();
  CMat acc = ch.h[static_cast<std::size_t>(L) + 1];
  for (int l = L; l >= j; --l) {
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index c = 0; c < acc.cols(); ++c) acc(i, c) *= p.gain(l)(c);
    if (l > j) acc = matmul(acc, ch.h[static_cast<std::size_t>(l)]);
  }
  return acc;
}

inline double objective(const otafc::OtaParams& p, const otafc::ChannelSet& ch, const CMat& w,
                        const otafc::NoiseModel& noise) {
  const CMat e = matmul(matmul(p.f2, chain(ch, p)), p.f1) - w;
  double penalty = noise.rx_var * fro2(p.f2);
  for (int j = 1; j <= ch.num_groups(); ++j) penalty += noise.relay(j) * fro2(matmul(p.f2, transfer(ch, p, j)));
  return fro2(e) + penalty;
}

/// Signal power incident on every relay of group l, noise-free upstream plus local noise.
inline std::vector<double> incident_power(const otafc::ChannelSet& ch, const otafc::OtaParams& p,
                                          const otafc::NoiseModel& noise, int l) {
  CMat acc = matmul(ch.h[1], p.f1);
  for (int m = 1; m < l; ++m) acc = matmul(ch.h[static_cast<std::size_t>(m) + 1], scale_rows(p.gain(m), acc));
  std::vector<double> out(static_cast<std::size_t>(acc.rows()));
  for (Eigen::Index k = 0; k < acc.rows(); ++k) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < acc.cols(); ++c) s += std::norm(acc(k, c));
    out[static_cast<std::size_t>(k)] = s + noise.relay(l);
  }
  return out;
}

/// Central-difference gradient dJ/dRe + i dJ/dIm for every entry of a complex matrix.
inline CMat fd_gradient(const std::function<double(const CMat&)>& f, const CMat& x, double h) {
  CMat g(x.rows(), x.cols());
  CMat probe = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const cd x0 = x(i, j);
      probe(i, j) = x0 + h;
      const double rp = f(probe);
      probe(i, j) = x0 - h;
      const double rm = f(probe);
      probe(i, j) = x0 + cd(0.0, h);
      const double ip = f(probe);
      probe(i, j) = x0 - cd(0.0, h);
      const double im = f(probe);
      probe(i, j) = x0;
      g(i, j) = cd((rp - rm) / (2.0 * h), (ip - im) / (2.0 * h));
    }
  return g;
}

inline double gradient_norm(const CMat& g) { return std::sqrt(fro2(g)); }

struct Normal {
  std::mt19937_64 gen;
  std::normal_distribution<double> n{0.0, 1.0};
  explicit Normal(std::uint64_t seed) : gen(seed) {}
  cd complex(double var) { return {n(gen) * std::sqrt(var / 2.0), n(gen) * std::sqrt(var / 2.0)}; }
  CMat matrix(Eigen::Index r, Eigen::Index c, double var = 1.0) {
    CMat m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = complex(var);
    return m;
  }
  CVec vector(Eigen::Index n_, double var = 1.0) { return matrix(n_, 1, var).col(0); }
};

/// Unit-scale channels: useful when the instance should be well conditioned, not realistic.
inline otafc::ChannelSet random_channels(Normal& rng, int n, const std::vector<int>& groups,
                                         bool direct = false) {
  otafc::ChannelSet ch;
  ch.h.push_back(direct ? rng.matrix(n, n) : CMat::Zero(n, n));
  int prev = n;
  for (int k : groups) {
    ch.h.push_back(rng.matrix(k, prev));
    prev = k;
  }
  ch.h.push_back(rng.matrix(n, prev));
  return ch;
}

inline otafc::OtaParams random_params(Normal& rng, int n, const std::vector<int>& groups) {
  otafc::OtaParams p;
  p.f1 = rng.matrix(n, n);
  p.f2 = rng.matrix(n, n);
  for (int k : groups) p.a.push_back(rng.vector(k));
  return p;
}

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value and the Stephens
/// small-sample correction.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  if (lambda < 0.2) return {d, 1.0};
  double q = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    q += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return {d, std::clamp(q, 0.0, 1.0)};
}

}  // namespace oracle
