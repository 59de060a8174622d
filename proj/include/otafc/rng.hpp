// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include <Eigen/Dense>

namespace otafc {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a base seed with an ordered list of keys into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

/// FNV-1a, used to turn labels ("placement", heuristic names) into seed keys.
std::uint64_t hash_label(std::string_view label);

/// One draw of CN(0, variance).
std::complex<double> complex_normal(Rng& rng, double variance);

Eigen::MatrixXcd complex_normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                                       double variance);

}  // namespace otafc
