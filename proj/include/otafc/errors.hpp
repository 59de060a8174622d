// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#pragma once

#include <stdexcept>
#include <string>

namespace otafc {

/// Bad shapes, out-of-range indices, or inconsistent configuration.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A pilot length shorter than the number of transmitters it must separate.
class InfeasiblePilotError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// The alternating optimization increased its objective or produced NaN.
class SolverDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace otafc
