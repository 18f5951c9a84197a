// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace skqd {

using RealOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct EigenOptions {
  double tol = 1e-10;              // on ||A v - lambda v||
  std::size_t dense_max = 512;     // dense diagonalization at or below this size
  std::size_t max_basis = 64;      // Lanczos vectors kept in memory
  std::size_t memory_budget = std::size_t{768} << 20;
  std::size_t max_matvecs = 50000;
  std::uint64_t seed = 0x51DE5EEDULL;
};

struct EigenResult {
  double value = 0.0;
  std::vector<double> vector;  // unit norm
  double residual = 0.0;
  double second = std::numeric_limits<double>::quiet_NaN();  // next Ritz value
  std::size_t matvecs = 0;
};

/// Lowest eigenpair of a real symmetric operator. Thick-restart Lanczos with
/// full reorthogonalization; dense fallback for small dimensions.
/// Throws ConvergenceError if max_matvecs is exhausted.
EigenResult lowest_eigenpair(const RealOperator& op, std::size_t dim, const EigenOptions& opts = {});

}  // namespace skqd
