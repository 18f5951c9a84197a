// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "skqd/eigensolver.hpp"
#include "skqd/hamiltonian.hpp"
#include "skqd/space.hpp"

namespace skqd {

struct EdOptions {
  int max_full_sites = 20;
  std::size_t max_sector_dim = 5'000'000;
  double degeneracy_gap = 1e-9;
  EigenOptions eig{.tol = 1e-10, .dense_max = 1024};
};

struct EdResult {
  double energy = 0.0;
  State ground_state;
  bool degenerate = false;  // next eigenvalue within degeneracy_gap
  double gap = 0.0;         // NaN when the space is one-dimensional
  double residual = 0.0;
};

/// Ground state in the full 2^n space.
EdResult ed_ground(const TermList& h, const EdOptions& opts = {});

/// Ground state within the weight-k sector. H must conserve weight.
EdResult ed_ground_sector(const TermList& h, int k, const EdOptions& opts = {});

struct SparsityProfile {
  std::vector<double> sorted_probs;  // |g|^2, nonincreasing
  std::vector<double> alpha;         // alpha[L-1] = sum of the L largest
  std::vector<double> beta;          // beta[L-1] = L-th largest
  double ipr = 1.0;                  // 1 / sum |g|^4

  double log_ipr() const;
  double log10_ipr() const;
};

SparsityProfile sparsity_profile(const State& s);

}  // namespace skqd
