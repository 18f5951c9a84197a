// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

EdResult solve(const TermList& h, const SpacePtr& space, const EdOptions& opts) {
  SpaceOperator op(h, space);
  if (!op.is_real()) throw InvalidArgument("exact diagonalization supports real Hamiltonians only");
  const RealOperator apply = [&op](std::span<const double> in, std::span<double> out) { op.apply(in, out); };
  EigenResult r = lowest_eigenpair(apply, space->dim(), opts.eig);
  EdResult out;
  out.energy = r.value;
  out.residual = r.residual;
  out.gap = r.second - r.value;
  out.degenerate = !std::isnan(out.gap) && out.gap < opts.degeneracy_gap;
  out.ground_state = State(space);
  for (std::size_t i = 0; i < r.vector.size(); ++i) out.ground_state.amps[i] = r.vector[i];
  return out;
}

}  // namespace

EdResult ed_ground(const TermList& h, const EdOptions& opts) {
  if (h.n_sites > opts.max_full_sites) {
    throw ResourceError("full-space ED is capped at " + std::to_string(opts.max_full_sites) +
                        " sites; use sector ED for weight-conserving models");
  }
  return solve(h, Space::full(h.n_sites), opts);
}

EdResult ed_ground_sector(const TermList& h, int k, const EdOptions& opts) {
  if (!conserves_weight(h)) throw SymmetryError("sector ED needs a weight-conserving Hamiltonian");
  if (k < 0 || k > h.n_sites) throw InvalidArgument("sector k=" + std::to_string(k) + " out of range");
  const std::uint64_t dim = binomial(h.n_sites, k);
  if (dim > opts.max_sector_dim) {
    throw ResourceError("sector dimension " + std::to_string(dim) + " exceeds cap " +
                        std::to_string(opts.max_sector_dim));
  }
  return solve(h, Space::sector(h.n_sites, k), opts);
}

double SparsityProfile::log_ipr() const { return std::log(ipr); }
double SparsityProfile::log10_ipr() const { return std::log10(ipr); }

SparsityProfile sparsity_profile(const State& s) {
  SparsityProfile p;
  p.sorted_probs.resize(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) p.sorted_probs[i] = std::norm(s.amps[i]);
  std::sort(p.sorted_probs.begin(), p.sorted_probs.end(), std::greater<>());
  const double total = std::accumulate(p.sorted_probs.begin(), p.sorted_probs.end(), 0.0);
  if (total == 0.0) throw InvalidArgument("sparsity profile of the zero vector");
  p.alpha.resize(p.sorted_probs.size());
  double acc = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < p.sorted_probs.size(); ++i) {
    acc += p.sorted_probs[i];
    sq += p.sorted_probs[i] * p.sorted_probs[i];
    p.alpha[i] = acc;
  }
  p.beta = p.sorted_probs;
  p.ipr = total * total / sq;
  return p;
}

}  // namespace skqd
