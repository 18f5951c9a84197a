// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <variant>
#include <vector>

#include "skqd/hamiltonian.hpp"
#include "skqd/space.hpp"

namespace skqd {

struct ExactMethod {
  double tol = 1e-12;
};

struct Trotter2Method {
  int reps = 3;
};

/// Krylov states |psi_k> = exp(-i k H dt)|psi_0>, k = 0..d-1.
struct EvolutionConfig {
  double dt = 0.3;
  int d = 5;
  std::variant<Trotter2Method, ExactMethod> method = Trotter2Method{};

  void validate() const;
};

/// exp(-i H t)|s> by short-time Lanczos propagation using only matvecs.
/// Error per unit time is controlled by `tol`; throws ConvergenceError if a
/// step cannot be resolved.
State evolve_exact(const SpaceOperator& op, const State& s, double t, double tol = 1e-12);
State evolve_exact(const TermList& h, const State& s, double t, double tol = 1e-12);

/// Symmetric (second-order) product formula over mutually commuting layers:
/// one diagonal layer plus the flip groups edge-colored so that groups in a
/// layer act on disjoint sites. Layer exponentials are exact.
class TrotterPlan {
 public:
  TrotterPlan(const TermList& h, SpacePtr space);

  /// Evolves `s` for total time dt in `reps` symmetric steps.
  void evolve(State& s, double dt, int reps) const;

  std::size_t num_layers() const { return layers_.size() + 1; }
  const SpaceOperator& op() const { return op_; }

 private:
  struct LocalUnitary;
  void apply_group(std::size_t g, const LocalUnitary& u, std::vector<cplx>& in, std::vector<cplx>& buf) const;

  SpaceOperator op_;
  std::vector<std::vector<std::size_t>> layers_;  // flip-group indices
};

State trotter_step(const TermList& h, const State& s, double dt, int reps);

std::vector<State> krylov_states(const TermList& h, const State& psi0, const EvolutionConfig& cfg);

}  // namespace skqd
