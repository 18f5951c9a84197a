// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "skqd/analysis.hpp"
#include "skqd/eigensolver.hpp"
#include "skqd/evolution.hpp"
#include "skqd/hamiltonian.hpp"
#include "skqd/sampling.hpp"
#include "skqd/states.hpp"

namespace skqd {

/// Sparse symmetric matrix in CSR form.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  void multiply(std::span<const double> in, std::span<double> out) const;
  double at(std::size_t r, std::size_t c) const;
  std::size_t nnz() const { return val.size(); }
};

/// Galerkin projection of H onto a set of computational basis states. The
/// overlap matrix of distinct bitstrings is the identity, so only H is stored.
struct SubspaceProblem {
  int n_sites = 0;
  std::vector<Bits> basis;
  CsrMatrix h_eff;

  std::size_t size() const { return basis.size(); }
  std::vector<double> dense() const;  // row-major, for tests and small problems
};

SubspaceProblem project_hamiltonian(const TermList& h, std::span<const Bits> basis);

struct SkqdResult {
  double energy = 0.0;
  std::vector<double> ground_vector;
  std::vector<Bits> basis;
  std::size_t basis_size = 0;
  double residual = 0.0;
  std::uint64_t shots_discarded = 0;
  // Oracle diagnostics, present when exact diagonalization was affordable.
  std::optional<double> gamma0_sq;
  std::optional<double> reference_energy;
  std::optional<double> alpha_L;
  nlohmann::json config_echo = nlohmann::json::object();
};

SkqdResult solve_subspace(const SubspaceProblem& p, const EigenOptions& opts = {});

struct SkqdConfig {
  InitialStateSpec init;
  EvolutionConfig evolution;
  std::uint64_t shots = 300000;
  std::optional<NoiseModel> noise;
  std::optional<int> filter_k;
  std::uint64_t seed = 0;
  std::uint64_t grid_index = 0;  // extra seed coordinate for sweeps
  bool oracle = true;
  EdOptions ed;
  EigenOptions eig;
};

nlohmann::json echo(const SkqdConfig& cfg);

SkqdResult skqd_run(const ModelParams& params, const SkqdConfig& cfg);

void to_json(nlohmann::json& j, const SkqdResult& r);

/// Weight of `ground` captured by the bitstrings in `basis`.
double captured_weight(const State& ground, std::span<const Bits> basis);

struct BoundParams {
  int d = 1;
  std::size_t L = 1;
  double eta = 0.01;
  double gamma0_sq = 1.0;
  double beta_L = 0.0;
  double eps_tilde = 0.0;
  double alpha_L = 1.0;
  double h_norm = 0.0;

  void validate() const;
};

/// Upper bound sqrt(8) ||H|| (1 - sqrt(alpha_L))^(1/2) on the ground-energy error.
double energy_error_bound(double alpha_L, double h_norm);

/// Shots per Krylov state sufficient for the sparsity-based guarantee:
/// d^2 ln(L/eta) / (gamma0^2 (beta_L - 2 sqrt(eps))).
double sample_count_bound(const BoundParams& b);

}  // namespace skqd
