// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "skqd/analysis.hpp"
#include "skqd/hamiltonian.hpp"
#include "skqd/skqd.hpp"

namespace skqd {

inline constexpr double kTieTolerance = 1e-9;

struct SectorOutcome {
  int k = 0;
  double energy = 0.0;
  std::size_t basis_size = 0;
  std::uint64_t shots_discarded = 0;
  std::optional<double> reference_energy;  // sector ED, when the oracle ran
  std::optional<double> alpha_L;
  std::optional<double> gamma0_sq;
};

struct SectorSweepResult {
  int n_sites = 0;
  std::vector<SectorOutcome> per_sector;  // ascending k, empty sectors omitted
  int best_k = 0;
  int magnetization = 0;  // N - 2 best_k
  double energy = 0.0;
  bool degenerate = false;  // runner-up sector within kTieTolerance
};

/// Index of the lowest energy, ties within kTieTolerance going to the earlier
/// entry (callers order candidates by ascending k). Sets `tie` when the
/// runner-up lies within the tolerance.
std::size_t select_lowest(std::span<const double> energies, bool* tie = nullptr);

/// One SKQD run per sector with a W-state product initial state and
/// post-selection on the sector weight. The sector's initial state and
/// filter are set from `k`; other settings come from `cfg`.
SectorSweepResult sector_sweep(const ModelParams& params, std::span<const int> sectors, const SkqdConfig& cfg);

/// Sector ED energies of a weight-conserving model. The Zeeman term is a
/// constant -h_z (N - 2k) inside sector k, so energies are computed once at
/// h_z = 0 and shifted. Results are memoized in-process and, when
/// SKQD_LAB_CACHE names a directory, on disk.
class SectorReference {
 public:
  SectorReference(const ModelParams& params, std::span<const int> sectors, const EdOptions& opts = {});

  bool available() const { return available_; }
  double energy(int k, double h_z) const;
  /// Lowest sector at field h_z, with the same tie rule as sector sweeps.
  int best_k(double h_z, bool* tie = nullptr) const;
  std::span<const int> sectors() const { return sectors_; }

 private:
  int n_ = 0;
  bool available_ = false;
  std::vector<int> sectors_;
  std::vector<double> zero_field_;
};

struct FieldSweepOptions {
  std::vector<int> sectors;          // empty: 0..N/2
  std::optional<int> sector_window;  // around the reference sector
  bool reference = true;
  EdOptions ed;
};

struct FieldSweepRow {
  double h_z = 0.0;
  int best_k = 0;
  int magnetization = 0;
  double m_rel = 0.0;  // magnetization / N
  double energy = 0.0;
  std::optional<double> reference_energy;
  std::optional<int> reference_k;
  std::size_t basis_size = 0;
  std::uint64_t shots_discarded = 0;
  bool degenerate = false;
  bool reference_degenerate = false;
  std::vector<SectorOutcome> sectors;
};

/// Sector sweep at every field value. Grid points run in parallel with seeds
/// derived from their index; rows come back in grid order.
std::vector<FieldSweepRow> field_sweep(const ModelParams& base, std::span<const double> hz_grid,
                                       const SkqdConfig& cfg, const FieldSweepOptions& opts = {});

struct SparsityRow {
  double delta = 0.0;
  double h_z = 0.0;
  double log_ipr_nat = 0.0;
  double log_ipr_10 = 0.0;
  int ground_k = 0;
  double energy = 0.0;
  bool degenerate = false;
};

/// Ground-state sparsity over a (delta, h_z) grid from sector ED. Rows are
/// delta-major.
std::vector<SparsityRow> sparsity_map(const Geometry& geometry, double J, std::span<const double> delta_grid,
                                      std::span<const double> hz_grid, const EdOptions& opts = {});

void write_field_sweep_csv(std::ostream& os, std::span<const FieldSweepRow> rows);
void write_sector_detail_csv(std::ostream& os, std::span<const FieldSweepRow> rows);
void write_sparsity_map_csv(std::ostream& os, std::span<const SparsityRow> rows);

std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace skqd
