// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "skqd/bits.hpp"
#include "skqd/space.hpp"

namespace skqd {

struct SampleMeta {
  int krylov_step = 0;
  std::uint64_t shots_requested = 0;
  std::uint64_t shots_discarded = 0;
  bool filtered = false;
  std::optional<int> sector;  // set by filter_sector
  std::uint64_t seed = 0;
};

/// Measurement record: counts sorted by bitstring.
struct SampleTable {
  int n_sites = 0;
  std::vector<std::pair<Bits, std::uint64_t>> counts;
  SampleMeta meta;

  std::uint64_t total() const;
  bool empty() const { return counts.empty(); }
};

struct NoiseModel {
  double readout_flip_prob = 0.0;  // independent per bit per shot, in [0, 1)
};

/// Multinomial draw of `shots` outcomes from |amplitude|^2 by inverse CDF.
/// Deterministic given the seed; independent of the thread count.
SampleTable sample(const State& s, std::uint64_t shots, std::uint64_t seed, int krylov_step = 0);

/// Flips every bit of every recorded shot independently with probability p.
SampleTable apply_readout_noise(const SampleTable& t, const NoiseModel& m, std::uint64_t seed);

/// Keeps only weight-k outcomes; discarded shots are added to the meta
/// record. The result may be empty: callers decide whether that is fatal.
[[nodiscard]] SampleTable filter_sector(const SampleTable& t, int k);

struct MergedBasis {
  int n_sites = 0;
  std::vector<Bits> bitstrings;            // sorted, distinct
  std::vector<std::uint64_t> multiplicity;  // summed counts
};

/// Union of outcomes across tables.
MergedBasis merge_tables(std::span<const SampleTable> tables);

/// JSON lines: a {"meta": {...}} header followed by
/// {"bitstring": "...", "count": c} records.
void write_jsonl(std::ostream& os, const SampleTable& t);
SampleTable read_jsonl(std::istream& is);

}  // namespace skqd
