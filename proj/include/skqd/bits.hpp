// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <string_view>

namespace skqd {

/// Computational basis state packed into an integer.
///
/// Site 0 is the most significant of the n used bits, so the numeric order
/// of packed states equals the lexicographic order of their bitstrings. A set
/// bit is an excitation (spin down, Z eigenvalue -1).
using Bits = std::uint64_t;

inline constexpr int kMaxSites = 62;

constexpr Bits site_bit(int n_sites, int site) {
  return Bits{1} << (n_sites - 1 - site);
}

constexpr int hamming_weight(Bits b) { return std::popcount(b); }

constexpr bool site_occupied(Bits b, int n_sites, int site) {
  return (b >> (n_sites - 1 - site)) & 1U;
}

std::string to_bitstring(Bits b, int n_sites);

/// Throws InvalidArgument on characters other than '0'/'1' or bad length.
Bits from_bitstring(std::string_view s);

}  // namespace skqd
