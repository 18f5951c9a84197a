// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

namespace skqd {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Combines a base seed with task coordinates (Krylov step, sector, grid
/// index, ...). Independent of evaluation order and thread count.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = 0x6A09E667F3BCC909ULL;
  for (auto c : coords) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
  return base ^ h;
}

/// Counter-based stream: value i is a pure function of (seed, i).
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : key_(splitmix64(seed)) {}

  constexpr std::uint64_t at(std::uint64_t counter) const {
    return splitmix64(key_ ^ splitmix64(counter));
  }
  std::uint64_t next() { return at(counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  static constexpr double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
  }
  double uniform() { return to_unit(next()); }
  double uniform_at(std::uint64_t counter) const { return to_unit(at(counter)); }

  std::uint64_t position() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace skqd
