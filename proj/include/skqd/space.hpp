// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "skqd/bits.hpp"
#include "skqd/linalg.hpp"

namespace skqd {

class Space;
using SpacePtr = std::shared_ptr<const Space>;

/// Computational basis of n qubits: either all 2^n states or the
/// fixed-Hamming-weight sector of weight k, ordered lexicographically.
class Space {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  static SpacePtr full(int n_sites);
  static SpacePtr sector(int n_sites, int weight);

  int n_sites() const { return n_; }
  bool is_sector() const { return k_ >= 0; }
  std::optional<int> weight() const {
    return is_sector() ? std::optional<int>(k_) : std::nullopt;
  }
  std::size_t dim() const { return dim_; }

  Bits state(std::size_t i) const { return is_sector() ? states_[i] : static_cast<Bits>(i); }

  /// Position of b in this basis, npos if absent.
  std::size_t index(Bits b) const {
    if (!is_sector()) return (b >> n_) == 0 ? static_cast<std::size_t>(b) : npos;
    if (hamming_weight(b) != k_ || (b >> n_) != 0) return npos;
    return rank(b);
  }

  /// Lexicographic rank of a weight-k state. Precondition: weight(b) == k.
  std::size_t rank(Bits b) const {
    std::size_t r = 0;
    int j = 0;
    while (b != 0) {
      const int p = std::countr_zero(b);
      ++j;
      r += binom_[static_cast<std::size_t>(p) * stride_ + static_cast<std::size_t>(j)];
      b &= b - 1;
    }
    return r;
  }

  bool same_as(const Space& o) const { return n_ == o.n_ && k_ == o.k_; }

 private:
  Space(int n, int k);

  int n_;
  int k_;
  std::size_t dim_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> binom_;  // binom_[p * stride + j] = C(p, j)
  std::vector<Bits> states_;
};

std::uint64_t binomial(int n, int k);

/// Normalized (or intermediate, unnormalized) amplitudes over a Space.
struct State {
  SpacePtr space;
  std::vector<cplx> amps;

  State() = default;
  explicit State(SpacePtr s) : space(std::move(s)), amps(space->dim()) {}
  State(SpacePtr s, std::vector<cplx> a);

  int n_sites() const { return space->n_sites(); }
  std::size_t dim() const { return amps.size(); }
  double norm() const { return skqd::norm(std::span<const cplx>(amps)); }
  void normalize();

  /// Amplitude of basis state b (zero if b lies outside the space).
  cplx amplitude(Bits b) const;
};

/// Full-space copy of a sector state.
State embed(const State& s);

/// Restriction of a state to the weight-k sector (no renormalization).
State restrict_to_sector(const State& s, int k);

/// Same-basis representation of b in `target`; throws DimensionError if a
/// nonzero amplitude would be dropped.
State convert(const State& s, const SpacePtr& target);

/// conj(a) . b; the two states may use different spaces of equal n.
cplx inner(const State& a, const State& b);

}  // namespace skqd
