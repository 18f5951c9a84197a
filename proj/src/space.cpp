// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/space.hpp"

#include <string>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

constexpr int kMaxFullSites = 30;

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

Space::Space(int n, int k) : n_(n), k_(k) {
  if (n < 1 || n > kMaxSites) throw InvalidArgument("site count out of range: " + std::to_string(n));
  if (k < 0) {
    if (n > kMaxFullSites) {
      throw ResourceError("full Hilbert space of " + std::to_string(n) +
                          " sites is not representable; use a sector");
    }
    dim_ = std::size_t{1} << n;
    return;
  }
  if (k > n) {
    throw InvalidArgument("sector weight " + std::to_string(k) + " exceeds " + std::to_string(n) +
                          " sites");
  }
  stride_ = static_cast<std::size_t>(k) + 1;
  binom_.assign(static_cast<std::size_t>(n + 1) * stride_, 0);
  for (int p = 0; p <= n; ++p) {
    for (int j = 0; j <= k; ++j) binom_[static_cast<std::size_t>(p) * stride_ + static_cast<std::size_t>(j)] = binomial(p, j);
  }
  dim_ = binomial(n, k);
  states_.reserve(dim_);
  // Gosper's hack walks weight-k integers in increasing order.
  if (k == 0) {
    states_.push_back(0);
  } else {
    Bits v = (Bits{1} << k) - 1;
    const Bits limit = Bits{1} << n;
    while (v < limit) {
      states_.push_back(v);
      const Bits t = v | (v - 1);
      v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
  }
}

SpacePtr Space::full(int n_sites) { return SpacePtr(new Space(n_sites, -1)); }

SpacePtr Space::sector(int n_sites, int weight) {
  if (weight < 0) throw InvalidArgument("sector weight must be nonnegative");
  return SpacePtr(new Space(n_sites, weight));
}

State::State(SpacePtr s, std::vector<cplx> a) : space(std::move(s)), amps(std::move(a)) {
  if (amps.size() != space->dim()) throw DimensionError("amplitude count does not match space");
}

void State::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  scale(1.0 / nrm, amps);
}

cplx State::amplitude(Bits b) const {
  const std::size_t i = space->index(b);
  return i == Space::npos ? cplx{} : amps[i];
}

State embed(const State& s) {
  if (!s.space->is_sector()) return s;
  State out(Space::full(s.n_sites()));
  for (std::size_t i = 0; i < s.dim(); ++i) out.amps[s.space->state(i)] = s.amps[i];
  return out;
}

State restrict_to_sector(const State& s, int k) {
  auto target = Space::sector(s.n_sites(), k);
  State out(target);
  for (std::size_t i = 0; i < target->dim(); ++i) out.amps[i] = s.amplitude(target->state(i));
  return out;
}

State convert(const State& s, const SpacePtr& target) {
  if (target->n_sites() != s.n_sites()) throw DimensionError("site count mismatch");
  if (target->same_as(*s.space)) return s;
  State out(target);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (s.amps[i] == cplx{}) continue;
    const std::size_t j = target->index(s.space->state(i));
    if (j == Space::npos) throw DimensionError("state has weight outside the target sector");
    out.amps[j] = s.amps[i];
  }
  return out;
}

cplx inner(const State& a, const State& b) {
  if (a.n_sites() != b.n_sites()) throw DimensionError("site count mismatch");
  if (a.space->same_as(*b.space)) return dot(std::span<const cplx>(a.amps), std::span<const cplx>(b.amps));
  const State& small = a.dim() <= b.dim() ? a : b;
  const State& large = a.dim() <= b.dim() ? b : a;
  cplx s{};
  for (std::size_t i = 0; i < small.dim(); ++i) {
    const cplx x = small.amps[i];
    const cplx y = large.amplitude(small.space->state(i));
    s += (&small == &a) ? std::conj(x) * y : std::conj(y) * x;
  }
  return s;
}

}  // namespace skqd
