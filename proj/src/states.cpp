// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/states.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

std::vector<int> resolve_order(int n, std::span<const int> order) {
  if (order.empty()) {
    std::vector<int> id(static_cast<std::size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    return id;
  }
  if (order.size() != static_cast<std::size_t>(n)) throw DimensionError("site order has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int s : order) {
    if (s < 0 || s >= n || seen[static_cast<std::size_t>(s)]) throw InvalidArgument("site order is not a permutation");
    seen[static_cast<std::size_t>(s)] = true;
  }
  return {order.begin(), order.end()};
}

// Expands a product of per-group superpositions into `space`.
struct Factor {
  std::vector<std::pair<Bits, cplx>> branches;
};

State expand_product(const SpacePtr& space, const std::vector<Factor>& factors) {
  std::vector<std::pair<Bits, cplx>> acc{{0, cplx{1.0, 0.0}}};
  for (const auto& f : factors) {
    std::vector<std::pair<Bits, cplx>> next;
    next.reserve(acc.size() * f.branches.size());
    for (const auto& [b, a] : acc) {
      for (const auto& [fb, fa] : f.branches) next.emplace_back(b | fb, a * fa);
    }
    acc = std::move(next);
  }
  State s(space);
  for (const auto& [b, a] : acc) {
    const std::size_t i = space->index(b);
    if (i == Space::npos) throw DimensionError("initial state does not lie in the requested sector");
    s.amps[i] += a;
  }
  return s;
}

}  // namespace

std::vector<int> layout_order(const Geometry& g, Layout layout) {
  if (layout == Layout::Snake) return snake_order(g);
  return resolve_order(g.n_sites, {});
}

int initial_weight(const InitialStateSpec& spec, int n) {
  switch (spec.kind) {
    case InitKind::SingletProduct: return n / 2;
    case InitKind::Neel: return n / 2;
    case InitKind::WStateProduct: return spec.k;
  }
  return 0;
}

State singlet_product(const SpacePtr& space, std::span<const int> order_in) {
  const int n = space->n_sites();
  if (n % 2 != 0) throw InvalidArgument("singlet product needs an even number of sites, got " + std::to_string(n));
  const auto order = resolve_order(n, order_in);
  const double amp = 1.0 / std::sqrt(2.0);
  std::vector<Factor> factors;
  for (int p = 0; p < n; p += 2) {
    const Bits first = site_bit(n, order[static_cast<std::size_t>(p)]);
    const Bits second = site_bit(n, order[static_cast<std::size_t>(p + 1)]);
    // |01> - |10> on (first, second)
    factors.push_back({{{second, cplx{amp, 0.0}}, {first, cplx{-amp, 0.0}}}});
  }
  return expand_product(space, factors);
}

State neel(const SpacePtr& space) {
  const int n = space->n_sites();
  Bits b = 0;
  for (int i = 1; i < n; i += 2) b |= site_bit(n, i);
  State s(space);
  const std::size_t i = space->index(b);
  if (i == Space::npos) throw DimensionError("Neel state does not lie in the requested sector");
  s.amps[i] = 1.0;
  return s;
}

std::vector<int> w_group_boundaries(int n, int k) {
  if (k < 0 || k > n) {
    throw InvalidArgument("sector k=" + std::to_string(k) + " invalid for " + std::to_string(n) + " sites");
  }
  std::vector<int> b;
  if (k == 0) return {0, n};
  for (int m = 0; m <= k; ++m) {
    const long long num = static_cast<long long>(m) * n;
    long long q = num / k;
    const long long r2 = 2 * (num % k);
    if (r2 > k || (r2 == k && q % 2 != 0)) ++q;
    b.push_back(static_cast<int>(q));
  }
  for (std::size_t m = 1; m < b.size(); ++m) {
    if (b[m] <= b[m - 1]) throw InvalidArgument("empty W-state group");
  }
  return b;
}

State w_state_product(const SpacePtr& space, int k, std::span<const int> order_in) {
  const int n = space->n_sites();
  const auto bounds = w_group_boundaries(n, k);
  const auto order = resolve_order(n, order_in);
  std::vector<Factor> factors;
  if (k > 0) {
    for (std::size_t m = 0; m + 1 < bounds.size(); ++m) {
      const int size = bounds[m + 1] - bounds[m];
      const double amp = 1.0 / std::sqrt(static_cast<double>(size));
      Factor f;
      for (int p = bounds[m]; p < bounds[m + 1]; ++p) {
        f.branches.emplace_back(site_bit(n, order[static_cast<std::size_t>(p)]), cplx{amp, 0.0});
      }
      factors.push_back(std::move(f));
    }
  }
  return expand_product(space, factors);
}

State prepare_initial_state(const InitialStateSpec& spec, const Geometry& g, bool use_sector) {
  const int n = g.n_sites;
  if (spec.kind == InitKind::WStateProduct && (spec.k < 0 || spec.k > n)) {
    throw InvalidArgument("W-state sector k=" + std::to_string(spec.k) + " out of range");
  }
  if (spec.kind == InitKind::SingletProduct && n % 2 != 0) {
    throw InvalidArgument("singlet product needs an even number of sites");
  }
  const SpacePtr space = use_sector ? Space::sector(n, initial_weight(spec, n)) : Space::full(n);
  const auto order = layout_order(g, spec.layout);
  switch (spec.kind) {
    case InitKind::SingletProduct: return singlet_product(space, order);
    case InitKind::Neel: return neel(space);
    case InitKind::WStateProduct: return w_state_product(space, spec.k, order);
  }
  throw InvalidArgument("unknown initial state kind");
}

double overlap_sq(const State& a, const State& b) {
  if (a.n_sites() != b.n_sites()) throw DimensionError("overlap of states with different site counts");
  return std::norm(inner(a, b));
}

}  // namespace skqd
