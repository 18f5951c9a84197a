// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "skqd/lattice.hpp"
#include "skqd/space.hpp"

namespace skqd {

enum class InitKind { SingletProduct, Neel, WStateProduct };
enum class Layout { Identity, Snake };

struct InitialStateSpec {
  InitKind kind = InitKind::SingletProduct;
  int k = 0;  // excitations, WStateProduct only
  Layout layout = Layout::Identity;
};

/// Site order implied by a layout on a geometry.
std::vector<int> layout_order(const Geometry& g, Layout layout);

/// Hamming weight carried by every branch of the prepared state.
int initial_weight(const InitialStateSpec& spec, int n_sites);

/// Product of singlets (|01> - |10>)/sqrt(2) on consecutive pairs of
/// `order` (identity if empty). `space` may be full or the n/2 sector.
State singlet_product(const SpacePtr& space, std::span<const int> order = {});

/// |0101...>.
State neel(const SpacePtr& space);

/// Group boundaries round(m * n / k), m = 0..k, with ties to even.
std::vector<int> w_group_boundaries(int n, int k);

/// One uniform W state per contiguous group of `order`; every branch has
/// exactly one excitation per group. k = 0 gives |0...0>.
State w_state_product(const SpacePtr& space, int k, std::span<const int> order = {});

/// Builds the state in the sector it occupies.
State prepare_initial_state(const InitialStateSpec& spec, const Geometry& g, bool use_sector);

/// |<a|b>|^2.
double overlap_sq(const State& a, const State& b);

}  // namespace skqd
