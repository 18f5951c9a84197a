// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

namespace skqd {

enum class Shape { Chain, Rectangle };

/// Open-boundary lattice. Rectangle sites are labeled row-major,
/// site = row * cols + col.
struct Geometry {
  int n_sites = 0;
  Shape shape = Shape::Chain;
  int rows = 1;
  int cols = 0;
  std::vector<std::pair<int, int>> edges;  // i < j, no duplicates
};

Geometry build_chain(int n);

/// Most-square r x c rectangle: r is the largest divisor of n not above
/// sqrt(n), found by stepping down from floor(sqrt(n)). Primes give 1 x n.
Geometry build_rectangle(int n);

/// Boustrophedon path: row 0 left to right, row 1 right to left, ...
/// Consecutive entries are always nearest neighbors. Identity for chains.
std::vector<int> snake_order(const Geometry& g);

void to_json(nlohmann::json& j, const Geometry& g);
void from_json(const nlohmann::json& j, Geometry& g);

}  // namespace skqd
