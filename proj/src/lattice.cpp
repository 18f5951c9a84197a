// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/lattice.hpp"

#include <algorithm>
#include <string>

#include <json.hpp>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

void check_size(int n) {
  if (n < 2) throw InvalidArgument("lattice needs at least 2 sites, got " + std::to_string(n));
}

int isqrt(int n) {
  int r = 0;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace

Geometry build_chain(int n) {
  check_size(n);
  Geometry g;
  g.n_sites = n;
  g.shape = Shape::Chain;
  g.rows = 1;
  g.cols = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
  return g;
}

Geometry build_rectangle(int n) {
  check_size(n);
  int r = isqrt(n);
  while (n % r != 0) --r;
  const int c = n / r;

  Geometry g;
  g.n_sites = n;
  g.shape = Shape::Rectangle;
  g.rows = r;
  g.cols = c;
  for (int row = 0; row < r; ++row) {
    for (int col = 0; col < c; ++col) {
      const int s = row * c + col;
      if (col + 1 < c) g.edges.emplace_back(s, s + 1);
      if (row + 1 < r) g.edges.emplace_back(s, s + c);
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<int> snake_order(const Geometry& g) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(g.n_sites));
  if (g.shape == Shape::Chain) {
    for (int i = 0; i < g.n_sites; ++i) order.push_back(i);
    return order;
  }
  for (int row = 0; row < g.rows; ++row) {
    for (int k = 0; k < g.cols; ++k) {
      const int col = (row % 2 == 0) ? k : g.cols - 1 - k;
      order.push_back(row * g.cols + col);
    }
  }
  return order;
}

void to_json(nlohmann::json& j, const Geometry& g) {
  j = nlohmann::json{{"n", g.n_sites},
                     {"shape", g.shape == Shape::Chain ? "chain" : "rect"},
                     {"rows", g.rows},
                     {"cols", g.cols},
                     {"edges", nlohmann::json::array()}};
  for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
}

void from_json(const nlohmann::json& j, Geometry& g) {
  const int n = j.at("n").get<int>();
  const auto shape = j.at("shape").get<std::string>();
  if (shape == "chain") {
    g = build_chain(n);
  } else if (shape == "rect") {
    g = build_rectangle(n);
  } else {
    throw InvalidArgument("unknown geometry shape '" + shape + "'");
  }
  if (j.contains("edges")) {
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    if (edges != g.edges) throw InvalidArgument("geometry edges do not match shape");
  }
}

}  // namespace skqd
