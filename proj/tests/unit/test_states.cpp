// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <doctest.h>

#include "oracle.hpp"
#include "skqd/analysis.hpp"
#include "skqd/errors.hpp"
#include "skqd/states.hpp"

using namespace skqd;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("two-qubit singlet from the X, H, CNOT circuit") {
  using oracle::Mat;
  Mat x(2, 2), hd(2, 2), cnot(4, 4);
  x << 0, 1, 1, 0;
  hd << r2, r2, r2, -r2;
  cnot << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;  // control = qubit 0 (leftmost)
  oracle::Vec v = oracle::Vec::Zero(4);
  v(0) = 1.0;
  v = oracle::kron(x, x) * v;
  v = oracle::kron(hd, Mat::Identity(2, 2)) * v;
  v = cnot * v;

  const State s = singlet_product(Space::full(2));
  for (int i = 0; i < 4; ++i) CHECK(s.amps[static_cast<std::size_t>(i)] == v(i));
  CHECK(s.amps[0b01] == cplx{r2});
  CHECK(s.amps[0b10] == cplx{-r2});
}

TEST_CASE("four-site singlet product") {
  const State s = singlet_product(Space::full(4));
  CHECK(std::abs(s.amps[0b0101] - 0.5) < 1e-15);
  CHECK(std::abs(s.amps[0b0110] + 0.5) < 1e-15);
  CHECK(std::abs(s.amps[0b1001] + 0.5) < 1e-15);
  CHECK(std::abs(s.amps[0b1010] - 0.5) < 1e-15);
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-15));

  // Ground state of the odd-bond Hamiltonian, energy 2 x (-3).
  ModelParams p{.geometry = build_chain(4)};
  p.geometry.edges = {{0, 1}, {2, 3}};
  const TermList h = build_terms(p);
  CHECK(oracle::ground_energy(h) == doctest::Approx(-6.0).epsilon(1e-12));
  const State hs = apply(h, s);
  for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(hs.amps[i] + 6.0 * s.amps[i]) < 1e-14);

  const State sec = singlet_product(Space::sector(4, 2));
  CHECK(overlap_sq(sec, s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(singlet_product(Space::full(3)), InvalidArgument);
}

TEST_CASE("snake singlets pair sites along the snake") {
  const Geometry g = build_rectangle(4);  // 2 x 2, snake 0,1,3,2
  const auto order = layout_order(g, Layout::Snake);
  const State s = singlet_product(Space::full(4), order);
  // Pairs (0,1) and (3,2): |01> on sites 0,1 and site 3 = 0, site 2 = 1.
  CHECK(std::abs(s.amps[from_bitstring("0110")] - cplx{0.5}) < 1e-15);
  CHECK(std::abs(s.amps[from_bitstring("0101")] - cplx{-0.5}) < 1e-15);
}

TEST_CASE("Neel states") {
  CHECK(neel(Space::full(2)).amps[0b01] == cplx{1.0});
  CHECK(neel(Space::full(3)).amps[0b010] == cplx{1.0});
  const State n4 = neel(Space::sector(4, 2));
  CHECK(n4.amplitude(0b0101) == cplx{1.0});
}

TEST_CASE("W-state group boundaries round half to even") {
  CHECK(w_group_boundaries(5, 2) == std::vector<int>{0, 2, 5});
  CHECK(w_group_boundaries(6, 4) == std::vector<int>{0, 2, 3, 4, 6});  // 1.5 -> 2, 4.5 -> 4
  CHECK(w_group_boundaries(8, 3) == std::vector<int>{0, 3, 5, 8});
  CHECK(w_group_boundaries(7, 0) == std::vector<int>{0, 7});
  CHECK_THROWS_AS(w_group_boundaries(4, 5), InvalidArgument);
}

TEST_CASE("W-state products") {
  const State w21 = w_state_product(Space::full(2), 1);
  CHECK(w21.amps[0b01] == cplx{r2});
  CHECK(w21.amps[0b10] == cplx{r2});

  const State w42 = w_state_product(Space::full(4), 2);
  for (Bits b : {0b1010u, 0b1001u, 0b0110u, 0b0101u}) CHECK(std::abs(w42.amps[b] - cplx{0.5}) < 1e-15);
  CHECK(magnetization_expect(w42) == doctest::Approx(0.0));
  CHECK(magnetization_expect(w_state_product(Space::sector(6, 2), 2)) == doctest::Approx(2.0));

  CHECK(w_state_product(Space::full(5), 0).amps[0] == cplx{1.0});
}

TEST_CASE("W-state support has one excitation per group") {
  for (int n = 2; n <= 12; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto bounds = w_group_boundaries(n, k);
      const State s = w_state_product(Space::full(n), k);
      REQUIRE(s.norm() == doctest::Approx(1.0).epsilon(1e-12));
      std::size_t support = 0;
      for (Bits b = 0; b < s.dim(); ++b) {
        if (s.amps[b] == cplx{}) continue;
        ++support;
        REQUIRE(hamming_weight(b) == k);
        for (std::size_t m = 0; m + 1 < bounds.size(); ++m) {
          int ones = 0;
          for (int site = bounds[m]; site < bounds[m + 1]; ++site) ones += site_occupied(b, n, site) ? 1 : 0;
          REQUIRE(ones == 1);
        }
      }
      std::size_t expect = 1;
      for (std::size_t m = 0; m + 1 < bounds.size(); ++m) expect *= static_cast<std::size_t>(bounds[m + 1] - bounds[m]);
      REQUIRE(support == expect);
    }
  }
}

TEST_CASE("overlaps") {
  const State a = neel(Space::full(4));
  CHECK(overlap_sq(a, a) == doctest::Approx(1.0));
  State b(Space::full(4));
  b.amps[0] = 1.0;
  CHECK(overlap_sq(a, b) == 0.0);

  const TermList h = build_terms(ModelParams{.geometry = build_chain(4)});
  const double g = overlap_sq(singlet_product(Space::full(4)), ed_ground(h).ground_state);
  CHECK(g > 0.0);
  CHECK(g <= 1.0 + 1e-12);
  CHECK_THROWS_AS(overlap_sq(a, neel(Space::full(2))), DimensionError);
}

TEST_CASE("prepare_initial_state honours spec and sector flag") {
  const Geometry g = build_chain(6);
  const State s = prepare_initial_state({InitKind::WStateProduct, 2, Layout::Identity}, g, true);
  CHECK(s.space->weight() == 2);
  const State f = prepare_initial_state({InitKind::SingletProduct, 0, Layout::Identity}, g, false);
  CHECK_FALSE(f.space->is_sector());
  CHECK(initial_weight({InitKind::Neel, 0, Layout::Identity}, 6) == 3);
  CHECK_THROWS_AS(prepare_initial_state({InitKind::WStateProduct, 7, Layout::Identity}, g, true), InvalidArgument);
}
