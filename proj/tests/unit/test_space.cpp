// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <random>

#include <doctest.h>

#include "skqd/errors.hpp"
#include "skqd/space.hpp"

using namespace skqd;

TEST_CASE("binomial coefficients") {
  CHECK(binomial(4, 2) == 6);
  CHECK(binomial(30, 3) == 4060);
  CHECK(binomial(24, 12) == 2704156);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(62, 31) == 465428353255261088ULL);
}

TEST_CASE("sector basis is the weight-k strings in numeric order") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto s = Space::sector(n, k);
      std::vector<Bits> expect;
      for (Bits b = 0; b < (Bits{1} << n); ++b) {
        if (hamming_weight(b) == k) expect.push_back(b);
      }
      REQUIRE(s->dim() == expect.size());
      for (std::size_t i = 0; i < expect.size(); ++i) {
        REQUIRE(s->state(i) == expect[i]);
        REQUIRE(s->index(expect[i]) == i);
      }
      // Strings beyond n sites are absent.
      CHECK(s->index(Bits{1} << n) == Space::npos);
    }
  }
}

TEST_CASE("sector rank round trip at 30 sites") {
  const auto s = Space::sector(30, 3);
  CHECK(s->dim() == 4060);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t i = rng() % s->dim();
    CHECK(s->rank(s->state(i)) == i);
  }
  CHECK(s->state(0) == 0b111);
  CHECK(s->state(s->dim() - 1) == (Bits{0b111} << 27));
}

TEST_CASE("space limits") {
  CHECK_THROWS_AS(Space::full(31), ResourceError);
  CHECK_THROWS_AS(Space::sector(4, 5), InvalidArgument);
  CHECK_THROWS_AS(Space::sector(4, -1), InvalidArgument);
  CHECK_THROWS_AS(Space::full(0), InvalidArgument);
}

TEST_CASE("embed, restrict and convert") {
  const auto sec = Space::sector(6, 3);
  State s(sec);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (auto& a : s.amps) a = {g(rng), g(rng)};
  s.normalize();

  const State full = embed(s);
  CHECK(full.dim() == 64);
  CHECK(full.norm() == doctest::Approx(1.0).epsilon(1e-14));
  for (Bits b = 0; b < 64; ++b) {
    if (hamming_weight(b) != 3) CHECK(full.amps[b] == cplx{});
  }
  const State back = restrict_to_sector(full, 3);
  for (std::size_t i = 0; i < s.dim(); ++i) CHECK(back.amps[i] == s.amps[i]);
  CHECK(std::abs(inner(s, full) - cplx{1.0, 0.0}) < 1e-14);
  CHECK(s.amplitude(sec->state(5)) == s.amps[5]);
  CHECK(s.amplitude(0) == cplx{});

  State leaky = full;
  leaky.amps[0] = 0.1;
  CHECK_THROWS_AS(convert(leaky, sec), DimensionError);
  CHECK_THROWS_AS(inner(s, State(Space::sector(5, 3))), DimensionError);
}
