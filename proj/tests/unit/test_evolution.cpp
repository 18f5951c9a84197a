// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <doctest.h>

#include "oracle.hpp"
#include "skqd/errors.hpp"
#include "skqd/evolution.hpp"
#include "skqd/states.hpp"

using namespace skqd;

namespace {

State random_state(const SpacePtr& space, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  State s(space);
  for (auto& a : s.amps) a = {g(rng), g(rng)};
  s.normalize();
  return s;
}

double distance(const State& a, const State& b) {
  return (oracle::to_vec(a) - oracle::to_vec(b)).norm();
}

TermList chain(int n, double delta, double hz, double hx = 0.0) {
  return build_terms(ModelParams{.J = 1.0, .delta = delta, .h_z = hz, .h_x = hx, .geometry = build_chain(n)});
}

}  // namespace

TEST_CASE("exact evolution matches the dense exponential") {
  for (const TermList& h : {chain(6, 1.0, 0.0), chain(6, 0.4, 0.8, 0.5), chain(7, 2.0, 0.3, 0.0)}) {
    const State s = random_state(Space::full(h.n_sites), 17);
    for (double t : {0.0, 0.3, 1.7}) {
      const State e = evolve_exact(h, s, t);
      const oracle::Vec ref = oracle::expm_hermitian(oracle::dense(h), t) * oracle::to_vec(s);
      CHECK((oracle::to_vec(e) - ref).norm() < 1e-10);
      CHECK(e.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("eigenstates only pick up a phase") {
  const TermList h = chain(2, 1.0, 0.0);
  const State s = singlet_product(Space::full(2));
  const State e = evolve_exact(h, s, 0.77);
  const cplx phase = std::exp(cplx(0.0, 3.0 * 0.77));
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(e.amps[i] - phase * s.amps[i]) < 1e-12);

  EvolutionConfig cfg;
  cfg.method = ExactMethod{};
  const auto ks = krylov_states(h, s, cfg);
  REQUIRE(ks.size() == 5);
  for (const auto& k : ks) CHECK(overlap_sq(k, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sector evolution embeds into full-space evolution") {
  for (int n = 4; n <= 10; n += 3) {
    const TermList h = chain(n, 0.7, 0.45);
    const int k = n / 2;
    const State s = random_state(Space::sector(n, k), 40 + n);
    const State full = evolve_exact(h, embed(s), 0.6);
    CHECK(distance(evolve_exact(h, s, 0.6), full) < 1e-10);
    State tr = s, tf = embed(s);
    TrotterPlan(h, s.space).evolve(tr, 0.6, 3);
    TrotterPlan(h, tf.space).evolve(tf, 0.6, 3);
    CHECK(distance(tr, tf) < 1e-12);
  }
}

TEST_CASE("diagonal Hamiltonians are Trotterized exactly") {
  const TermList h = build_terms(ModelParams{.J = 0.0, .delta = 1.0, .h_z = 0.8, .geometry = build_chain(5)});
  TermList diag = h;
  std::erase_if(diag.terms, [](const PauliTerm& t) {
    return std::any_of(t.ops.begin(), t.ops.end(), [](const SiteOp& o) { return o.axis != Axis::Z; });
  });
  const State s = random_state(Space::full(5), 3);
  CHECK(distance(trotter_step(diag, s, 0.9, 1), evolve_exact(diag, s, 0.9)) < 1e-12);
}

TEST_CASE("Trotter error falls with more repetitions") {
  const TermList h = chain(4, 1.0, 0.0);
  const State s = random_state(Space::full(4), 5);
  const State ex = evolve_exact(h, s, 0.3);
  double prev = 1.0;
  for (int reps : {1, 3, 9}) {
    const double e = distance(trotter_step(h, s, 0.3, reps), ex);
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("Trotter composition identity") {
  const TermList h = chain(6, 1.3, 0.2, 0.4);
  const State s = random_state(Space::full(6), 8);
  const State two = trotter_step(h, s, 0.3, 2);
  const State halves = trotter_step(h, trotter_step(h, s, 0.15, 1), 0.15, 1);
  CHECK(distance(two, halves) < 1e-12);
}

TEST_CASE("Trotter on rectangles conserves weight and approaches exact") {
  const TermList h = build_terms(ModelParams{.delta = 0.5, .h_z = 0.3, .geometry = build_rectangle(9)});
  const State s = random_state(Space::sector(9, 4), 12);
  State t = embed(s);
  TrotterPlan plan(h, t.space);
  CHECK(plan.num_layers() >= 4);
  plan.evolve(t, 0.3, 40);
  for (Bits b = 0; b < t.dim(); ++b) {
    if (hamming_weight(b) != 4) REQUIRE(std::abs(t.amps[b]) <= 1e-12);
  }
  CHECK(distance(t, evolve_exact(h, embed(s), 0.3)) < 1e-3);
  CHECK(t.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Krylov states compose sequentially") {
  const TermList h = chain(6, 1.0, 0.1);
  const State s = random_state(Space::sector(6, 3), 2);
  EvolutionConfig cfg;
  cfg.d = 4;
  cfg.dt = 0.25;
  const auto ks = krylov_states(h, s, cfg);
  REQUIRE(ks.size() == 4);
  CHECK(ks[0].amps == s.amps);
  State manual = s;
  TrotterPlan plan(h, s.space);
  for (int k = 1; k < 4; ++k) {
    plan.evolve(manual, 0.25, 3);
    CHECK(distance(manual, ks[static_cast<std::size_t>(k)]) == 0.0);
  }
  cfg.d = 1;
  CHECK(krylov_states(h, s, cfg).size() == 1);
}

TEST_CASE("evolution config validation") {
  EvolutionConfig c;
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.dt = 0.3;
  c.d = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.d = 5;
  c.method = Trotter2Method{0};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.method = ExactMethod{1e-3};
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.method = ExactMethod{1e-8};
  CHECK_NOTHROW(c.validate());
}
