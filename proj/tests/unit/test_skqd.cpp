// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <doctest.h>

#include "oracle.hpp"
#include "skqd/errors.hpp"
#include "skqd/skqd.hpp"

using namespace skqd;

namespace {

TermList chain(int n, double delta = 1.0, double hz = 0.0) {
  return build_terms(ModelParams{.J = 1.0, .delta = delta, .h_z = hz, .geometry = build_chain(n)});
}

std::vector<Bits> all_strings(int n) {
  std::vector<Bits> b(std::size_t{1} << n);
  std::iota(b.begin(), b.end(), Bits{0});
  return b;
}

}  // namespace

TEST_CASE("projection examples") {
  const TermList h = chain(2);
  const std::vector<Bits> basis{0b01, 0b10};
  CHECK(project_hamiltonian(h, basis).dense() == std::vector<double>{-1, 2, 2, -1});
  const std::vector<Bits> b00{0b00};
  CHECK(project_hamiltonian(h, b00).dense() == std::vector<double>{1});
  const std::vector<Bits> dup{0b01, 0b01};
  CHECK_THROWS_AS(project_hamiltonian(h, dup), InvalidArgument);
  CHECK_THROWS_AS(project_hamiltonian(h, std::vector<Bits>{}), InvalidArgument);
}

TEST_CASE("full-basis projection reproduces the dense matrix") {
  const TermList h = build_terms(ModelParams{.J = 0.8, .delta = 1.6, .h_z = 0.3, .h_x = 0.45, .geometry = build_chain(4)});
  const auto basis = all_strings(4);
  const SubspaceProblem p = project_hamiltonian(h, basis);
  const oracle::Mat d = oracle::dense(h);
  const auto m = p.dense();
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      CHECK(m[static_cast<std::size_t>(i * 16 + j)] == doctest::Approx(d(i, j).real()).epsilon(1e-15));
      CHECK(m[static_cast<std::size_t>(i * 16 + j)] == m[static_cast<std::size_t>(j * 16 + i)]);
    }
  }
}

TEST_CASE("projection works on shuffled bases") {
  const TermList h = chain(6, 0.5, 0.2);
  auto basis = all_strings(6);
  std::mt19937_64 rng(4);
  std::shuffle(basis.begin(), basis.end(), rng);
  basis.resize(40);
  const SubspaceProblem p = project_hamiltonian(h, basis);
  const oracle::Mat d = oracle::dense(h);
  for (std::size_t a = 0; a < 40; ++a) {
    for (std::size_t b = 0; b < 40; ++b) {
      REQUIRE(p.h_eff.at(a, b) == doctest::Approx(d(static_cast<Eigen::Index>(basis[a]),
                                                      static_cast<Eigen::Index>(basis[b])).real()));
    }
  }
}

TEST_CASE("subspace solve") {
  const TermList h = chain(2);
  const std::vector<Bits> b00{0b00};
  const SkqdResult one = solve_subspace(project_hamiltonian(h, b00));
  CHECK(one.energy == 1.0);
  CHECK(std::abs(one.ground_vector[0]) == 1.0);

  const std::vector<Bits> basis{0b01, 0b10};
  const SkqdResult two = solve_subspace(project_hamiltonian(h, basis));
  CHECK(two.energy == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(std::abs(two.ground_vector[0] + two.ground_vector[1]) < 1e-14);

  const TermList h6 = chain(6, 1.3, 0.0);
  const SkqdResult full = solve_subspace(project_hamiltonian(h6, all_strings(6)));
  CHECK(full.energy == doctest::Approx(oracle::ground_energy(h6)).epsilon(1e-12));
  CHECK(full.residual < 1e-10);
}

TEST_CASE("adding basis states never raises the energy") {
  const TermList h = chain(8, 0.9, 0.35);
  auto pool = all_strings(8);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(pool.begin(), pool.end(), rng);
    double prev = INFINITY;
    for (std::size_t L = 8; L <= 256; L *= 2) {
      const std::vector<Bits> basis(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(L));
      const double e = solve_subspace(project_hamiltonian(h, basis)).energy;
      CHECK(e <= prev + 1e-12);
      prev = e;
    }
    CHECK(prev == doctest::Approx(oracle::ground_energy(h)).epsilon(1e-10));
  }
}

TEST_CASE("end-to-end runs") {
  SUBCASE("two-site singlet") {
    SkqdConfig c;
    c.shots = 50;
    for (std::uint64_t seed : {0u, 1u, 99u}) {
      c.seed = seed;
      const SkqdResult r = skqd_run(ModelParams{.geometry = build_chain(2)}, c);
      CHECK(r.energy == doctest::Approx(-3.0).epsilon(1e-14));
      CHECK(r.basis_size == 2);
    }
  }
  SUBCASE("exhaustive sector coverage equals sector ED") {
    SkqdConfig c;
    c.init = {InitKind::WStateProduct, 4, Layout::Identity};
    c.evolution.method = ExactMethod{};
    c.shots = 200000;
    c.filter_k = 4;
    const ModelParams p{.geometry = build_chain(8)};
    const SkqdResult r = skqd_run(p, c);
    CHECK(r.basis_size == 70);
    REQUIRE(r.reference_energy.has_value());
    CHECK(r.energy == doctest::Approx(*r.reference_energy).epsilon(1e-12));
    CHECK(r.shots_discarded == 0);
    CHECK(*r.alpha_L == doctest::Approx(1.0));
    CHECK(*r.gamma0_sq > 0.0);
  }
  SUBCASE("variational bound and determinism") {
    SkqdConfig c;
    c.shots = 300;
    c.seed = 5;
    const ModelParams p{.delta = 0.7, .h_z = 0.2, .geometry = build_chain(10)};
    const SkqdResult a = skqd_run(p, c), b = skqd_run(p, c);
    CHECK(a.energy >= *a.reference_energy - 1e-9);
    CHECK(a.energy == b.energy);
    CHECK(a.ground_vector == b.ground_vector);
    const double err = a.energy - *a.reference_energy;
    CHECK(err <= energy_error_bound(*a.alpha_L, coeff_norm_bound(build_terms(p))) + 1e-9);
    const nlohmann::json j = a;
    CHECK(j.at("basis_size") == a.basis_size);
    CHECK(j.at("config_echo").at("shots") == 300);
  }
  SUBCASE("transverse field runs in the full space") {
    SkqdConfig c;
    c.shots = 2000;
    const ModelParams p{.h_x = 0.5, .geometry = build_chain(6)};
    const SkqdResult r = skqd_run(p, c);
    CHECK(r.energy >= oracle::ground_energy(build_terms(p)) - 1e-9);
    CHECK(r.gamma0_sq.has_value());
  }
  SUBCASE("inconsistent filter") {
    SkqdConfig c;
    c.filter_k = 1;
    CHECK_THROWS_AS(skqd_run(ModelParams{.geometry = build_chain(4)}, c), InvalidArgument);
  }
}

TEST_CASE("bounds") {
  CHECK(energy_error_bound(1.0, 3.0) == 0.0);
  CHECK(energy_error_bound(0.0, 3.0) == doctest::Approx(std::sqrt(8.0) * 3.0));
  const double direct = std::sqrt(8.0) * 3.25 * std::pow(1.0 - std::pow(0.99, 0.5), 0.5);
  CHECK(energy_error_bound(0.99, 3.25) == doctest::Approx(direct).epsilon(1e-15));
  CHECK(energy_error_bound(0.99, 3.25) == doctest::Approx(0.6513).epsilon(1e-3));
  CHECK_THROWS_AS(energy_error_bound(1.1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(energy_error_bound(0.5, -1.0), InvalidArgument);

  BoundParams b{.d = 5, .L = 10, .eta = 0.01, .gamma0_sq = 0.5, .beta_L = 0.1, .eps_tilde = 0.0, .alpha_L = 0.9};
  CHECK(sample_count_bound(b) == doctest::Approx(3453.9).epsilon(1e-5));
  const double full = sample_count_bound(b);
  b.gamma0_sq = 0.25;
  CHECK(sample_count_bound(b) == doctest::Approx(2.0 * full).epsilon(1e-15));
  b.eps_tilde = 0.0025;  // 2 sqrt(eps) = 0.1 = beta
  CHECK_THROWS_AS(sample_count_bound(b), InvalidArgument);
  b.eps_tilde = 0.0;
  b.eta = 1.0;
  CHECK_THROWS_AS(sample_count_bound(b), InvalidArgument);
}
