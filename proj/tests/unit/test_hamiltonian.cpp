// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <doctest.h>

#include "oracle.hpp"
#include "skqd/errors.hpp"
#include "skqd/hamiltonian.hpp"

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

ModelParams model(int n, double delta, double hz, double hx = 0.0, bool rect = false) {
  return ModelParams{.J = 1.0, .delta = delta, .h_z = hz, .h_x = hx,
                     .geometry = rect ? build_rectangle(n) : build_chain(n)};
}

double max_diff(const State& a, const oracle::Vec& v) {
  return (oracle::to_vec(a) - v).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("term expansion") {
  const TermList h = build_terms(model(2, 1.0, 0.0));
  REQUIRE(h.terms.size() == 3);
  CHECK(h.terms[0] == PauliTerm{1.0, {{0, Axis::X}, {1, Axis::X}}});
  CHECK(h.terms[1] == PauliTerm{1.0, {{0, Axis::Y}, {1, Axis::Y}}});
  CHECK(h.terms[2] == PauliTerm{1.0, {{0, Axis::Z}, {1, Axis::Z}}});
  CHECK(coeff_norm_bound(h) == 3.0);

  const TermList f = build_terms(model(2, 0.25, 0.5));
  REQUIRE(f.terms.size() == 5);
  CHECK(f.terms[2].coeff == 0.25);
  CHECK(f.terms[3] == PauliTerm{-0.5, {{0, Axis::Z}}});
  CHECK(f.terms[4] == PauliTerm{-0.5, {{1, Axis::Z}}});
  CHECK(coeff_norm_bound(f) == 3.25);

  CHECK(build_terms(model(24, 1.0, 0.0, 0.0, true)).terms.size() == 114);
  CHECK(coeff_norm_bound(TermList{3, {}}) == 0.0);
  CHECK(conserves_weight(f));
  CHECK_FALSE(conserves_weight(build_terms(model(2, 1.0, 0.0, 0.3))));
}

TEST_CASE("single-site Z action") {
  const TermList z{1, {PauliTerm{1.0, {{0, Axis::Z}}}}};
  State s0(Space::full(1)), s1(Space::full(1));
  s0.amps[0] = 1.0;
  s1.amps[1] = 1.0;
  CHECK(apply(z, s0).amps[0] == cplx{1.0});
  CHECK(apply(z, s1).amps[1] == cplx{-1.0});
}

TEST_CASE("singlet is the -3 eigenvector of the two-site XXX bond") {
  State s(Space::full(2));
  s.amps[0b01] = 1.0 / std::sqrt(2.0);
  s.amps[0b10] = -1.0 / std::sqrt(2.0);
  const State hs = apply(build_terms(model(2, 1.0, 0.0)), s);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(hs.amps[i] + 3.0 * s.amps[i]) < 1e-15);
}

TEST_CASE("matrix-free apply matches dense Kronecker construction") {
  for (const auto& p : {model(8, 1.0, 0.0), model(8, 0.3, 0.7, 0.4), model(6, -1.5, 2.0, 1.1, true),
                        model(9, 2.5, -0.3, 0.0)}) {
    const TermList h = build_terms(p);
    const oracle::Mat H = oracle::dense(h);
    const State x = random_state(Space::full(p.geometry.n_sites), 3);
    const oracle::Vec ref = H * oracle::to_vec(x);
    CHECK(max_diff(apply(h, x), ref) < 1e-12);
    CHECK(max_diff(apply_terms_naive(h, x), ref) < 1e-12);
  }
}

TEST_CASE("Y strings follow Y = iXZ") {
  // Mixed Y terms that do not pair into hops exercise complex phases.
  const TermList h{3,
                   {PauliTerm{0.7, {{0, Axis::Y}}},
                    PauliTerm{-0.4, {{0, Axis::X}, {2, Axis::Y}}},
                    PauliTerm{1.3, {{0, Axis::Y}, {1, Axis::Z}, {2, Axis::Y}}}}};
  const State x = random_state(Space::full(3), 9);
  CHECK(max_diff(apply(h, x), oracle::dense(h) * oracle::to_vec(x)) < 1e-14);
}

TEST_CASE("Hermiticity on random states") {
  for (int n = 2; n <= 10; n += 2) {
    const TermList h = build_terms(model(n, 0.6, 0.9, 0.2));
    const auto sp = Space::full(n);
    const State x = random_state(sp, 100 + n), y = random_state(sp, 200 + n);
    const cplx a = inner(x, apply(h, y));
    const cplx b = std::conj(inner(y, apply(h, x)));
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("U(1) conservation and sector apply") {
  for (int n = 2; n <= 10; ++n) {
    const TermList h = build_terms(model(n, 1.7, 0.4));
    for (int k = 0; k <= n; ++k) {
      const State s = random_state(Space::sector(n, k), static_cast<std::uint64_t>(n * 31 + k));
      const State full = apply(h, embed(s));
      for (Bits b = 0; b < full.dim(); ++b) {
        if (hamming_weight(b) != k) REQUIRE(full.amps[b] == cplx{});
      }
      const State sec = apply(h, s);
      const State back = restrict_to_sector(full, k);
      double d = 0.0;
      for (std::size_t i = 0; i < sec.dim(); ++i) d = std::max(d, std::abs(sec.amps[i] - back.amps[i]));
      REQUIRE(d < 1e-12);
    }
  }
}

TEST_CASE("two-site sector matrix") {
  const TermList h = build_terms(model(2, 1.0, 0.0));
  SpaceOperator op(h, Space::sector(2, 1));
  std::vector<double> e0{1.0, 0.0}, e1{0.0, 1.0}, c0(2), c1(2);
  op.apply(std::span<const double>(e0), std::span<double>(c0));
  op.apply(std::span<const double>(e1), std::span<double>(c1));
  CHECK(c0 == std::vector<double>{-1.0, 2.0});
  CHECK(c1 == std::vector<double>{2.0, -1.0});
}

TEST_CASE("sector operator rejects weight-changing terms") {
  CHECK_THROWS_AS(SpaceOperator(build_terms(model(4, 1.0, 0.0, 0.5)), Space::sector(4, 2)), SymmetryError);
  State s(Space::full(3));
  CHECK_THROWS_AS(apply(build_terms(model(4, 1.0, 0.0)), s), DimensionError);
}

TEST_CASE("norm bound dominates the spectrum") {
  for (int n = 2; n <= 8; n += 3) {
    const TermList h = build_terms(model(n, -0.8, 1.2, 0.7));
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::dense(h));
    CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= coeff_norm_bound(h) + 1e-12);
  }
}

TEST_CASE("magnetization") {
  State up(Space::full(5));
  up.amps[0] = 1.0;
  CHECK(magnetization_expect(up) == 5.0);
  const State s = random_state(Space::sector(7, 2), 4);
  CHECK(magnetization_expect(s) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("term list json round trip") {
  const TermList h = build_terms(model(3, 0.5, 0.25, 0.125));
  const nlohmann::json j = h;
  CHECK(j[0].at("paulis").at("0") == "X");
  const TermList back = terms_from_json(j, 3);
  CHECK(back.terms == h.terms);
  CHECK_THROWS(terms_from_json(nlohmann::json::parse(R"([{"coeff":1,"paulis":{"0":"Q"}}])"), 3));
}
