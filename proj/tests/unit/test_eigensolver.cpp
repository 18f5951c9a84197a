// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "skqd/eigensolver.hpp"
#include "skqd/errors.hpp"

using namespace skqd;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = g(rng);
  }
  return a;
}

RealOperator wrap(const Eigen::MatrixXd& a) {
  return [&a](std::span<const double> in, std::span<double> out) {
    Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size())) =
        a * Eigen::Map<const Eigen::VectorXd>(in.data(), static_cast<Eigen::Index>(in.size()));
  };
}

}  // namespace

TEST_CASE("dense path") {
  const Eigen::MatrixXd a = random_symmetric(40, 1);
  const EigenResult r = lowest_eigenpair(wrap(a), 40);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(r.value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-13));
  CHECK(r.second == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-13));
  CHECK(r.residual < 1e-10);
}

TEST_CASE("Lanczos path with thick restart") {
  const int n = 900;
  const Eigen::MatrixXd a = random_symmetric(n, 2);
  EigenOptions o;
  o.dense_max = 0;
  o.max_basis = 30;
  const EigenResult r = lowest_eigenpair(wrap(a), n, o);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  CHECK(r.value == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-11));
  CHECK(r.residual < 1e-10);
  Eigen::Map<const Eigen::VectorXd> v(r.vector.data(), n);
  CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((a * v - r.value * v).norm() < 1e-9);
}

TEST_CASE("tiny and degenerate inputs") {
  const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(1, 1, 1.0);
  const EigenResult r = lowest_eigenpair(wrap(one), 1);
  CHECK(r.value == 1.0);
  CHECK(std::abs(r.vector[0]) == doctest::Approx(1.0));

  // Twofold degenerate ground level.
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(700, 700);
  for (int i = 0; i < 700; ++i) d(i, i) = i < 2 ? -1.0 : static_cast<double>(i);
  EigenOptions o;
  o.dense_max = 0;
  const EigenResult g = lowest_eigenpair(wrap(d), 700, o);
  CHECK(g.value == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(g.residual < 1e-10);
}

TEST_CASE("results are reproducible") {
  const Eigen::MatrixXd a = random_symmetric(600, 7);
  EigenOptions o;
  o.dense_max = 0;
  const EigenResult x = lowest_eigenpair(wrap(a), 600, o);
  const EigenResult y = lowest_eigenpair(wrap(a), 600, o);
  CHECK(x.value == y.value);
  CHECK(x.vector == y.vector);
}
