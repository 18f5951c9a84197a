// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "skqd/errors.hpp"
#include "skqd/linalg.hpp"
#include "skqd/rng.hpp"

namespace skqd {
namespace {

double explicit_residual(const RealOperator& op, std::span<const double> x, double theta,
                         std::vector<double>& scratch) {
  scratch.assign(x.size(), 0.0);
  op(x, scratch);
  axpy(-theta, x, scratch);
  return norm(std::span<const double>(scratch));
}

EigenResult dense_lowest(const RealOperator& op, std::size_t dim) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  std::vector<double> e(dim, 0.0), col(dim, 0.0);
  for (std::size_t j = 0; j < dim; ++j) {
    e[j] = 1.0;
    op(e, col);
    e[j] = 0.0;
    for (std::size_t i = 0; i < dim; ++i) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  const Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
  EigenResult r;
  r.value = es.eigenvalues()(0);
  r.vector.assign(es.eigenvectors().col(0).data(), es.eigenvectors().col(0).data() + dim);
  if (dim > 1) r.second = es.eigenvalues()(1);
  r.matvecs = dim;
  std::vector<double> scratch;
  r.residual = explicit_residual(op, r.vector, r.value, scratch);
  ++r.matvecs;
  return r;
}

}  // namespace

EigenResult lowest_eigenpair(const RealOperator& op, std::size_t dim, const EigenOptions& opts) {
  if (dim == 0) throw InvalidArgument("eigenproblem of dimension zero");
  if (dim <= opts.dense_max) return dense_lowest(op, dim);

  const std::size_t by_memory = opts.memory_budget / (sizeof(double) * dim);
  const std::size_t m = std::min({dim, opts.max_basis, by_memory});
  if (m < 8) {
    throw ResourceError("Lanczos basis does not fit the memory budget for dimension " + std::to_string(dim));
  }
  const std::size_t keep = std::clamp<std::size_t>(m / 2, 2, 24);

  std::vector<double> basis(m * dim);
  auto vec = [&](std::size_t i) { return std::span<double>(basis.data() + i * dim, dim); };
  auto cvec = [&](std::size_t i) { return std::span<const double>(basis.data() + i * dim, dim); };

  {
    CounterRng rng(opts.seed);
    auto v0 = vec(0);
    for (double& x : v0) x = 2.0 * rng.uniform() - 1.0;
    scale(1.0 / norm(std::span<const double>(v0)), v0);
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  std::vector<double> w(dim), h(m), scratch;
  std::size_t start = 0;  // first column whose projection is unknown
  std::size_t matvecs = 0;
  EigenResult result;

  while (true) {
    std::size_t size = start;
    double beta = 0.0;
    bool converged = false;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;

    for (std::size_t j = start; j < m; ++j) {
      op(cvec(j), w);
      ++matvecs;
      std::fill(h.begin(), h.end(), 0.0);
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= j; ++i) {
          const double c = dot(cvec(i), w);
          h[i] += c;
          axpy(-c, cvec(i), w);
        }
      }
      for (std::size_t i = 0; i <= j; ++i) {
        t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = h[i];
        t(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = h[i];
      }
      size = j + 1;
      beta = norm(std::span<const double>(w));

      const auto sz = static_cast<Eigen::Index>(size);
      es.compute(t.topLeftCorner(sz, sz));
      const double theta = es.eigenvalues()(0);
      const double est = beta * std::abs(es.eigenvectors()(sz - 1, 0));
      const double scale_ref = std::max(1.0, std::abs(theta));
      if (est < opts.tol * 0.1 || beta < 1e-13 * scale_ref || size == dim) {
        converged = true;
        break;
      }
      if (j + 1 < m) {
        auto next = vec(j + 1);
        for (std::size_t k = 0; k < dim; ++k) next[k] = w[k] / beta;
      }
      if (matvecs >= opts.max_matvecs) break;
    }

    const auto sz = static_cast<Eigen::Index>(size);
    const Eigen::MatrixXd y = es.eigenvectors();
    const Eigen::VectorXd theta = es.eigenvalues();

    if (converged || matvecs >= opts.max_matvecs) {
      std::vector<double> x(dim, 0.0);
      for (Eigen::Index l = 0; l < sz; ++l) axpy(y(l, 0), cvec(static_cast<std::size_t>(l)), x);
      scale(1.0 / norm(std::span<const double>(x)), std::span<double>(x));
      result.value = theta(0);
      result.second = sz > 1 ? theta(1) : std::numeric_limits<double>::quiet_NaN();
      result.residual = explicit_residual(op, x, theta(0), scratch);
      ++matvecs;
      result.vector = std::move(x);
      result.matvecs = matvecs;
      if (result.residual <= opts.tol) return result;
      if (matvecs >= opts.max_matvecs) {
        throw ConvergenceError("Lanczos did not converge within " + std::to_string(opts.max_matvecs) +
                               " matvecs", result.residual);
      }
      // Lost accuracy in the estimate: restart from the current Ritz vector.
      std::copy(result.vector.begin(), result.vector.end(), vec(0).begin());
      t.setZero();
      start = 0;
      continue;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    const std::size_t k = std::min<std::size_t>(keep, size - 1);
    std::vector<double> ritz(k * dim, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
      std::span<double> out(ritz.data() + r * dim, dim);
      for (Eigen::Index l = 0; l < sz; ++l) {
        axpy(y(l, static_cast<Eigen::Index>(r)), cvec(static_cast<std::size_t>(l)), out);
      }
    }
    std::copy(ritz.begin(), ritz.end(), basis.begin());
    auto resid = vec(k);
    for (std::size_t i = 0; i < dim; ++i) resid[i] = w[i] / beta;
    t.setZero();
    for (std::size_t r = 0; r < k; ++r) {
      t(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = theta(static_cast<Eigen::Index>(r));
    }
    start = k;
  }
}

}  // namespace skqd
