// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skqd {
namespace {

constexpr std::size_t kChunk = 4096;

template <typename T, typename F>
T chunked_sum(std::size_t n, F&& partial) {
  const std::size_t n_chunks = (n + kChunk - 1) / kChunk;
  if (n_chunks <= 1) return partial(0, n);
  std::vector<T> parts(n_chunks);
#pragma omp parallel for schedule(static) if (n_chunks > 8)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(n_chunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    parts[static_cast<std::size_t>(c)] = partial(lo, hi);
  }
  T total{};
  for (const T& p : parts) total += p;
  return total;
}

}  // namespace

double dot(std::span<const double> x, std::span<const double> y) {
  return chunked_sum<double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
  });
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return chunked_sum<cplx>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = x[i].real(), b = x[i].imag();
      const double c = y[i].real(), d = y[i].imag();
      re += a * c + b * d;
      im += a * d - b * c;
    }
    return cplx(re, im);
  });
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double norm(std::span<const cplx> x) {
  return std::sqrt(chunked_sum<double>(x.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += std::norm(x[i]);
    return s;
  }));
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static) if (x.size() > 65536)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
    y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
  }
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
#pragma omp parallel for schedule(static) if (x.size() > 65536)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
    y[static_cast<std::size_t>(i)] += a * x[static_cast<std::size_t>(i)];
  }
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

void scale(cplx a, std::span<cplx> x) {
  for (cplx& v : x) v *= a;
}

void set_num_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n > 0 ? n : omp_get_num_procs());
#else
  (void)n;
#endif
}

int num_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace skqd
