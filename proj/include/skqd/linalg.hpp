// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>

namespace skqd {

using cplx = std::complex<double>;

// Reductions are accumulated over fixed-size chunks and the partial sums are
// combined serially, so results do not depend on the number of threads.

double dot(std::span<const double> x, std::span<const double> y);
cplx dot(std::span<const cplx> x, std::span<const cplx> y);  // conj(x) . y
double norm(std::span<const double> x);
double norm(std::span<const cplx> x);

void axpy(double a, std::span<const double> x, std::span<double> y);
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void scale(double a, std::span<double> x);
void scale(cplx a, std::span<cplx> x);

/// Sets the worker count used by data-parallel kernels (<= 0: hardware).
void set_num_threads(int n);
int num_threads();

}  // namespace skqd
