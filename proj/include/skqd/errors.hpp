// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace skqd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain (sizes, sectors, ranges).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Operands living in incompatible spaces.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Operator does not conserve Hamming weight but a sector was requested.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

/// Requested problem exceeds a configured size or memory cap.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Iterative method did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Post-selection or sampling left nothing to diagonalize.
class EmptySubspaceError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-schema run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace skqd
