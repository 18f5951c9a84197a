// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "skqd/bits.hpp"
#include "skqd/lattice.hpp"
#include "skqd/space.hpp"

namespace skqd {

/// H = J sum_<ij> (X_i X_j + Y_i Y_j + delta Z_i Z_j) - h_z sum_i Z_i - h_x sum_i X_i
///
/// The spin operators are the Pauli matrices themselves (no factor 1/2).
struct ModelParams {
  double J = 1.0;
  double delta = 1.0;
  double h_z = 0.0;
  double h_x = 0.0;
  Geometry geometry;
};

enum class Axis : std::uint8_t { X, Y, Z };

struct SiteOp {
  int site;
  Axis axis;
  bool operator==(const SiteOp&) const = default;
};

struct PauliTerm {
  double coeff = 0.0;
  std::vector<SiteOp> ops;  // sorted by site, one op per site
  bool operator==(const PauliTerm&) const = default;
};

struct TermList {
  int n_sites = 0;
  std::vector<PauliTerm> terms;
};

TermList build_terms(const ModelParams& p);

/// Sum of |coefficients|; an upper bound on the spectral norm.
double coeff_norm_bound(const TermList& h);

/// True when every term is diagonal or the terms sharing a flip pattern
/// combine into a weight-preserving operator (e.g. XX + YY).
bool conserves_weight(const TermList& h);

void to_json(nlohmann::json& j, const TermList& h);
/// Parses the term array; n_sites is inferred unless given.
TermList terms_from_json(const nlohmann::json& j, int n_sites = -1);

/// Flip pattern shared by a set of Pauli strings, with the combined matrix
/// element tabulated over the local configuration of the support sites.
struct FlipGroup {
  Bits flip = 0;                 // X/Y sites
  std::vector<int> support;      // bit positions (LSB numbering) the element depends on
  std::vector<cplx> element;     // <a | G | a ^ flip> indexed by local config of a
  bool real = true;
  bool conserves_weight = true;

  std::size_t local_index(Bits a) const {
    std::size_t l = 0;
    for (std::size_t s = 0; s < support.size(); ++s) l |= static_cast<std::size_t>((a >> support[s]) & 1U) << s;
    return l;
  }
};

/// Pauli strings grouped by flip pattern. The zero-flip group is the
/// diagonal part.
struct CompiledTerms {
  int n_sites = 0;
  std::vector<PauliTerm> diagonal;  // Z strings
  std::vector<FlipGroup> groups;    // nonzero flip patterns, ascending by (span, flip)
  bool real = true;
  bool conserves_weight = true;

  double diagonal_energy(Bits b) const;
};

CompiledTerms compile_terms(const TermList& h);

/// H bound to a basis: diagonal and neighbor tables are precomputed once and
/// reused across matvecs. Matvec is row-gathered and deterministic.
class SpaceOperator {
 public:
  SpaceOperator(const TermList& h, SpacePtr space);

  const SpacePtr& space() const { return space_; }
  std::size_t dim() const { return space_->dim(); }
  bool is_real() const { return compiled_.real; }
  const CompiledTerms& compiled() const { return compiled_; }
  std::span<const double> diagonal() const { return diag_; }

  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// Requires is_real().
  void apply(std::span<const double> in, std::span<double> out) const;

  /// Index of the state reached from row i through group g, npos if it
  /// leaves the space or the element vanishes.
  std::size_t neighbor(std::size_t g, std::size_t i) const;

 private:
  template <typename T>
  void apply_impl(std::span<const T> in, std::span<T> out) const;

  CompiledTerms compiled_;
  SpacePtr space_;
  std::vector<double> diag_;
  std::vector<std::vector<std::uint32_t>> neighbors_;  // sector only, may be empty
};

/// H|s>, unnormalized. Sector states require a weight-conserving H.
State apply(const TermList& h, const State& s);

/// Term-by-term application on a full-space state (reference path).
State apply_terms_naive(const TermList& h, const State& s);

double expectation(const TermList& h, const State& s);

/// <s| sum_j Z_j |s>.
double magnetization_expect(const State& s);

}  // namespace skqd
