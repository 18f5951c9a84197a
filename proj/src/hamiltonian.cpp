// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

constexpr std::size_t kMaxNeighborEntries = std::size_t{1} << 25;
constexpr std::uint32_t kNoNeighbor = 0xFFFFFFFFU;
constexpr int kMaxSupport = 16;

struct Masks {
  Bits flip = 0;
  Bits phase = 0;  // Z or Y sites
  int n_y = 0;
};

Masks masks_of(const PauliTerm& t, int n) {
  Masks m;
  for (const auto& op : t.ops) {
    const Bits b = site_bit(n, op.site);
    if (op.axis != Axis::Z) m.flip |= b;
    if (op.axis != Axis::X) m.phase |= b;
    if (op.axis == Axis::Y) ++m.n_y;
  }
  return m;
}

cplx i_power(int p) {
  switch (p & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

char axis_char(Axis a) { return a == Axis::X ? 'X' : (a == Axis::Y ? 'Y' : 'Z'); }

PauliTerm make_term(double c, std::initializer_list<SiteOp> ops) {
  PauliTerm t;
  t.coeff = c;
  t.ops = ops;
  std::sort(t.ops.begin(), t.ops.end(), [](const SiteOp& a, const SiteOp& b) { return a.site < b.site; });
  return t;
}

int span_of(Bits flip) {
  return 63 - std::countl_zero(flip) - std::countr_zero(flip);
}

}  // namespace

TermList build_terms(const ModelParams& p) {
  const Geometry& g = p.geometry;
  if (!std::isfinite(p.J) || !std::isfinite(p.delta) || !std::isfinite(p.h_z) || !std::isfinite(p.h_x)) {
    throw InvalidArgument("model parameters must be finite");
  }
  if (g.n_sites > kMaxSites) {
    throw InvalidArgument("models are limited to " + std::to_string(kMaxSites) + " sites");
  }
  TermList h;
  h.n_sites = g.n_sites;
  for (const auto& [i, j] : g.edges) {
    h.terms.push_back(make_term(p.J, {{i, Axis::X}, {j, Axis::X}}));
    h.terms.push_back(make_term(p.J, {{i, Axis::Y}, {j, Axis::Y}}));
    h.terms.push_back(make_term(p.J * p.delta, {{i, Axis::Z}, {j, Axis::Z}}));
  }
  for (int i = 0; i < g.n_sites; ++i) {
    if (p.h_z != 0.0) h.terms.push_back(make_term(-p.h_z, {{i, Axis::Z}}));
  }
  for (int i = 0; i < g.n_sites; ++i) {
    if (p.h_x != 0.0) h.terms.push_back(make_term(-p.h_x, {{i, Axis::X}}));
  }
  return h;
}

double coeff_norm_bound(const TermList& h) {
  double s = 0.0;
  for (const auto& t : h.terms) s += std::abs(t.coeff);
  return s;
}

bool conserves_weight(const TermList& h) { return compile_terms(h).conserves_weight; }

void to_json(nlohmann::json& j, const TermList& h) {
  j = nlohmann::json::array();
  for (const auto& t : h.terms) {
    nlohmann::json paulis = nlohmann::json::object();
    for (const auto& op : t.ops) paulis[std::to_string(op.site)] = std::string(1, axis_char(op.axis));
    j.push_back({{"coeff", t.coeff}, {"paulis", paulis}});
  }
}

TermList terms_from_json(const nlohmann::json& j, int n_sites) {
  if (!j.is_array()) throw InvalidArgument("term list must be a JSON array");
  TermList h;
  int max_site = -1;
  for (const auto& e : j) {
    PauliTerm t;
    t.coeff = e.at("coeff").get<double>();
    for (const auto& [key, val] : e.at("paulis").items()) {
      const int site = std::stoi(key);
      const auto a = val.get<std::string>();
      if (site < 0) throw InvalidArgument("negative site index in term list");
      Axis axis;
      if (a == "X") axis = Axis::X;
      else if (a == "Y") axis = Axis::Y;
      else if (a == "Z") axis = Axis::Z;
      else throw InvalidArgument("unknown Pauli axis '" + a + "'");
      t.ops.push_back({site, axis});
      max_site = std::max(max_site, site);
    }
    std::sort(t.ops.begin(), t.ops.end(), [](const SiteOp& a, const SiteOp& b) { return a.site < b.site; });
    h.terms.push_back(std::move(t));
  }
  h.n_sites = n_sites >= 0 ? n_sites : max_site + 1;
  if (max_site >= h.n_sites) throw InvalidArgument("term touches a site beyond n_sites");
  return h;
}

double CompiledTerms::diagonal_energy(Bits b) const {
  double e = 0.0;
  for (const auto& t : diagonal) {
    Bits z = 0;
    for (const auto& op : t.ops) z |= site_bit(n_sites, op.site);
    e += (hamming_weight(b & z) & 1) ? -t.coeff : t.coeff;
  }
  return e;
}

CompiledTerms compile_terms(const TermList& h) {
  const int n = h.n_sites;
  if (n < 1 || n > kMaxSites) throw InvalidArgument("term list site count out of range");
  CompiledTerms c;
  c.n_sites = n;
  std::map<Bits, std::vector<const PauliTerm*>> by_flip;
  for (const auto& t : h.terms) {
    for (const auto& op : t.ops) {
      if (op.site < 0 || op.site >= n) throw InvalidArgument("term site index out of range");
    }
    const Masks m = masks_of(t, n);
    if (m.flip == 0) {
      c.diagonal.push_back(t);
    } else {
      by_flip[m.flip].push_back(&t);
    }
  }
  for (const auto& [flip, terms] : by_flip) {
    FlipGroup g;
    g.flip = flip;
    Bits support = flip;
    for (const auto* t : terms) support |= masks_of(*t, n).phase;
    for (Bits s = support; s != 0; s &= s - 1) g.support.push_back(std::countr_zero(s));
    if (g.support.size() > static_cast<std::size_t>(kMaxSupport)) {
      throw InvalidArgument("Pauli group acts on more than 16 sites");
    }
    const std::size_t n_local = std::size_t{1} << g.support.size();
    g.element.assign(n_local, cplx{});
    for (std::size_t l = 0; l < n_local; ++l) {
      Bits row = 0;
      for (std::size_t s = 0; s < g.support.size(); ++s) {
        if ((l >> s) & 1U) row |= Bits{1} << g.support[s];
      }
      const Bits col = row ^ flip;
      cplx e{};
      for (const auto* t : terms) {
        const Masks m = masks_of(*t, n);
        const double sign = (hamming_weight(col & m.phase) & 1) ? -1.0 : 1.0;
        e += t->coeff * sign * i_power(m.n_y);
      }
      g.element[l] = e;
      if (e.imag() != 0.0) g.real = false;
      if (e != cplx{} && hamming_weight(row & flip) * 2 != hamming_weight(flip)) {
        g.conserves_weight = false;
      }
    }
    c.real = c.real && g.real;
    c.conserves_weight = c.conserves_weight && g.conserves_weight;
    c.groups.push_back(std::move(g));
  }
  std::stable_sort(c.groups.begin(), c.groups.end(), [](const FlipGroup& a, const FlipGroup& b) {
    const int sa = span_of(a.flip), sb = span_of(b.flip);
    if (sa != sb) return sa < sb;
    return a.flip > b.flip;  // leftmost sites first
  });
  return c;
}

SpaceOperator::SpaceOperator(const TermList& h, SpacePtr space)
    : compiled_(compile_terms(h)), space_(std::move(space)) {
  if (compiled_.n_sites != space_->n_sites()) {
    throw DimensionError("Hamiltonian has " + std::to_string(compiled_.n_sites) +
                         " sites, state space has " + std::to_string(space_->n_sites()));
  }
  if (space_->is_sector() && !compiled_.conserves_weight) {
    throw SymmetryError("Hamiltonian does not conserve Hamming weight; sector application undefined");
  }
  const std::size_t d = space_->dim();
  diag_.resize(d);
#pragma omp parallel for schedule(static) if (d > 65536)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(d); ++i) {
    diag_[static_cast<std::size_t>(i)] = compiled_.diagonal_energy(space_->state(static_cast<std::size_t>(i)));
  }
  if (space_->is_sector() && d * compiled_.groups.size() <= kMaxNeighborEntries && d < kNoNeighbor) {
    neighbors_.resize(compiled_.groups.size());
    for (std::size_t g = 0; g < compiled_.groups.size(); ++g) {
      auto& tab = neighbors_[g];
      tab.resize(d);
      const FlipGroup& grp = compiled_.groups[g];
#pragma omp parallel for schedule(static) if (d > 65536)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(d); ++i) {
        const Bits a = space_->state(static_cast<std::size_t>(i));
        std::uint32_t v = kNoNeighbor;
        if (grp.element[grp.local_index(a)] != cplx{}) {
          const std::size_t j = space_->index(a ^ grp.flip);
          if (j != Space::npos) v = static_cast<std::uint32_t>(j);
        }
        tab[static_cast<std::size_t>(i)] = v;
      }
    }
  }
}

std::size_t SpaceOperator::neighbor(std::size_t g, std::size_t i) const {
  const FlipGroup& grp = compiled_.groups[g];
  if (!space_->is_sector()) return i ^ static_cast<std::size_t>(grp.flip);
  if (!neighbors_.empty()) {
    const std::uint32_t v = neighbors_[g][i];
    return v == kNoNeighbor ? Space::npos : v;
  }
  const Bits a = space_->state(i);
  if (grp.element[grp.local_index(a)] == cplx{}) return Space::npos;
  return space_->index(a ^ grp.flip);
}

template <typename T>
void SpaceOperator::apply_impl(std::span<const T> in, std::span<T> out) const {
  const std::size_t d = dim();
  if (in.size() != d || out.size() != d) throw DimensionError("operand length does not match space");
  const auto& groups = compiled_.groups;
  const bool sector = space_->is_sector();
  const bool tabled = !neighbors_.empty();
#pragma omp parallel for schedule(static) if (d > 16384)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(d); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Bits a = space_->state(i);
    T acc = diag_[i] * in[i];
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const FlipGroup& grp = groups[g];
      std::size_t j;
      if (!sector) {
        j = i ^ static_cast<std::size_t>(grp.flip);
      } else if (tabled) {
        const std::uint32_t v = neighbors_[g][i];
        if (v == kNoNeighbor) continue;
        j = v;
      } else {
        j = space_->index(a ^ grp.flip);
        if (j == Space::npos) continue;
      }
      const cplx e = grp.element[grp.local_index(a)];
      if constexpr (std::is_same_v<T, double>) {
        acc += e.real() * in[j];
      } else {
        if (grp.real) {
          acc += e.real() * in[j];
        } else {
          acc += e * in[j];
        }
      }
    }
    out[i] = acc;
  }
}

void SpaceOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  apply_impl<cplx>(in, out);
}

void SpaceOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (!is_real()) throw InvalidArgument("real matvec requested for a complex Hamiltonian");
  apply_impl<double>(in, out);
}

State apply(const TermList& h, const State& s) {
  SpaceOperator op(h, s.space);
  State out(s.space);
  op.apply(std::span<const cplx>(s.amps), std::span<cplx>(out.amps));
  return out;
}

State apply_terms_naive(const TermList& h, const State& s) {
  if (s.space->is_sector()) throw InvalidArgument("naive application needs a full-space state");
  if (h.n_sites != s.n_sites()) throw DimensionError("site count mismatch");
  State out(s.space);
  const int n = h.n_sites;
  for (const auto& t : h.terms) {
    const Masks m = masks_of(t, n);
    const cplx ph = i_power(m.n_y);
    for (std::size_t b = 0; b < s.dim(); ++b) {
      const double sign = (hamming_weight(static_cast<Bits>(b) & m.phase) & 1) ? -1.0 : 1.0;
      out.amps[b ^ static_cast<std::size_t>(m.flip)] += t.coeff * sign * ph * s.amps[b];
    }
  }
  return out;
}

double expectation(const TermList& h, const State& s) {
  const State hs = apply(h, s);
  return inner(s, hs).real();
}

double magnetization_expect(const State& s) {
  const int n = s.n_sites();
  double m = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    m += std::norm(s.amps[i]) * (n - 2 * hamming_weight(s.space->state(i)));
  }
  return m;
}

}  // namespace skqd
