// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/skqd.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "skqd/errors.hpp"
#include "skqd/rng.hpp"

namespace skqd {

void CsrMatrix::multiply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != rows || out.size() != rows) throw DimensionError("CSR operand length mismatch");
#pragma omp parallel for schedule(static) if (rows > 16384)
  for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(rows); ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    double acc = 0.0;
    for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) acc += val[p] * in[col[p]];
    out[r] = acc;
  }
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
    if (col[p] == c) return val[p];
  }
  return 0.0;
}

std::vector<double> SubspaceProblem::dense() const {
  const std::size_t L = size();
  std::vector<double> m(L * L, 0.0);
  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t p = h_eff.row_ptr[r]; p < h_eff.row_ptr[r + 1]; ++p) m[r * L + h_eff.col[p]] = h_eff.val[p];
  }
  return m;
}

SubspaceProblem project_hamiltonian(const TermList& h, std::span<const Bits> basis) {
  if (basis.empty()) throw InvalidArgument("projection onto an empty basis");
  if (basis.size() > 0xFFFFFFF0ULL) throw ResourceError("basis too large");
  const CompiledTerms ct = compile_terms(h);
  if (!ct.real) throw InvalidArgument("complex matrix elements are not supported in the subspace solver");

  std::unordered_map<Bits, std::uint32_t> index;
  index.reserve(basis.size() * 2);
  const Bits mask = h.n_sites >= 64 ? ~Bits{0} : (Bits{1} << h.n_sites) - 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if ((basis[i] & ~mask) != 0) throw InvalidArgument("basis bitstring " + std::to_string(i) + " exceeds n_sites");
    if (!index.emplace(basis[i], static_cast<std::uint32_t>(i)).second) {
      throw InvalidArgument("duplicate basis entry " + to_bitstring(basis[i], h.n_sites));
    }
  }

  SubspaceProblem p;
  p.n_sites = h.n_sites;
  p.basis.assign(basis.begin(), basis.end());
  const std::size_t L = basis.size();
  CsrMatrix& m = p.h_eff;
  m.rows = L;
  m.row_ptr.assign(L + 1, 0);

  // Two passes over rows: count, then fill. Rows are independent.
  auto visit = [&](std::size_t i, auto&& emit) {
    const Bits a = basis[i];
    const double diag = ct.diagonal_energy(a);
    if (diag != 0.0) emit(static_cast<std::uint32_t>(i), diag);
    for (const FlipGroup& g : ct.groups) {
      const double e = g.element[g.local_index(a)].real();
      if (e == 0.0) continue;
      const auto it = index.find(a ^ g.flip);
      if (it != index.end()) emit(it->second, e);
    }
  };
#pragma omp parallel for schedule(dynamic, 1024) if (L > 16384)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(L); ++ii) {
    std::size_t c = 0;
    visit(static_cast<std::size_t>(ii), [&c](std::uint32_t, double) { ++c; });
    m.row_ptr[static_cast<std::size_t>(ii) + 1] = c;
  }
  for (std::size_t i = 0; i < L; ++i) m.row_ptr[i + 1] += m.row_ptr[i];
  m.col.resize(m.row_ptr[L]);
  m.val.resize(m.row_ptr[L]);
#pragma omp parallel for schedule(dynamic, 1024) if (L > 16384)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(L); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::size_t p = m.row_ptr[i];
    visit(i, [&](std::uint32_t c, double v) {
      m.col[p] = c;
      m.val[p] = v;
      ++p;
    });
    // Sort the row by column for a canonical layout.
    const std::size_t b = m.row_ptr[i], e = m.row_ptr[i + 1];
    for (std::size_t x = b + 1; x < e; ++x) {
      for (std::size_t y = x; y > b && m.col[y - 1] > m.col[y]; --y) {
        std::swap(m.col[y - 1], m.col[y]);
        std::swap(m.val[y - 1], m.val[y]);
      }
    }
  }
  return p;
}

SkqdResult solve_subspace(const SubspaceProblem& p, const EigenOptions& opts) {
  if (p.size() == 0) throw EmptySubspaceError("empty subspace");
  const RealOperator op = [&p](std::span<const double> in, std::span<double> out) { p.h_eff.multiply(in, out); };
  EigenResult r = lowest_eigenpair(op, p.size(), opts);
  SkqdResult out;
  out.energy = r.value;
  out.residual = r.residual;
  out.ground_vector = std::move(r.vector);
  out.basis = p.basis;
  out.basis_size = p.size();
  return out;
}

double captured_weight(const State& ground, std::span<const Bits> basis) {
  double w = 0.0;
  for (Bits b : basis) w += std::norm(ground.amplitude(b));
  const double nrm = ground.norm();
  return std::clamp(w / (nrm * nrm), 0.0, 1.0);  // rounding can push the ratio past 1
}

namespace {

const char* init_name(InitKind k) {
  switch (k) {
    case InitKind::SingletProduct: return "singlet";
    case InitKind::Neel: return "neel";
    case InitKind::WStateProduct: return "w";
  }
  return "?";
}

}  // namespace

nlohmann::json echo(const SkqdConfig& cfg) {
  nlohmann::json j;
  j["init"] = {{"kind", init_name(cfg.init.kind)},
               {"k", cfg.init.k},
               {"layout", cfg.init.layout == Layout::Snake ? "snake" : "identity"}};
  nlohmann::json evo = {{"dt", cfg.evolution.dt}, {"d", cfg.evolution.d}};
  if (const auto* t = std::get_if<Trotter2Method>(&cfg.evolution.method)) {
    evo["method"] = "trotter2";
    evo["reps"] = t->reps;
  } else {
    evo["method"] = "exact";
    evo["tol"] = std::get<ExactMethod>(cfg.evolution.method).tol;
  }
  j["evolution"] = evo;
  j["shots"] = cfg.shots;
  j["noise"] = cfg.noise ? nlohmann::json{{"readout_flip_prob", cfg.noise->readout_flip_prob}} : nlohmann::json();
  j["filter_k"] = cfg.filter_k ? nlohmann::json(*cfg.filter_k) : nlohmann::json();
  j["seed"] = cfg.seed;
  return j;
}

SkqdResult skqd_run(const ModelParams& params, const SkqdConfig& cfg) {
  cfg.evolution.validate();
  if (cfg.shots == 0) throw InvalidArgument("shots must be positive");
  const TermList h = build_terms(params);
  const int n = h.n_sites;
  const bool use_sector = conserves_weight(h);
  const int w0 = initial_weight(cfg.init, n);
  if (cfg.filter_k) {
    if (*cfg.filter_k < 0 || *cfg.filter_k > n) throw InvalidArgument("filter_k out of range");
    if (*cfg.filter_k != w0) {
      throw InvalidArgument("initial state has weight " + std::to_string(w0) + " but filter_k is " +
                            std::to_string(*cfg.filter_k));
    }
  }

  const State psi0 = prepare_initial_state(cfg.init, params.geometry, use_sector);
  const std::vector<State> kstates = krylov_states(h, psi0, cfg.evolution);

  // Seeds depend on (step, sector, grid point) only, so sweeps are
  // reproducible irrespective of scheduling.
  const std::uint64_t sector_tag = use_sector ? static_cast<std::uint64_t>(w0) : 0xFFFFULL;
  std::vector<SampleTable> tables;
  tables.reserve(kstates.size());
  std::uint64_t discarded = 0;
  for (std::size_t j = 0; j < kstates.size(); ++j) {
    const std::uint64_t s = derive_seed(cfg.seed, {j, sector_tag, cfg.grid_index});
    SampleTable t = sample(kstates[j], cfg.shots, s, static_cast<int>(j));
    if (cfg.noise && cfg.noise->readout_flip_prob > 0.0) {
      t = apply_readout_noise(t, *cfg.noise, derive_seed(s, {0x4E01}));
    }
    if (cfg.filter_k) {
      t = filter_sector(t, *cfg.filter_k);
      discarded += t.meta.shots_discarded;
    }
    tables.push_back(std::move(t));
  }
  const MergedBasis merged = merge_tables(tables);
  if (merged.bitstrings.empty()) throw EmptySubspaceError("no bitstrings survived sampling and filtering");

  const SubspaceProblem prob = project_hamiltonian(h, merged.bitstrings);
  SkqdResult res = solve_subspace(prob, cfg.eig);
  res.shots_discarded = discarded;
  res.config_echo = echo(cfg);

  if (cfg.oracle) {
    std::optional<EdResult> ed;
    try {
      if (use_sector) {
        ed = ed_ground_sector(h, w0, cfg.ed);
      } else if (n <= cfg.ed.max_full_sites) {
        ed = ed_ground(h, cfg.ed);
      }
    } catch (const ResourceError&) {
      ed.reset();
    }
    if (ed) {
      res.reference_energy = ed->energy;
      res.gamma0_sq = overlap_sq(psi0, ed->ground_state);
      res.alpha_L = captured_weight(ed->ground_state, res.basis);
    }
  }
  return res;
}

void to_json(nlohmann::json& j, const SkqdResult& r) {
  j = nlohmann::json::object();
  j["energy"] = r.energy;
  j["basis_size"] = r.basis_size;
  j["residual"] = r.residual;
  j["gamma0_sq"] = r.gamma0_sq ? nlohmann::json(*r.gamma0_sq) : nlohmann::json();
  j["config_echo"] = r.config_echo;
}

void BoundParams::validate() const {
  if (d < 1) throw InvalidArgument("d must be at least 1");
  if (L < 1) throw InvalidArgument("L must be at least 1");
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  if (!(gamma0_sq > 0.0 && gamma0_sq <= 1.0)) throw InvalidArgument("gamma0_sq must lie in (0, 1]");
  if (!(alpha_L >= 0.0 && alpha_L <= 1.0)) throw InvalidArgument("alpha_L must lie in [0, 1]");
  if (!(beta_L >= 0.0 && beta_L <= alpha_L)) throw InvalidArgument("beta_L must lie in [0, alpha_L]");
  if (!(eps_tilde >= 0.0)) throw InvalidArgument("eps_tilde must be non-negative");
  if (!(h_norm >= 0.0)) throw InvalidArgument("h_norm must be non-negative");
}

double energy_error_bound(double alpha_L, double h_norm) {
  if (!(alpha_L >= 0.0 && alpha_L <= 1.0)) throw InvalidArgument("alpha_L must lie in [0, 1]");
  if (!(h_norm >= 0.0)) throw InvalidArgument("h_norm must be non-negative");
  return std::sqrt(8.0) * h_norm * std::sqrt(1.0 - std::sqrt(alpha_L));
}

double sample_count_bound(const BoundParams& b) {
  b.validate();
  const double margin = b.beta_L - 2.0 * std::sqrt(b.eps_tilde);
  if (!(margin > 0.0)) {
    throw InvalidArgument("sample bound undefined: beta_L must exceed 2 sqrt(eps_tilde)");
  }
  const double d = b.d;
  return d * d * std::log(static_cast<double>(b.L) / b.eta) / (b.gamma0_sq * margin);
}

}  // namespace skqd
