// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "skqd/errors.hpp"
#include "skqd/io.hpp"
#include "skqd/rng.hpp"

namespace skqd {
namespace {

std::vector<int> default_sectors(int n) {
  std::vector<int> s(static_cast<std::size_t>(n / 2 + 1));
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = static_cast<int>(k);
  return s;
}

std::vector<int> normalized_sectors(std::span<const int> in, int n) {
  std::vector<int> s(in.begin(), in.end());
  if (s.empty()) return default_sectors(n);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (int k : s) {
    if (k < 0 || k > n / 2) {
      throw InvalidArgument("sector " + std::to_string(k) + " outside [0, " + std::to_string(n / 2) + "]");
    }
  }
  return s;
}

void require_conserving(const ModelParams& p) {
  if (p.h_x != 0.0) throw InvalidArgument("sector sweeps need h_x = 0 (a transverse field mixes sectors)");
}

// Runs body(i) for i in [0, count), in parallel when allowed. The first
// exception in index order is rethrown after all tasks finish.
template <typename F>
void run_tasks(std::size_t count, F&& body) {
  std::vector<std::exception_ptr> errors(count);
#pragma omp parallel for schedule(dynamic, 1) if (count > 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---- sector ED memo ----

std::string cache_key(const ModelParams& p, int k) {
  std::ostringstream ss;
  ss << "xxz;n=" << p.geometry.n_sites << ";J=" << format_double(p.J) << ";delta=" << format_double(p.delta)
     << ";k=" << k << ";edges=";
  for (const auto& [a, b] : p.geometry.edges) ss << a << '-' << b << ',';
  return ss.str();
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) h = splitmix64(h ^ c);
  return h;
}

std::mutex memo_mutex;
std::map<std::string, double>& memo() {
  static std::map<std::string, double> m;
  return m;
}

std::optional<std::filesystem::path> cache_dir() {
  const char* env = std::getenv("SKQD_LAB_CACHE");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return std::filesystem::path(env);
}

std::optional<double> cache_lookup(const std::string& key) {
  {
    std::lock_guard lock(memo_mutex);
    if (auto it = memo().find(key); it != memo().end()) return it->second;
  }
  const auto dir = cache_dir();
  if (!dir) return std::nullopt;
  std::ostringstream name;
  name << "sector_" << std::hex << hash_string(key) << ".json";
  const auto path = *dir / name.str();
  std::ifstream is(path);
  if (!is) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(is);
    if (j.at("key").get<std::string>() != key) return std::nullopt;
    return j.at("energy").get<double>();
  } catch (const std::exception&) {
    return std::nullopt;  // a corrupt entry is recomputed
  }
}

void cache_store(const std::string& key, double e) {
  {
    std::lock_guard lock(memo_mutex);
    memo()[key] = e;
  }
  const auto dir = cache_dir();
  if (!dir) return;
  std::ostringstream name;
  name << "sector_" << std::hex << hash_string(key) << ".json";
  try {
    write_text_file(*dir / name.str(), nlohmann::json{{"key", key}, {"energy", e}}.dump() + "\n");
  } catch (const std::exception&) {
    // The cache is an optimization; failure to persist is not an error.
  }
}

}  // namespace

std::size_t select_lowest(std::span<const double> energies, bool* tie) {
  if (energies.empty()) throw InvalidArgument("no candidates to select from");
  std::size_t best = 0;
  for (std::size_t i = 1; i < energies.size(); ++i) {
    if (energies[i] < energies[best] - kTieTolerance) best = i;
  }
  if (tie != nullptr) {
    *tie = false;
    for (std::size_t i = 0; i < energies.size(); ++i) {
      if (i != best && std::abs(energies[i] - energies[best]) <= kTieTolerance) *tie = true;
    }
  }
  return best;
}

SectorSweepResult sector_sweep(const ModelParams& params, std::span<const int> sectors_in, const SkqdConfig& cfg) {
  require_conserving(params);
  const int n = params.geometry.n_sites;
  const auto sectors = normalized_sectors(sectors_in, n);
  SectorSweepResult out;
  out.n_sites = n;
  for (int k : sectors) {
    SkqdConfig c = cfg;
    c.init = InitialStateSpec{InitKind::WStateProduct, k, cfg.init.layout};
    c.filter_k = k;
    try {
      const SkqdResult r = skqd_run(params, c);
      out.per_sector.push_back(SectorOutcome{k, r.energy, r.basis_size, r.shots_discarded, r.reference_energy,
                                             r.alpha_L, r.gamma0_sq});
    } catch (const EmptySubspaceError&) {
      // Every shot left the sector; nothing to diagonalize here.
    }
  }
  if (out.per_sector.empty()) throw EmptySubspaceError("sector sweep failed: every sector was empty after filtering");
  std::vector<double> e;
  for (const auto& s : out.per_sector) e.push_back(s.energy);
  const std::size_t b = select_lowest(e, &out.degenerate);
  out.best_k = out.per_sector[b].k;
  out.energy = out.per_sector[b].energy;
  out.magnetization = n - 2 * out.best_k;
  return out;
}

SectorReference::SectorReference(const ModelParams& params, std::span<const int> sectors, const EdOptions& opts)
    : n_(params.geometry.n_sites), sectors_(normalized_sectors(sectors, params.geometry.n_sites)) {
  require_conserving(params);
  for (int k : sectors_) {
    if (binomial(n_, k) > opts.max_sector_dim) return;
  }
  ModelParams zero = params;
  zero.h_z = 0.0;
  zero_field_.assign(sectors_.size(), 0.0);
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (auto hit = cache_lookup(cache_key(zero, sectors_[i]))) {
      zero_field_[i] = *hit;
    } else {
      todo.push_back(i);
    }
  }
  if (!todo.empty()) {
    const TermList h = build_terms(zero);
    run_tasks(todo.size(), [&](std::size_t t) {
      const std::size_t i = todo[t];
      zero_field_[i] = ed_ground_sector(h, sectors_[i], opts).energy;
    });
    for (std::size_t i : todo) cache_store(cache_key(zero, sectors_[i]), zero_field_[i]);
  }
  available_ = true;
}

double SectorReference::energy(int k, double h_z) const {
  if (!available_) throw ResourceError("sector reference unavailable (sector dimension over cap)");
  const auto it = std::find(sectors_.begin(), sectors_.end(), k);
  if (it == sectors_.end()) throw InvalidArgument("sector " + std::to_string(k) + " not in reference set");
  return zero_field_[static_cast<std::size_t>(it - sectors_.begin())] - h_z * (n_ - 2 * k);
}

int SectorReference::best_k(double h_z, bool* tie) const {
  std::vector<double> e;
  for (int k : sectors_) e.push_back(energy(k, h_z));
  return sectors_[select_lowest(e, tie)];
}

std::vector<FieldSweepRow> field_sweep(const ModelParams& base, std::span<const double> hz_grid,
                                       const SkqdConfig& cfg, const FieldSweepOptions& opts) {
  if (hz_grid.empty()) throw InvalidArgument("field grid is empty");
  require_conserving(base);
  const int n = base.geometry.n_sites;
  const auto universe = normalized_sectors(opts.sectors, n);

  std::optional<SectorReference> ref;
  if (opts.reference || opts.sector_window) {
    ref.emplace(base, universe, opts.ed);
    if (!ref->available()) ref.reset();
  }
  if (opts.sector_window && *opts.sector_window < 0) throw InvalidArgument("sector window must be non-negative");

  std::vector<FieldSweepRow> rows(hz_grid.size());
  run_tasks(hz_grid.size(), [&](std::size_t i) {
    ModelParams p = base;
    p.h_z = hz_grid[i];
    FieldSweepRow& row = rows[i];
    row.h_z = p.h_z;
    std::vector<int> sweep = universe;
    if (ref) {
      row.reference_k = ref->best_k(p.h_z, &row.reference_degenerate);
      row.reference_energy = ref->energy(*row.reference_k, p.h_z);
      if (opts.sector_window) {
        const int w = *opts.sector_window;
        sweep.clear();
        for (int k : universe) {
          if (std::abs(k - *row.reference_k) <= w) sweep.push_back(k);
        }
      }
    }
    SkqdConfig c = cfg;
    c.grid_index = i;
    const SectorSweepResult r = sector_sweep(p, sweep, c);
    row.best_k = r.best_k;
    row.magnetization = r.magnetization;
    row.m_rel = static_cast<double>(r.magnetization) / n;
    row.energy = r.energy;
    row.degenerate = r.degenerate;
    row.sectors = r.per_sector;
    for (const auto& s : r.per_sector) {
      if (s.k == r.best_k) {
        row.basis_size = s.basis_size;
        row.shots_discarded = s.shots_discarded;
      }
    }
  });
  return rows;
}

std::vector<SparsityRow> sparsity_map(const Geometry& geometry, double J, std::span<const double> delta_grid,
                                      std::span<const double> hz_grid, const EdOptions& opts) {
  if (delta_grid.empty() || hz_grid.empty()) throw InvalidArgument("sparsity map grids must be nonempty");
  const int n = geometry.n_sites;
  // For h_z >= 0 the lowest sector has k <= N/2 (spin-flip symmetry).
  const bool negative = std::any_of(hz_grid.begin(), hz_grid.end(), [](double h) { return h < 0.0; });
  std::vector<int> sectors;
  for (int k = 0; k <= (negative ? n : n / 2); ++k) sectors.push_back(k);
  for (int k : sectors) {
    if (binomial(n, k) > opts.max_sector_dim) {
      throw ResourceError("sector " + std::to_string(k) + " of " + std::to_string(n) +
                          " sites exceeds the ED cap; use fewer sites");
    }
  }

  struct SectorData {
    double energy;
    double ipr;
    bool degenerate;
  };
  // Sector ground states do not depend on h_z, so each delta needs one ED
  // per sector.
  std::vector<std::vector<SectorData>> data(delta_grid.size(), std::vector<SectorData>(sectors.size()));
  const std::size_t tasks = delta_grid.size() * sectors.size();
  run_tasks(tasks, [&](std::size_t t) {
    const std::size_t di = t / sectors.size(), si = t % sectors.size();
    ModelParams p{.J = J, .delta = delta_grid[di], .h_z = 0.0, .h_x = 0.0, .geometry = geometry};
    const EdResult ed = ed_ground_sector(build_terms(p), sectors[si], opts);
    data[di][si] = SectorData{ed.energy, sparsity_profile(ed.ground_state).ipr, ed.degenerate};
  });

  std::vector<SparsityRow> rows;
  rows.reserve(delta_grid.size() * hz_grid.size());
  for (std::size_t di = 0; di < delta_grid.size(); ++di) {
    for (double h : hz_grid) {
      std::vector<double> e;
      for (std::size_t si = 0; si < sectors.size(); ++si) e.push_back(data[di][si].energy - h * (n - 2 * sectors[si]));
      bool tie = false;
      const std::size_t b = select_lowest(e, &tie);
      SparsityRow r;
      r.delta = delta_grid[di];
      r.h_z = h;
      r.ground_k = sectors[b];
      r.energy = e[b];
      r.log_ipr_nat = std::log(data[di][b].ipr);
      r.log_ipr_10 = std::log10(data[di][b].ipr);
      r.degenerate = tie || data[di][b].degenerate;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_field_sweep_csv(std::ostream& os, std::span<const FieldSweepRow> rows) {
  os << "h_z,best_k,magnetization,energy,reference_energy,reference_k,basis_size,shots_discarded\n";
  for (const auto& r : rows) {
    os << format_double(r.h_z) << ',' << r.best_k << ',' << r.magnetization << ',' << format_double(r.energy) << ','
       << format_optional(r.reference_energy) << ',' << format_optional(r.reference_k) << ',' << r.basis_size << ','
       << r.shots_discarded << '\n';
  }
}

void write_sector_detail_csv(std::ostream& os, std::span<const FieldSweepRow> rows) {
  os << "h_z,k,energy,basis_size,shots_discarded\n";
  for (const auto& r : rows) {
    for (const auto& s : r.sectors) {
      os << format_double(r.h_z) << ',' << s.k << ',' << format_double(s.energy) << ',' << s.basis_size << ','
         << s.shots_discarded << '\n';
    }
  }
}

void write_sparsity_map_csv(std::ostream& os, std::span<const SparsityRow> rows) {
  os << "delta,h_z,log_ipr_nat,log_ipr_10,ground_k,energy,degenerate\n";
  for (const auto& r : rows) {
    os << format_double(r.delta) << ',' << format_double(r.h_z) << ',' << format_double(r.log_ipr_nat) << ','
       << format_double(r.log_ipr_10) << ',' << r.ground_k << ',' << format_double(r.energy) << ','
       << (r.degenerate ? "true" : "false") << '\n';
  }
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw InvalidArgument("grid needs at least one point");
  if (steps == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
  g.back() = hi;
  return g;
}

}  // namespace skqd
