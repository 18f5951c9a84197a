// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

// skqd-lab: command-line driver for exact diagonalization, SKQD runs, field
// sweeps, sparsity maps and the sampling bounds.

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skqd/analysis.hpp"
#include "skqd/config.hpp"
#include "skqd/errors.hpp"
#include "skqd/io.hpp"
#include "skqd/linalg.hpp"
#include "skqd/skqd.hpp"
#include "skqd/sweep.hpp"

namespace {

using nlohmann::json;
using namespace skqd;

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kResource = 3, kConvergence = 4 };

// Command-line values that override the config file.
struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> output;
  std::optional<std::string> preset;

  std::optional<int> n;
  std::optional<double> J, delta, h_z, h_x;
  std::optional<std::string> geometry;

  std::optional<std::string> init;
  std::optional<int> k;
  std::optional<std::string> layout;

  std::optional<double> dt;
  std::optional<int> d;
  std::optional<std::string> method;
  std::optional<int> reps;
  std::optional<std::uint64_t> shots;
  std::optional<double> noise;
  std::optional<int> filter_k;

  std::optional<double> hz_min, hz_max;
  std::optional<int> steps;
  std::optional<int> sector_window;
  std::vector<int> sectors;
  bool no_reference = false;

  std::optional<double> delta_min, delta_max;
  std::optional<int> delta_steps, hz_steps;

  std::optional<int> sector;  // ed only
  bool sparsity = false;      // --hz-* flags describe the sparsity grid
};

void add_common(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON run configuration");
  app->add_option("--seed", o.seed, "Base seed (64-bit)");
  app->add_option("--threads", o.threads, "Worker threads (default: hardware parallelism)")->check(CLI::PositiveNumber);
  app->add_option("--output", o.output, "Output directory");
  app->add_option("--preset", o.preset, "Material preset (see `materials`)");
  app->add_option("--n", o.n, "Number of sites");
  app->add_option("--J", o.J, "Exchange coupling");
  app->add_option("--delta", o.delta, "ZZ anisotropy");
  app->add_option("--h-z", o.h_z, "Longitudinal field");
  app->add_option("--h-x", o.h_x, "Transverse field");
  app->add_option("--geometry", o.geometry, "chain or rect")->check(CLI::IsMember({"chain", "rect"}));
}

void add_run(CLI::App* app, Overrides& o) {
  app->add_option("--init", o.init, "singlet, neel or w")->check(CLI::IsMember({"singlet", "neel", "w"}));
  app->add_option("--k", o.k, "Excitations for the W-state product");
  app->add_option("--layout", o.layout, "identity or snake")->check(CLI::IsMember({"identity", "snake"}));
  app->add_option("--dt", o.dt, "Krylov time step");
  app->add_option("--d", o.d, "Krylov dimension");
  app->add_option("--method", o.method, "trotter2 or exact")->check(CLI::IsMember({"trotter2", "exact"}));
  app->add_option("--reps", o.reps, "Trotter steps per Krylov step");
  app->add_option("--shots", o.shots, "Shots per Krylov state");
  app->add_option("--noise", o.noise, "Readout bit-flip probability");
  app->add_option("--filter-k", o.filter_k, "Keep only bitstrings of this weight");
}

void add_sweep(CLI::App* app, Overrides& o) {
  app->add_option("--hz-min", o.hz_min, "Lowest field");
  app->add_option("--hz-max", o.hz_max, "Highest field");
  app->add_option("--steps", o.steps, "Field grid points");
  app->add_option("--sector-window", o.sector_window, "Sweep only sectors this close to the reference sector");
  app->add_option("--sectors", o.sectors, "Sectors to sweep (default 0..n/2)");
  app->add_flag("--no-reference", o.no_reference, "Skip the sector ED reference");
}

void add_sparsity(CLI::App* app, Overrides& o) {
  app->add_option("--delta-min", o.delta_min, "Lowest anisotropy");
  app->add_option("--delta-max", o.delta_max, "Highest anisotropy");
  app->add_option("--delta-steps", o.delta_steps, "Anisotropy grid points");
  app->add_option("--hz-min", o.hz_min, "Lowest field");
  app->add_option("--hz-max", o.hz_max, "Highest field");
  app->add_option("--hz-steps", o.hz_steps, "Field grid points");
}

// Merges file config and flags into the canonical JSON document, then parses
// it, so flags get the same validation as config files.
RunConfig resolve(const Overrides& o) {
  json doc = json::object();
  std::string source = "<command line>";
  if (!o.config.empty()) {
    const RunConfig base = load_config(o.config);
    doc = base.echo();
    if (!base.output_dir.empty() && base.output_dir != ".") doc["output_dir"] = base.output_dir.string();
    source = o.config;
  }
  auto& m = doc["model"];
  if (m.is_null()) m = json::object();
  if (o.n) m["n"] = *o.n;
  if (o.preset) {
    const MaterialPreset* p = find_preset(*o.preset);
    if (p == nullptr) throw ConfigError("unknown material preset \"" + *o.preset + "\"");
    m["preset"] = std::string(p->name);
    m["J"] = p->J_meV;
    m["delta"] = p->delta;
  }
  if (o.J) m["J"] = *o.J;
  if (o.delta) m["delta"] = *o.delta;
  if (o.h_z) m["h_z"] = *o.h_z;
  if (o.h_x) m["h_x"] = *o.h_x;
  if (o.geometry) m["geometry"] = *o.geometry;
  if (!m.contains("n")) throw ConfigError("no system size: give --n or a config with model.n");
  if (o.init) doc["init"]["kind"] = *o.init;
  if (o.k) doc["init"]["k"] = *o.k;
  if (o.layout) doc["init"]["layout"] = *o.layout;

  if (o.method && doc.contains("evolution")) {
    // Switching method drops the other method's parameter.
    auto& e = doc["evolution"];
    if (*o.method == "exact") e.erase("reps");
    if (*o.method == "trotter2") e.erase("tol");
  }
  if (o.dt) doc["evolution"]["dt"] = *o.dt;
  if (o.d) doc["evolution"]["d"] = *o.d;
  if (o.method) doc["evolution"]["method"] = *o.method;
  if (o.reps) doc["evolution"]["reps"] = *o.reps;
  if (o.shots) doc["shots"] = *o.shots;
  if (o.noise) doc["noise"] = {{"readout_flip_prob", *o.noise}};
  if (o.filter_k) doc["filter_k"] = *o.filter_k;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.output) doc["output_dir"] = *o.output;

  if (!o.sparsity && (o.hz_min || o.hz_max || o.steps)) {
    auto& s = doc["sweep"];
    if (s.is_null()) s = json::object();
    s.erase("hz_grid");
    s["hz_min"] = o.hz_min.value_or(0.0);
    s["hz_max"] = o.hz_max.value_or(o.hz_min.value_or(0.0));
    s["steps"] = o.steps.value_or(1);
  }
  if (o.sector_window) doc["sweep"]["sector_window"] = *o.sector_window;
  if (!o.sectors.empty()) doc["sweep"]["sectors"] = o.sectors;
  if (o.no_reference) doc["sweep"]["reference"] = false;

  if (o.sparsity) {
    auto& s = doc["sparsity"];
    if (s.is_null()) {
      s = {{"delta_min", -2.0}, {"delta_max", 4.0}, {"delta_steps", 20},
           {"hz_min", 0.0},     {"hz_max", 10.0},   {"hz_steps", 20}};
    }
    if (o.delta_min || o.delta_max || o.delta_steps) {
      s.erase("delta_grid");
      s["delta_min"] = o.delta_min.value_or(s.value("delta_min", -2.0));
      s["delta_max"] = o.delta_max.value_or(s.value("delta_max", 4.0));
      s["delta_steps"] = o.delta_steps.value_or(s.value("delta_steps", 20));
    }
    if (o.hz_min || o.hz_max || o.hz_steps) {
      s.erase("hz_grid");
      s["hz_min"] = o.hz_min.value_or(s.value("hz_min", 0.0));
      s["hz_max"] = o.hz_max.value_or(s.value("hz_max", 10.0));
      s["hz_steps"] = o.hz_steps.value_or(s.value("hz_steps", 20));
    }
  }
  return parse_config(doc.dump(2), source);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const RunConfig& c, const std::string& file, const std::string& content, bool to_stdout) {
  write_text_file(c.output_dir / file, content);
  if (to_stdout) std::cout << content;
}

int cmd_ed(const Overrides& o) {
  const RunConfig c = resolve(o);
  const TermList h = build_terms(c.model);
  EdOptions opts;
  json out;
  std::optional<EdResult> best;
  std::optional<int> sector;
  if (o.sector) {
    best = ed_ground_sector(h, *o.sector, opts);
    sector = *o.sector;
  } else if (c.n <= opts.max_full_sites) {
    best = ed_ground(h, opts);
  } else if (conserves_weight(h)) {
    // Larger conserving models: minimum over sectors.
    std::vector<EdResult> per;
    std::vector<double> e;
    for (int k = 0; k <= c.n; ++k) {
      per.push_back(ed_ground_sector(h, k, opts));
      e.push_back(per.back().energy);
    }
    bool tie = false;
    const std::size_t b = select_lowest(e, &tie);
    best = std::move(per[b]);
    best->degenerate = best->degenerate || tie;
    sector = static_cast<int>(b);
  } else {
    throw ResourceError("full-space ED is capped at " + std::to_string(opts.max_full_sites) + " sites");
  }
  out["energy"] = best->energy;
  out["degenerate"] = best->degenerate;
  out["residual"] = best->residual;
  out["sector"] = sector ? json(*sector) : json();
  out["magnetization"] = magnetization_expect(best->ground_state);
  out["log_ipr"] = sparsity_profile(best->ground_state).log_ipr();
  out["config_echo"] = c.echo();
  emit(c, "ed.json", dump(out), true);
  return kOk;
}

int cmd_skqd(const Overrides& o) {
  const RunConfig c = resolve(o);
  const SkqdResult r = skqd_run(c.model, c.skqd);
  json out = r;
  out["config_echo"] = c.echo();
  out["shots_discarded"] = r.shots_discarded;
  out["reference_energy"] = r.reference_energy ? json(*r.reference_energy) : json();
  out["alpha_L"] = r.alpha_L ? json(*r.alpha_L) : json();
  emit(c, "skqd.json", dump(out), true);
  return kOk;
}

int cmd_field_sweep(const Overrides& o) {
  const RunConfig c = resolve(o);
  if (!c.sweep) throw ConfigError("field-sweep needs a sweep section or --hz-min/--hz-max/--steps");
  FieldSweepOptions fo;
  fo.sectors = c.sweep->sectors;
  fo.reference = c.sweep->reference;
  fo.sector_window = c.sweep->sector_window;
  if (fo.reference && !fo.sector_window) fo.sector_window = 2;
  const auto rows = field_sweep(c.model, c.sweep->hz_grid, c.skqd, fo);

  std::ostringstream fs, sd;
  write_field_sweep_csv(fs, rows);
  write_sector_detail_csv(sd, rows);
  emit(c, "field_sweep.csv", fs.str(), false);
  emit(c, "sector_detail.csv", sd.str(), false);

  json summary;
  summary["config_echo"] = c.echo();
  summary["sector_window"] = fo.sector_window ? json(*fo.sector_window) : json();
  json pts = json::array();
  for (const auto& r : rows) {
    pts.push_back({{"h_z", r.h_z},
                   {"best_k", r.best_k},
                   {"magnetization", r.magnetization},
                   {"m_rel", r.m_rel},
                   {"degenerate", r.degenerate},
                   {"reference_degenerate", r.reference_degenerate}});
  }
  summary["points"] = pts;
  emit(c, "field_sweep.json", dump(summary), false);
  std::cout << fs.str();
  return kOk;
}

int cmd_sparsity_map(const Overrides& o) {
  const RunConfig c = resolve(o);
  const SparsitySpec& sp = *c.sparsity;  // resolve() fills the default grid
  const auto rows = sparsity_map(c.model.geometry, c.model.J, sp.delta_grid, sp.hz_grid);
  std::ostringstream ss;
  write_sparsity_map_csv(ss, rows);
  emit(c, "sparsity_map.csv", ss.str(), false);
  json meta;
  meta["config_echo"] = c.echo();
  meta["delta_grid"] = sp.delta_grid;
  meta["hz_grid"] = sp.hz_grid;
  emit(c, "sparsity_map.json", dump(meta), false);
  std::cout << ss.str();
  return kOk;
}

struct BoundArgs {
  double alpha_L = 1.0;
  double h_norm = 0.0;
  std::optional<int> d;
  std::optional<std::size_t> L;
  double eta = 0.01;
  std::optional<double> gamma0_sq;
  std::optional<double> beta_L;
  double eps_tilde = 0.0;
};

int cmd_bounds(const BoundArgs& a) {
  json out;
  out["energy_error_bound"] = energy_error_bound(a.alpha_L, a.h_norm);
  if (a.d || a.L || a.gamma0_sq || a.beta_L) {
    if (!a.d || !a.L || !a.gamma0_sq || !a.beta_L) {
      throw ConfigError("sample bound needs --d, --L, --gamma0-sq and --beta-L");
    }
    BoundParams b{.d = *a.d,
                  .L = *a.L,
                  .eta = a.eta,
                  .gamma0_sq = *a.gamma0_sq,
                  .beta_L = *a.beta_L,
                  .eps_tilde = a.eps_tilde,
                  .alpha_L = a.alpha_L,
                  .h_norm = a.h_norm};
    out["sample_count_bound"] = sample_count_bound(b);
  } else {
    out["sample_count_bound"] = nullptr;
  }
  std::cout << dump(out);
  return kOk;
}

int cmd_materials() {
  std::cout << "name,J_meV,delta,citation\n";
  for (const auto& p : material_presets()) {
    std::cout << p.name << ',' << format_double(p.J_meV) << ',' << format_double(p.delta) << ',' << p.citation
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"skqd-lab: sample-based Krylov diagonalization of XXZ spin models"};
  app.require_subcommand(1);

  Overrides o;
  BoundArgs b;
  auto* ed = app.add_subcommand("ed", "Exact ground state (full space or sector)");
  add_common(ed, o);
  ed->add_option("--sector", o.sector, "Restrict to this weight sector");
  auto* run = app.add_subcommand("skqd", "Single SKQD run");
  add_common(run, o);
  add_run(run, o);
  auto* fs = app.add_subcommand("field-sweep", "Sector sweeps over a longitudinal-field grid");
  add_common(fs, o);
  add_run(fs, o);
  add_sweep(fs, o);
  auto* sm = app.add_subcommand("sparsity-map", "Ground-state IPR over a (delta, h_z) grid");
  add_common(sm, o);
  add_sparsity(sm, o);
  auto* bd = app.add_subcommand("bounds", "Energy-error and sample-count bounds");
  bd->add_option("--alpha-L", b.alpha_L, "Captured ground-state weight");
  bd->add_option("--h-norm", b.h_norm, "Upper bound on ||H||");
  bd->add_option("--d", b.d, "Krylov dimension");
  bd->add_option("--L", b.L, "Retained components");
  bd->add_option("--eta", b.eta, "Failure probability");
  bd->add_option("--gamma0-sq", b.gamma0_sq, "Initial-state overlap");
  bd->add_option("--beta-L", b.beta_L, "Smallest retained probability");
  bd->add_option("--eps-tilde", b.eps_tilde, "Krylov approximation error");
  auto* mat = app.add_subcommand("materials", "List material presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (o.threads) set_num_threads(*o.threads);
    if (ed->parsed()) return cmd_ed(o);
    if (run->parsed()) return cmd_skqd(o);
    if (fs->parsed()) return cmd_field_sweep(o);
    if (sm->parsed()) {
      o.sparsity = true;
      return cmd_sparsity_map(o);
    }
    if (bd->parsed()) return cmd_bounds(b);
    if (mat->parsed()) return cmd_materials();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
