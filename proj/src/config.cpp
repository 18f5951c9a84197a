// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "skqd/errors.hpp"
#include "skqd/io.hpp"
#include "skqd/lattice.hpp"
#include "skqd/sweep.hpp"

namespace skqd {
namespace {

using nlohmann::json;

constexpr std::array<MaterialPreset, 7> kPresets{{
    {"Cs2CoCl4", "Cs₂CoCl₄", 0.23, 0.25, "PhysRevLett.127.037201"},
    {"CuPzN", "CuPzN", 0.91, 1.00, "PhysRevB.59.1008"},
    {"KCuF3", "KCuF₃", 33.5, 1.00, "PhysRevLett.111.137205"},
    {"BaCo2V2O8", "BaCo₂V₂O₈", 3.05, 1.90, "PhysRevLett.123.027204"},
    {"SrCo2V2O8", "SrCo₂V₂O₈", 3.7, 2.10, "PhysRevLett.123.067203"},
    {"CsCoBr3", "CsCoBr₃", 1.25, 6.25, "WPLehmann_1981"},
    {"CsCoCl3", "CsCoCl₃", 0.595, 10.42, "WPLehmann_1981"},
}};

bool iequal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

// Walks a parsed document, checking types and key sets. Errors name the
// JSON path and the line of the offending key in the source text.
class Reader {
 public:
  Reader(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  [[noreturn]] void fail(const std::string& path, std::string_view key, const std::string& msg) const {
    std::string where(source_);
    if (const int line = line_of(key); line > 0) where += ":" + std::to_string(line);
    throw ConfigError(where + ": " + path + ": " + msg);
  }

  void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, last(path), "expected an object");
    for (const auto& [k, v] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        fail(path + "/" + k, k, "unknown key \"" + k + "\"");
      }
    }
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "/" + key, key, "expected a number");
    return v.get<double>();
  }

  std::optional<long long> integer(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "/" + key, key, "expected an integer");
    return v.get<long long>();
  }

  std::optional<std::uint64_t> unsigned_integer(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(path + "/" + key, key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(path + "/" + key, key, "expected true or false");
    return v.get<bool>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "/" + key, key, "expected a string");
    return v.get<std::string>();
  }

  template <typename T>
  std::optional<std::vector<T>> array(const json& obj, const std::string& path, const char* key) const {
    if (!obj.contains(key)) return std::nullopt;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(path + "/" + key, key, "expected an array");
    std::vector<T> out;
    for (const auto& e : v) {
      if constexpr (std::is_integral_v<T>) {
        if (!e.is_number_integer()) fail(path + "/" + key, key, "expected integers");
      } else {
        if (!e.is_number()) fail(path + "/" + key, key, "expected numbers");
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  }

 private:
  static std::string_view last(const std::string& path) {
    const auto p = path.rfind('/');
    return p == std::string::npos ? std::string_view(path) : std::string_view(path).substr(p + 1);
  }

  // Line of the first `"key":` in the source, 0 if not found.
  int line_of(std::string_view key) const {
    if (key.empty()) return 0;
    const std::string needle = "\"" + std::string(key) + "\"";
    for (std::size_t pos = text_.find(needle); pos != std::string_view::npos; pos = text_.find(needle, pos + 1)) {
      std::size_t q = pos + needle.size();
      while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
      if (q < text_.size() && text_[q] == ':') return line_at(pos);
    }
    return 0;
  }

  std::string_view text_;
  std::string_view source_;
};

std::vector<double> read_grid(const Reader& r, const json& obj, const std::string& path, const char* grid,
                              const char* lo, const char* hi, const char* steps) {
  auto g = r.array<double>(obj, path, grid);
  const auto a = r.number(obj, path, lo);
  const auto b = r.number(obj, path, hi);
  const auto s = r.integer(obj, path, steps);
  if (g) {
    if (a || b || s) r.fail(path, grid, std::string("give either ") + grid + " or " + lo + "/" + hi + "/" + steps);
    if (g->empty()) r.fail(path + "/" + grid, grid, "grid is empty");
    return *g;
  }
  if (!a || !b || !s) r.fail(path, lo, std::string("missing ") + grid + " (or " + lo + ", " + hi + ", " + steps + ")");
  if (*s < 1) r.fail(path + "/" + steps, steps, "need at least one step");
  if (*b < *a) r.fail(path + "/" + hi, hi, "upper end below lower end");
  return linspace(*a, *b, static_cast<int>(*s));
}

}  // namespace

std::span<const MaterialPreset> material_presets() { return kPresets; }

const MaterialPreset* find_preset(std::string_view name) {
  for (const auto& p : kPresets) {
    if (iequal(p.name, name)) return &p;
  }
  return nullptr;
}

void RunConfig::rebuild_geometry() {
  model.geometry = geometry == GeometryKind::Chain ? build_chain(n) : build_rectangle(n);
}

void RunConfig::apply_preset(std::string_view name) {
  const MaterialPreset* p = find_preset(name);
  if (p == nullptr) throw ConfigError("unknown material preset \"" + std::string(name) + "\"");
  preset = std::string(p->name);
  model.J = p->J_meV;
  model.delta = p->delta;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const Reader r(text, source);
    throw ConfigError(std::string(source) + ":" + std::to_string(r.line_at(e.byte == 0 ? 0 : e.byte - 1)) +
                      ": malformed JSON: " + e.what());
  }
  const Reader r(text, source);
  r.check_keys(doc, "", {"model", "init", "evolution", "shots", "noise", "filter_k", "sweep", "sparsity", "seed",
                         "output_dir"});
  RunConfig c;

  if (!doc.contains("model")) r.fail("/model", "model", "missing required section");
  const json& m = doc.at("model");
  r.check_keys(m, "/model", {"n", "J", "delta", "h_z", "h_x", "geometry", "preset"});
  const auto n = r.integer(m, "/model", "n");
  if (!n) r.fail("/model/n", "model", "missing required key \"n\"");
  if (*n < 2 || *n > kMaxSites) r.fail("/model/n", "n", "n must lie in [2, " + std::to_string(kMaxSites) + "]");
  c.n = static_cast<int>(*n);
  if (const auto g = r.string(m, "/model", "geometry")) {
    if (*g == "chain") {
      c.geometry = GeometryKind::Chain;
    } else if (*g == "rect") {
      c.geometry = GeometryKind::Rectangle;
    } else {
      r.fail("/model/geometry", "geometry", "expected \"chain\" or \"rect\"");
    }
  }
  if (const auto p = r.string(m, "/model", "preset")) {
    try {
      c.apply_preset(*p);
    } catch (const ConfigError& e) {
      r.fail("/model/preset", "preset", e.what());
    }
  }
  if (auto v = r.number(m, "/model", "J")) c.model.J = *v;
  if (auto v = r.number(m, "/model", "delta")) c.model.delta = *v;
  if (auto v = r.number(m, "/model", "h_z")) c.model.h_z = *v;
  if (auto v = r.number(m, "/model", "h_x")) c.model.h_x = *v;
  try {
    c.rebuild_geometry();
  } catch (const InvalidArgument& e) {
    r.fail("/model/n", "n", e.what());
  }

  if (doc.contains("init")) {
    const json& i = doc.at("init");
    r.check_keys(i, "/init", {"kind", "k", "layout"});
    if (const auto k = r.string(i, "/init", "kind")) {
      if (*k == "singlet") {
        c.skqd.init.kind = InitKind::SingletProduct;
      } else if (*k == "neel") {
        c.skqd.init.kind = InitKind::Neel;
      } else if (*k == "w") {
        c.skqd.init.kind = InitKind::WStateProduct;
      } else {
        r.fail("/init/kind", "kind", "expected \"singlet\", \"neel\" or \"w\"");
      }
    }
    if (const auto k = r.integer(i, "/init", "k")) {
      if (*k < 0 || *k > c.n) r.fail("/init/k", "k", "k must lie in [0, n]");
      c.skqd.init.k = static_cast<int>(*k);
    }
    if (const auto l = r.string(i, "/init", "layout")) {
      if (*l == "identity") {
        c.skqd.init.layout = Layout::Identity;
      } else if (*l == "snake") {
        c.skqd.init.layout = Layout::Snake;
      } else {
        r.fail("/init/layout", "layout", "expected \"identity\" or \"snake\"");
      }
    }
  }
  if (c.skqd.init.kind == InitKind::SingletProduct && c.n % 2 != 0) {
    r.fail("/init/kind", "kind", "singlet products need an even number of sites");
  }

  if (doc.contains("evolution")) {
    const json& e = doc.at("evolution");
    r.check_keys(e, "/evolution", {"dt", "d", "method", "reps", "tol"});
    if (auto v = r.number(e, "/evolution", "dt")) c.skqd.evolution.dt = *v;
    if (auto v = r.integer(e, "/evolution", "d")) {
      if (*v < 1 || *v > 1000) r.fail("/evolution/d", "d", "d must lie in [1, 1000]");
      c.skqd.evolution.d = static_cast<int>(*v);
    }
    const auto method = r.string(e, "/evolution", "method").value_or("trotter2");
    const auto reps = r.integer(e, "/evolution", "reps");
    const auto tol = r.number(e, "/evolution", "tol");
    if (method == "trotter2") {
      if (tol) r.fail("/evolution/tol", "tol", "tol applies to the exact method only");
      Trotter2Method t;
      if (reps) {
        if (*reps < 1 || *reps > 100000) r.fail("/evolution/reps", "reps", "reps must lie in [1, 100000]");
        t.reps = static_cast<int>(*reps);
      }
      c.skqd.evolution.method = t;
    } else if (method == "exact") {
      if (reps) r.fail("/evolution/reps", "reps", "reps applies to the trotter2 method only");
      ExactMethod x;
      if (tol) x.tol = *tol;
      c.skqd.evolution.method = x;
    } else {
      r.fail("/evolution/method", "method", "expected \"trotter2\" or \"exact\"");
    }
    try {
      c.skqd.evolution.validate();
    } catch (const InvalidArgument& err) {
      r.fail("/evolution", "evolution", err.what());
    }
  }

  if (auto v = r.unsigned_integer(doc, "", "shots")) {
    if (*v == 0) r.fail("/shots", "shots", "shots must be positive");
    c.skqd.shots = *v;
  }
  if (doc.contains("noise") && !doc.at("noise").is_null()) {
    const json& nz = doc.at("noise");
    r.check_keys(nz, "/noise", {"readout_flip_prob"});
    NoiseModel nm;
    if (auto p = r.number(nz, "/noise", "readout_flip_prob")) nm.readout_flip_prob = *p;
    if (!(nm.readout_flip_prob >= 0.0 && nm.readout_flip_prob < 1.0)) {
      r.fail("/noise/readout_flip_prob", "readout_flip_prob", "probability must lie in [0, 1)");
    }
    c.skqd.noise = nm;
  }
  if (doc.contains("filter_k") && !doc.at("filter_k").is_null()) {
    const auto k = r.integer(doc, "", "filter_k");
    if (*k < 0 || *k > c.n) r.fail("/filter_k", "filter_k", "filter_k must lie in [0, n]");
    c.skqd.filter_k = static_cast<int>(*k);
  }
  if (auto v = r.unsigned_integer(doc, "", "seed")) c.skqd.seed = *v;
  if (auto v = r.string(doc, "", "output_dir")) c.output_dir = *v;

  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    r.check_keys(s, "/sweep", {"hz_grid", "hz_min", "hz_max", "steps", "sector_window", "sectors", "reference"});
    SweepSpec sp;
    sp.hz_grid = read_grid(r, s, "/sweep", "hz_grid", "hz_min", "hz_max", "steps");
    if (auto w = r.integer(s, "/sweep", "sector_window")) {
      if (*w < 0) r.fail("/sweep/sector_window", "sector_window", "window must be non-negative");
      sp.sector_window = static_cast<int>(*w);
    }
    if (auto ks = r.array<int>(s, "/sweep", "sectors")) {
      for (int k : *ks) {
        if (k < 0 || k > c.n / 2) r.fail("/sweep/sectors", "sectors", "sectors must lie in [0, n/2]");
      }
      sp.sectors = *ks;
    }
    if (auto b = r.boolean(s, "/sweep", "reference")) sp.reference = *b;
    c.sweep = sp;
  }
  if (doc.contains("sparsity")) {
    const json& s = doc.at("sparsity");
    r.check_keys(s, "/sparsity",
                 {"delta_grid", "delta_min", "delta_max", "delta_steps", "hz_grid", "hz_min", "hz_max", "hz_steps"});
    SparsitySpec sp;
    sp.delta_grid = read_grid(r, s, "/sparsity", "delta_grid", "delta_min", "delta_max", "delta_steps");
    sp.hz_grid = read_grid(r, s, "/sparsity", "hz_grid", "hz_min", "hz_max", "hz_steps");
    c.sparsity = sp;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.string());
}

nlohmann::json RunConfig::echo() const {
  json j;
  json m = {{"n", n},
            {"J", model.J},
            {"delta", model.delta},
            {"h_z", model.h_z},
            {"h_x", model.h_x},
            {"geometry", geometry == GeometryKind::Chain ? "chain" : "rect"}};
  if (preset) m["preset"] = *preset;
  j["model"] = m;
  const json s = skqd::echo(skqd);
  j["init"] = s.at("init");
  j["evolution"] = s.at("evolution");
  j["shots"] = skqd.shots;
  if (skqd.noise) j["noise"] = s.at("noise");
  if (skqd.filter_k) j["filter_k"] = *skqd.filter_k;
  j["seed"] = skqd.seed;
  if (sweep) {
    json w = {{"hz_grid", sweep->hz_grid}, {"reference", sweep->reference}};
    if (sweep->sector_window) w["sector_window"] = *sweep->sector_window;
    if (!sweep->sectors.empty()) w["sectors"] = sweep->sectors;
    j["sweep"] = w;
  }
  if (sparsity) j["sparsity"] = {{"delta_grid", sparsity->delta_grid}, {"hz_grid", sparsity->hz_grid}};
  return j;
}

}  // namespace skqd
