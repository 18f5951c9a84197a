// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skqd/hamiltonian.hpp"
#include "skqd/skqd.hpp"

namespace skqd {

struct MaterialPreset {
  std::string_view name;     // ASCII spelling accepted on the command line
  std::string_view formula;  // display form
  double J_meV;
  double delta;
  std::string_view citation;
};

std::span<const MaterialPreset> material_presets();

/// Case-insensitive lookup; nullptr if unknown.
const MaterialPreset* find_preset(std::string_view name);

struct SweepSpec {
  std::vector<double> hz_grid;
  std::optional<int> sector_window;
  std::vector<int> sectors;  // empty: all of 0..N/2
  bool reference = true;
};

struct SparsitySpec {
  std::vector<double> delta_grid;
  std::vector<double> hz_grid;
};

enum class GeometryKind { Chain, Rectangle };

struct RunConfig {
  int n = 0;
  GeometryKind geometry = GeometryKind::Chain;
  std::optional<std::string> preset;
  ModelParams model;  // geometry filled from n and kind
  SkqdConfig skqd;
  std::optional<SweepSpec> sweep;
  std::optional<SparsitySpec> sparsity;
  std::filesystem::path output_dir = ".";

  /// Rebuilds model.geometry after n or the geometry kind changed.
  void rebuild_geometry();
  /// Copies J and delta from a named preset.
  void apply_preset(std::string_view name);
  nlohmann::json echo() const;
};

/// Parses and validates a JSON config. Unknown keys and out-of-range values
/// raise ConfigError naming the key path and source line.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");

RunConfig load_config(const std::filesystem::path& path);

}  // namespace skqd
