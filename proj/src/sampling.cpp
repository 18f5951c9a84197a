// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "skqd/errors.hpp"
#include "skqd/rng.hpp"

namespace skqd {

std::uint64_t SampleTable::total() const {
  std::uint64_t s = 0;
  for (const auto& [b, c] : counts) s += c;
  return s;
}

SampleTable sample(const State& s, std::uint64_t shots, std::uint64_t seed, int krylov_step) {
  if (shots == 0) throw InvalidArgument("cannot sample zero shots");
  const std::size_t d = s.dim();
  // Cumulative distribution over the nonzero amplitudes only.
  std::vector<std::size_t> support;
  std::vector<double> cdf;
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double p = std::norm(s.amps[i]);
    if (p == 0.0) continue;
    acc += p;
    support.push_back(i);
    cdf.push_back(acc);
  }
  if (support.empty()) throw InvalidArgument("cannot sample the zero vector");

  const CounterRng rng(seed);
  std::vector<std::uint32_t> hits(support.size(), 0);
  std::vector<std::size_t> draws(shots);
#pragma omp parallel for schedule(static) if (shots > 65536)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(shots); ++k) {
    const double u = rng.uniform_at(static_cast<std::uint64_t>(k)) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    draws[static_cast<std::size_t>(k)] = static_cast<std::size_t>(it - cdf.begin());
  }
  for (std::size_t idx : draws) ++hits[idx];

  SampleTable t;
  t.n_sites = s.n_sites();
  t.meta.krylov_step = krylov_step;
  t.meta.shots_requested = shots;
  t.meta.seed = seed;
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (hits[j] != 0) t.counts.emplace_back(s.space->state(support[j]), hits[j]);
  }
  // Space order is lexicographic already.
  return t;
}

SampleTable apply_readout_noise(const SampleTable& t, const NoiseModel& m, std::uint64_t seed) {
  const double p = m.readout_flip_prob;
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("readout flip probability must lie in [0, 1)");
  if (p == 0.0) return t;
  const int n = t.n_sites;
  CounterRng rng(seed);
  std::map<Bits, std::uint64_t> out;
  for (const auto& [b, c] : t.counts) {
    for (std::uint64_t shot = 0; shot < c; ++shot) {
      Bits x = b;
      for (int site = 0; site < n; ++site) {
        if (rng.uniform() < p) x ^= site_bit(n, site);
      }
      ++out[x];
    }
  }
  SampleTable r;
  r.n_sites = n;
  r.meta = t.meta;
  r.counts.assign(out.begin(), out.end());
  return r;
}

SampleTable filter_sector(const SampleTable& t, int k) {
  SampleTable r;
  r.n_sites = t.n_sites;
  r.meta = t.meta;
  r.meta.filtered = true;
  r.meta.sector = k;
  for (const auto& [b, c] : t.counts) {
    if (hamming_weight(b) == k) {
      r.counts.emplace_back(b, c);
    } else {
      r.meta.shots_discarded += c;
    }
  }
  return r;
}

MergedBasis merge_tables(std::span<const SampleTable> tables) {
  MergedBasis m;
  if (tables.empty()) return m;
  m.n_sites = tables.front().n_sites;
  std::vector<std::pair<Bits, std::uint64_t>> all;
  for (const auto& t : tables) {
    if (t.n_sites != m.n_sites) throw DimensionError("sample tables have different site counts");
    all.insert(all.end(), t.counts.begin(), t.counts.end());
  }
  std::sort(all.begin(), all.end());
  for (const auto& [b, c] : all) {
    if (!m.bitstrings.empty() && m.bitstrings.back() == b) {
      m.multiplicity.back() += c;
    } else {
      m.bitstrings.push_back(b);
      m.multiplicity.push_back(c);
    }
  }
  return m;
}

void write_jsonl(std::ostream& os, const SampleTable& t) {
  nlohmann::json meta{{"n_sites", t.n_sites},
                      {"krylov_step", t.meta.krylov_step},
                      {"shots_requested", t.meta.shots_requested},
                      {"shots_discarded", t.meta.shots_discarded},
                      {"filtered", t.meta.filtered},
                      {"seed", t.meta.seed}};
  meta["sector"] = t.meta.sector ? nlohmann::json(*t.meta.sector) : nlohmann::json(nullptr);
  os << nlohmann::json{{"meta", meta}}.dump() << '\n';
  for (const auto& [b, c] : t.counts) {
    os << nlohmann::json{{"bitstring", to_bitstring(b, t.n_sites)}, {"count", c}}.dump() << '\n';
  }
}

SampleTable read_jsonl(std::istream& is) {
  SampleTable t;
  std::string line;
  bool have_meta = false;
  std::map<Bits, std::uint64_t> counts;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgument("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.contains("meta")) {
      const auto& m = j.at("meta");
      t.n_sites = m.at("n_sites").get<int>();
      t.meta.krylov_step = m.value("krylov_step", 0);
      t.meta.shots_requested = m.value("shots_requested", std::uint64_t{0});
      t.meta.shots_discarded = m.value("shots_discarded", std::uint64_t{0});
      t.meta.filtered = m.value("filtered", false);
      t.meta.seed = m.value("seed", std::uint64_t{0});
      if (m.contains("sector") && !m.at("sector").is_null()) t.meta.sector = m.at("sector").get<int>();
      have_meta = true;
      continue;
    }
    const auto s = j.at("bitstring").get<std::string>();
    if (t.n_sites == 0) t.n_sites = static_cast<int>(s.size());
    if (static_cast<int>(s.size()) != t.n_sites) {
      throw DimensionError("line " + std::to_string(line_no) + ": bitstring length differs from n_sites");
    }
    counts[from_bitstring(s)] += j.at("count").get<std::uint64_t>();
  }
  t.counts.assign(counts.begin(), counts.end());
  if (!have_meta) {
    t.meta.shots_requested = t.total();
  } else if (t.total() + t.meta.shots_discarded != t.meta.shots_requested) {
    throw InvalidArgument("sample counts do not add up to shots_requested");
  }
  return t;
}

}  // namespace skqd
