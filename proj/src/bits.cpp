// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/bits.hpp"

#include "skqd/errors.hpp"

namespace skqd {

std::string to_bitstring(Bits b, int n_sites) {
  std::string s(static_cast<std::size_t>(n_sites), '0');
  for (int i = 0; i < n_sites; ++i) {
    if (site_occupied(b, n_sites, i)) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

Bits from_bitstring(std::string_view s) {
  if (s.empty() || s.size() > static_cast<std::size_t>(kMaxSites)) {
    throw InvalidArgument("bitstring length must be in [1, 62], got " +
                          std::to_string(s.size()));
  }
  Bits b = 0;
  for (char c : s) {
    if (c != '0' && c != '1') {
      throw InvalidArgument("bitstring contains '" + std::string(1, c) + "'");
    }
    b = (b << 1) | static_cast<Bits>(c == '1');
  }
  return b;
}

}  // namespace skqd
