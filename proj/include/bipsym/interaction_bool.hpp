/*
 * Copyright 2026 The bipsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Bijection between sets of interactions over a port universe U and boolean
// functions over U: an interaction is the valuation that sets exactly its
// ports to true.

#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "bipsym/bdd.hpp"
#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"

namespace bipsym {

/// Minterm of `a` over `universe`: ports of a true, the rest false.
inline BddRef minterm(const Interaction& a, const Interaction& universe, BddManager& mgr) {
  if (!a.subset_of(universe)) {
    throw InputError("interaction " + a.str() + " is not within the port universe");
  }
  std::vector<std::pair<std::uint32_t, bool>> lits;
  lits.reserve(universe.size());
  for (const auto& p : universe) lits.emplace_back(mgr.level_of(p), a.contains(p));
  return mgr.cube(std::move(lits));
}

/// Disjunction of one full minterm per interaction.
inline BddRef interactions_to_bool(const InteractionSet& gamma, const Interaction& universe,
                                   BddManager& mgr) {
  BddRef f = mgr.zero();
  for (const auto& a : gamma) f = mgr.disj(f, minterm(a, universe, mgr));
  return f;
}

/// Inverse of interactions_to_bool. f must only depend on universe ports.
inline InteractionSet bool_to_interactions(BddRef f, const Interaction& universe,
                                           const BddManager& mgr) {
  std::vector<std::pair<std::uint32_t, const PortName*>> by_level;
  by_level.reserve(universe.size());
  for (const auto& p : universe) by_level.emplace_back(mgr.level_of(p), &p);
  std::sort(by_level.begin(), by_level.end());
  std::vector<std::uint32_t> levels;
  levels.reserve(by_level.size());
  for (const auto& [l, _] : by_level) levels.push_back(l);

  InteractionSet out;
  mgr.for_each_sat(f, levels, [&](const std::vector<bool>& values) {
    std::vector<PortName> ports;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k]) ports.push_back(*by_level[k].second);
    }
    out.insert(Interaction(std::move(ports)));
  });
  return out;
}

}  // namespace bipsym
