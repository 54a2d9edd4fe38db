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

// Shared test helpers: seeded generators and brute-force oracles.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bipsym.hpp"

namespace bipsym::testing {

/// Random monomial connector over p0..p{ports-1}, each port used once.
/// Nesting is at most `depth` fusion levels.
inline AcTerm random_connector(std::mt19937_64& rng, int ports, int depth, bool constants = false) {
  std::vector<PortName> names;
  for (int i = 0; i < ports; ++i) names.push_back("p" + std::to_string(i));
  std::shuffle(names.begin(), names.end(), rng);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  auto build = [&](const auto& self, std::vector<PortName> ps, int d) -> AcTerm {
    if (ps.size() == 1 && (d <= 1 || pick(2) == 0)) return AcTerm::port(ps.front());
    std::size_t groups = d <= 1 ? ps.size() : 1 + pick(std::min<std::size_t>(ps.size(), 4));
    std::vector<std::vector<PortName>> split(groups);
    for (std::size_t k = 0; k < ps.size(); ++k) split[k < groups ? k : pick(groups)].push_back(ps[k]);
    std::vector<AcFactor> fs;
    for (auto& g : split) {
      AcTerm t = d <= 1 ? AcTerm::port(g.front()) : self(self, std::move(g), d - 1);
      fs.push_back(AcFactor{std::move(t), pick(2) == 0});
    }
    if (constants && pick(5) == 0) {
      fs.push_back(AcFactor{pick(2) == 0 ? AcTerm::one() : AcTerm::zero(), pick(2) == 0});
    }
    return fuse(std::move(fs));
  };
  return build(build, std::move(names), depth);
}

/// Direct membership test a ∈ |x| for monomial x. Ports of different
/// factors are disjoint, so a splits uniquely across the factors.
inline bool member(const AcTerm& x, const Interaction& a) {
  switch (x.kind()) {
    case AcTerm::Kind::Port:
      return a.size() == 1 && *a.begin() == x.port_name();
    case AcTerm::Kind::Zero:
      return false;
    case AcTerm::Kind::One:
      return a.empty();
    case AcTerm::Kind::Fusion:
      break;
  }
  bool any_trigger = false;
  bool trigger_joins = false;
  for (const auto& f : x.factors()) {
    const Interaction part = a.intersect(support(f.term));
    const bool in = member(f.term, part);
    if (!part.empty() && !in) return false;
    if (f.trigger) {
      any_trigger = true;
      trigger_joins = trigger_joins || in;
    }
  }
  if (any_trigger) return trigger_joins;
  for (const auto& f : x.factors()) {
    if (!member(f.term, a.intersect(support(f.term)))) return false;
  }
  return true;
}

/// Every subset of `universe`.
inline std::vector<Interaction> subsets(const Interaction& universe) {
  const auto& ps = universe.ports();
  std::vector<Interaction> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << ps.size()); ++m) {
    std::vector<PortName> v;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      if ((m >> i) & 1U) v.push_back(ps[i]);
    }
    out.emplace_back(std::move(v));
  }
  return out;
}

inline InteractionSet brute_interactions(const AcTerm& x) {
  InteractionSet out;
  for (auto& a : subsets(support(x))) {
    if (member(x, a)) out.insert(std::move(a));
  }
  return out;
}

/// Satisfying interactions of f over `universe`, by evaluating every valuation.
inline InteractionSet brute_sat(BddManager& mgr, BddRef f, const Interaction& universe) {
  InteractionSet out;
  for (auto& a : subsets(universe)) {
    Assignment v(mgr.num_vars(), false);
    for (const auto& p : a) v[mgr.level_of(p)] = true;
    if (mgr.eval(f, v)) out.insert(std::move(a));
  }
  return out;
}

inline Interaction ia(std::initializer_list<PortName> ps) { return Interaction(ps); }

}  // namespace bipsym::testing
