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

// Cross-engine check: survivor sets of both engines at every reachable state.

#pragma once

#include <cstddef>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bipsym/enum_engine.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"
#include "bipsym/symbolic_engine.hpp"

namespace bipsym {

struct Divergence {
  GlobalState state;
  InteractionSet enumerative;
  InteractionSet symbolic;
};

struct EquivalenceReport {
  std::size_t states = 0;  // states compared
  bool truncated = false;  // the bound cut exploration short
  std::vector<Divergence> divergences;

  [[nodiscard]] bool equivalent() const noexcept { return divergences.empty(); }
};

struct EquivalenceOptions {
  SymbolicOptions symbolic;
  /// Applied to the symbolic encoding before checking (negative controls).
  std::function<void(SystemEncoding&)> corrupt;
};

inline EquivalenceReport check_equivalence(const SystemModel& system, std::size_t bound,
                                           const EquivalenceOptions& options = {}) {
  require_valid(system);
  EnumEngine enumerative(system);
  SymbolicEngine symbolic(system, options.symbolic);
  if (options.corrupt) options.corrupt(symbolic.mutable_encoding());

  const Reachability reach = reachable(system, bound);
  EquivalenceReport report;
  report.truncated = reach.truncated;
  for (const auto& s : reach.states) {
    ++report.states;
    InteractionSet a = enumerative.survivor_set(s);
    InteractionSet b = symbolic.survivor_set(s);
    if (a != b) report.divergences.push_back({s, std::move(a), std::move(b)});
  }
  return report;
}

inline std::string describe(const SystemModel& system, const EquivalenceReport& report) {
  std::ostringstream os;
  if (report.equivalent()) {
    os << "equivalent, " << report.states << " states";
  } else {
    os << report.divergences.size() << " divergent of " << report.states << " states";
  }
  if (report.truncated) os << " (truncated)";
  for (const auto& d : report.divergences) {
    os << "\n  at (" << state_text(system, d.state) << "): enumerative " << d.enumerative << ", symbolic "
       << d.symbolic;
  }
  return os.str();
}

}  // namespace bipsym
