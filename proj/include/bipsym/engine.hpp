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

// Pieces shared by the enumerative and the symbolic engine: the step result,
// execution traces, and a compact transition table for firing interactions.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"

namespace bipsym {

struct StepOutcome {
  bool deadlock = false;
  Interaction chosen;  // empty on deadlock
  GlobalState next;    // unchanged state on deadlock
};

struct TraceEntry {
  Interaction interaction;
  GlobalState state;  // state after firing
};

struct Trace {
  GlobalState initial;
  std::vector<TraceEntry> steps;
  bool deadlocked = false;
  std::int64_t elapsed_ns = 0;
};

/// Runs up to `steps` engine iterations from the engine's current state.
/// Step k uses seed mix_seed(seed, k), so a trace is a pure function of
/// (model, seed). Stops early on deadlock.
template <class Engine>
Trace run(Engine& engine, std::size_t steps, std::uint64_t seed) {
  Trace trace;
  trace.initial = engine.state();
  trace.steps.reserve(steps);
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t k = 0; k < steps; ++k) {
    StepOutcome out = engine.step(mix_seed(seed, k));
    if (out.deadlock) {
      trace.deadlocked = true;
      break;
    }
    trace.steps.push_back(TraceEntry{std::move(out.chosen), std::move(out.next)});
  }
  trace.elapsed_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

/// Per-atom transitions indexed by source state, with labels stored as
/// bitmasks over the atom's own ports (at most 64 ports per atom).
class TransitionTable {
 public:
  /// a ∩ P_i as a mask over atom i's ports.
  struct Part {
    std::uint32_t atom;
    std::uint64_t mask;
  };

  explicit TransitionTable(const SystemModel& system) : system_(&system) {
    out_.resize(system.atoms.size());
    for (std::uint32_t i = 0; i < system.atoms.size(); ++i) {
      const auto& atom = system.atoms[i];
      if (atom.ports.size() > 64) {
        throw InputError("atom " + atom.name + " has more than 64 ports");
      }
      for (std::uint32_t b = 0; b < atom.ports.size(); ++b) ports_.emplace(atom.ports[b], PortRef{i, b});
      out_[i].resize(atom.states.size());
      for (const auto& t : atom.transitions) {
        std::uint64_t mask = 0;
        for (const auto& p : t.label) mask |= bit_of(i, p);
        out_[i][t.from].push_back({mask, t.to});
      }
    }
  }

  struct PortRef {
    std::uint32_t atom;
    std::uint32_t bit;
  };

  [[nodiscard]] std::optional<PortRef> find_port(const PortName& p) const {
    auto it = ports_.find(p);
    if (it == ports_.end()) return std::nullopt;
    return it->second;
  }

  /// Parts ordered by atom index.
  [[nodiscard]] std::vector<Part> parts_of(const Interaction& a) const {
    std::vector<Part> parts;
    for (const auto& p : a) {
      auto ref = find_port(p);
      if (!ref) throw InputError("port '" + p + "' is not a port of the system");
      auto it = std::find_if(parts.begin(), parts.end(), [&](const Part& x) { return x.atom == ref->atom; });
      if (it == parts.end()) {
        parts.push_back({ref->atom, std::uint64_t{1} << ref->bit});
      } else {
        it->mask |= std::uint64_t{1} << ref->bit;
      }
    }
    std::sort(parts.begin(), parts.end(), [](const Part& x, const Part& y) { return x.atom < y.atom; });
    return parts;
  }

  [[nodiscard]] bool has(std::uint32_t atom, StateIndex state, std::uint64_t mask) const {
    for (const auto& e : out_[atom][state]) {
      if (e.mask == mask) return true;
    }
    return false;
  }

  /// Act predicate on precompiled parts.
  [[nodiscard]] bool active(const GlobalState& state, const std::vector<Part>& parts) const {
    for (const auto& part : parts) {
      if (!has(part.atom, state[part.atom], part.mask)) return false;
    }
    return true;
  }

  /// Moves every participating atom along a transition labelled with its
  /// part; ties between several such transitions are broken with rng.
  template <class Rng>
  [[nodiscard]] GlobalState advance(const GlobalState& state, const std::vector<Part>& parts,
                                    Rng& rng) const {
    GlobalState next = state;
    for (const auto& part : parts) {
      const auto& edges = out_[part.atom][state[part.atom]];
      std::uint32_t count = 0;
      StateIndex chosen = 0;
      for (const auto& e : edges) {
        if (e.mask == part.mask) {
          // reservoir sampling keeps the choice uniform without a buffer
          ++count;
          if (count == 1 || rng() % count == 0) chosen = e.to;
        }
      }
      if (count == 0) {
        throw ContractViolation("atom " + system_->atoms[part.atom].name + " has no matching transition");
      }
      next[part.atom] = chosen;
    }
    return next;
  }

  [[nodiscard]] const PortName& port_name(std::uint32_t atom, std::uint32_t bit) const {
    return system_->atoms[atom].ports[bit];
  }

  [[nodiscard]] Interaction interaction_of(const std::vector<Part>& parts) const {
    std::vector<PortName> ports;
    for (const auto& part : parts) {
      for (std::uint32_t b = 0; b < 64; ++b) {
        if ((part.mask >> b) & 1U) ports.push_back(port_name(part.atom, b));
      }
    }
    return Interaction(std::move(ports));
  }

 private:
  struct Edge {
    std::uint64_t mask;
    StateIndex to;
  };

  [[nodiscard]] std::uint64_t bit_of(std::uint32_t atom, const PortName& p) const {
    auto it = ports_.find(p);
    if (it == ports_.end() || it->second.atom != atom) {
      throw InputError("label port '" + p + "' is not a port of atom " + system_->atoms[atom].name);
    }
    return std::uint64_t{1} << it->second.bit;
  }

  const SystemModel* system_;
  std::unordered_map<PortName, PortRef> ports_;
  std::vector<std::vector<std::vector<Edge>>> out_;  // [atom][state]
};

}  // namespace bipsym
