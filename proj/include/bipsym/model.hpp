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

// Flat composition pi(gamma(B1, ..., Bn)) of atomic labelled transition
// systems and its reference semantics. Everything here is written for
// clarity, not speed: the engines are checked against it.

#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bipsym/connector.hpp"
#include "bipsym/error.hpp"
#include "bipsym/rng.hpp"
#include "bipsym/interaction.hpp"

namespace bipsym {

using StateIndex = std::uint32_t;

struct Transition {
  StateIndex from = 0;
  Interaction label;
  StateIndex to = 0;

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Labelled transition system with its own ports. Transition labels are
/// non-empty subsets of `ports`.
struct AtomicBehavior {
  std::string name;
  std::vector<std::string> states;
  StateIndex init = 0;
  std::vector<PortName> ports;
  std::vector<Transition> transitions;

  [[nodiscard]] std::optional<StateIndex> state_index(const std::string& s) const {
    auto it = std::find(states.begin(), states.end(), s);
    if (it == states.end()) return std::nullopt;
    return static_cast<StateIndex>(it - states.begin());
  }

  friend bool operator==(const AtomicBehavior&, const AtomicBehavior&) = default;
};

/// Strict partial order on interactions: either an explicit list of
/// (lower, higher) pairs, closed transitively, or maximal progress
/// (a below a' iff a ⊊ a').
struct PriorityModel {
  enum class Kind { ExplicitPairs, MaximalProgress };

  Kind kind = Kind::ExplicitPairs;
  std::vector<std::pair<Interaction, Interaction>> pairs;

  static PriorityModel none() { return {}; }
  static PriorityModel maximal_progress() { return {Kind::MaximalProgress, {}}; }
  static PriorityModel explicit_pairs(std::vector<std::pair<Interaction, Interaction>> p) {
    return {Kind::ExplicitPairs, std::move(p)};
  }

  [[nodiscard]] bool is_maximal_progress() const noexcept { return kind == Kind::MaximalProgress; }

  /// Transitive closure of the explicit pairs: lower -> every higher.
  [[nodiscard]] std::map<Interaction, std::set<Interaction>> closure() const {
    std::map<Interaction, std::set<Interaction>> up;
    for (const auto& [lo, hi] : pairs) up[lo].insert(hi);
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& [lo, his] : up) {
        std::vector<Interaction> add;
        for (const auto& h : his) {
          auto it = up.find(h);
          if (it == up.end()) continue;
          for (const auto& h2 : it->second) {
            if (his.count(h2) == 0) add.push_back(h2);
          }
        }
        for (auto& h : add) changed = his.insert(std::move(h)).second || changed;
      }
    }
    return up;
  }

  friend bool operator==(const PriorityModel&, const PriorityModel&) = default;
};

struct Connector {
  std::string name;
  AcTerm term;

  friend bool operator==(const Connector&, const Connector&) = default;
};

struct SystemModel {
  std::string name = "system";
  std::vector<AtomicBehavior> atoms;
  std::vector<Connector> connectors;
  PriorityModel priority;

  friend bool operator==(const SystemModel&, const SystemModel&) = default;
};

/// Current state of every atom, positionally aligned with SystemModel::atoms.
using GlobalState = std::vector<StateIndex>;

struct GlobalStateHash {
  std::size_t operator()(const GlobalState& s) const noexcept {
    std::size_t h = s.size();
    for (auto v : s) h = h * 0x100000001b3ULL ^ (v + 0x9e3779b97f4a7c15ULL);
    return h;
  }
};

struct Diagnostic {
  std::string kind;      // e.g. "disjointness", "unbound port"
  std::string location;  // e.g. "atom B1", "connector c2"
  std::string message;
  int line = 0;  // 1-based; 0 when the model did not come from text
  int column = 0;
};

inline GlobalState initial_state(const SystemModel& system) {
  GlobalState s;
  s.reserve(system.atoms.size());
  for (const auto& a : system.atoms) s.push_back(a.init);
  return s;
}

/// "l1 l3 l5"
inline std::string state_text(const SystemModel& system, const GlobalState& state,
                              const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i != 0) out += sep;
    out += system.atoms.at(i).states.at(state[i]);
  }
  return out;
}

/// Stream of 64-bit values derived from (seed, index); used to give every
/// engine step its own reproducible seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s.front())) return false;
  return std::all_of(s.begin() + 1, s.end(), tail);
}

/// Empty iff the model is well formed.
inline std::vector<Diagnostic> validate(const SystemModel& system) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string kind, std::string where, std::string msg) {
    out.push_back(Diagnostic{std::move(kind), std::move(where), std::move(msg)});
  };

  std::map<PortName, std::vector<std::string>> owners;
  std::set<std::string> atom_names;
  for (const auto& atom : system.atoms) {
    const std::string where = "atom " + atom.name;
    if (!is_identifier(atom.name)) report("name", where, "atom name is not an identifier");
    if (!atom_names.insert(atom.name).second) report("duplicate", where, "duplicate atom name");
    if (atom.states.empty()) {
      report("init", where, "atom has no states");
    } else if (atom.init >= atom.states.size()) {
      report("init", where, "initial state out of range");
    }
    std::set<std::string> seen_states;
    for (const auto& s : atom.states) {
      if (!is_identifier(s)) report("name", where, "state name '" + s + "' is not an identifier");
      if (!seen_states.insert(s).second) report("duplicate", where, "duplicate state '" + s + "'");
    }
    std::set<PortName> seen_ports;
    for (const auto& p : atom.ports) {
      if (!is_identifier(p)) report("name", where, "port name '" + p + "' is not an identifier");
      if (!seen_ports.insert(p).second) {
        report("duplicate", where, "duplicate port '" + p + "'");
        continue;
      }
      owners[p].push_back(atom.name);
    }
    for (std::size_t k = 0; k < atom.transitions.size(); ++k) {
      const auto& t = atom.transitions[k];
      const std::string tw = where + ", transition " + std::to_string(k + 1);
      if (t.from >= atom.states.size() || t.to >= atom.states.size()) {
        report("transition", tw, "transition endpoint out of range");
      }
      if (t.label.empty()) report("label", tw, "transition label is empty");
      for (const auto& p : t.label) {
        if (seen_ports.count(p) == 0) report("label", tw, "label port '" + p + "' is not a port of the atom");
      }
    }
  }
  for (const auto& [p, who] : owners) {
    if (who.size() > 1) {
      std::string names;
      for (const auto& w : who) names += (names.empty() ? "" : ", ") + w;
      report("disjointness", "port " + p, "port '" + p + "' is shared by atoms " + names);
    }
  }

  std::set<std::string> connector_names;
  for (const auto& c : system.connectors) {
    const std::string where = "connector " + c.name;
    if (!is_identifier(c.name)) report("name", where, "connector name is not an identifier");
    if (!connector_names.insert(c.name).second) report("duplicate", where, "duplicate connector name");
    for (const auto& p : support(c.term)) {
      if (owners.count(p) == 0) report("unbound port", where, "port '" + p + "' belongs to no atom");
    }
  }

  if (system.priority.kind == PriorityModel::Kind::ExplicitPairs) {
    for (const auto& [lo, hi] : system.priority.pairs) {
      for (const auto* side : {&lo, &hi}) {
        for (const auto& p : *side) {
          if (owners.count(p) == 0) {
            report("unbound port", "priority", "port '" + p + "' belongs to no atom");
          }
        }
      }
    }
    for (const auto& [lo, his] : system.priority.closure()) {
      if (his.count(lo) != 0) {
        report("priority cycle", "priority",
               "priority pairs are not a strict order: {" + lo.str() + "} lies above itself");
      }
    }
  }
  return out;
}

inline void require_valid(const SystemModel& system) {
  auto diags = validate(system);
  if (diags.empty()) return;
  std::string msg = "invalid system '" + system.name + "':";
  for (const auto& d : diags) msg += "\n  " + d.kind + " (" + d.location + "): " + d.message;
  throw InputError(msg);
}

/// The interaction model: every interaction of every connector, without ∅.
inline InteractionSet gamma_of(const SystemModel& system) {
  InteractionSet g;
  for (const auto& c : system.connectors) {
    auto s = interactions_of(c.term);
    g.insert(s.begin(), s.end());
  }
  g.erase(Interaction{});
  return g;
}

/// Port ownership lookup plus the reference predicates. Construct once per
/// (valid) system and reuse.
class Semantics {
 public:
  explicit Semantics(const SystemModel& system) : system_(&system), gamma_(gamma_of(system)) {
    for (std::uint32_t i = 0; i < system.atoms.size(); ++i) {
      for (const auto& p : system.atoms[i].ports) owner_.emplace(p, i);
    }
    if (system.priority.kind == PriorityModel::Kind::ExplicitPairs) {
      dominators_ = system.priority.closure();
    }
  }

  [[nodiscard]] const SystemModel& system() const noexcept { return *system_; }
  [[nodiscard]] const InteractionSet& gamma() const noexcept { return gamma_; }

  [[nodiscard]] std::uint32_t owner(const PortName& p) const {
    auto it = owner_.find(p);
    if (it == owner_.end()) throw InputError("port '" + p + "' is not a port of the system");
    return it->second;
  }

  /// a ∩ P_i for every atom i touched by a.
  [[nodiscard]] std::map<std::uint32_t, Interaction> projections(const Interaction& a) const {
    std::map<std::uint32_t, std::vector<PortName>> parts;
    for (const auto& p : a) parts[owner(p)].push_back(p);
    std::map<std::uint32_t, Interaction> out;
    for (auto& [i, ports] : parts) out.emplace(i, Interaction(std::move(ports)));
    return out;
  }

  /// Every atom touched by a has a transition from its current state whose
  /// label is exactly its share of a.
  [[nodiscard]] bool act(const GlobalState& state, const Interaction& a) const {
    check_state(state);
    for (const auto& [i, part] : projections(a)) {
      const auto& atom = system_->atoms[i];
      bool found = std::any_of(atom.transitions.begin(), atom.transitions.end(), [&](const Transition& t) {
        return t.from == state[i] && t.label == part;
      });
      if (!found) return false;
    }
    return true;
  }

  [[nodiscard]] InteractionSet enabled(const GlobalState& state) const {
    InteractionSet out;
    for (const auto& a : gamma_) {
      if (act(state, a)) out.insert(a);
    }
    return out;
  }

  /// Keeps a iff no a' with a below a' is active. For maximal progress the
  /// candidate a' range over gamma; for explicit pairs over the closure of
  /// the pairs. Only activity of a' is checked, not membership in gamma.
  [[nodiscard]] InteractionSet filter_priority(const GlobalState& state,
                                               const InteractionSet& candidates) const {
    InteractionSet out;
    for (const auto& a : candidates) {
      if (!dominated(state, a)) out.insert(a);
    }
    return out;
  }

  [[nodiscard]] bool dominated(const GlobalState& state, const Interaction& a) const {
    if (system_->priority.is_maximal_progress()) {
      for (const auto& b : gamma_) {
        if (a.strict_subset_of(b) && act(state, b)) return true;
      }
      return false;
    }
    auto it = dominators_.find(a);
    if (it == dominators_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const Interaction& b) { return act(state, b); });
  }

  [[nodiscard]] InteractionSet survivors(const GlobalState& state) const {
    return filter_priority(state, enabled(state));
  }

  /// Every state reachable by firing a (not necessarily enabled) interaction
  /// that is active; one entry per nondeterministic branch.
  [[nodiscard]] std::vector<GlobalState> successors(const GlobalState& state,
                                                    const Interaction& a) const {
    std::vector<GlobalState> out{state};
    for (const auto& [i, part] : projections(a)) {
      std::vector<StateIndex> targets;
      for (const auto& t : system_->atoms[i].transitions) {
        if (t.from == state[i] && t.label == part) targets.push_back(t.to);
      }
      std::vector<GlobalState> next;
      for (const auto& s : out) {
        for (auto tgt : targets) {
          GlobalState n = s;
          n[i] = tgt;
          next.push_back(std::move(n));
        }
      }
      out = std::move(next);
    }
    return out;
  }

  /// Fires a (which must be ∅ or enabled); nondeterministic targets are
  /// chosen uniformly with rng.
  template <class Rng>
  [[nodiscard]] GlobalState fire(const GlobalState& state, const Interaction& a, Rng& rng) const {
    if (a.empty()) return state;
    if (gamma_.count(a) == 0 || !act(state, a)) {
      throw ContractViolation("interaction " + a.str() + " is not enabled");
    }
    return advance(*system_, state, projections(a), rng);
  }

  template <class Rng>
  static GlobalState advance(const SystemModel& system, const GlobalState& state,
                             const std::map<std::uint32_t, Interaction>& parts, Rng& rng) {
    GlobalState next = state;
    for (const auto& [i, part] : parts) {
      std::vector<StateIndex> targets;
      for (const auto& t : system.atoms[i].transitions) {
        if (t.from == state[i] && t.label == part) targets.push_back(t.to);
      }
      if (targets.empty()) throw ContractViolation("atom " + system.atoms[i].name + " cannot move");
      next[i] = targets.size() == 1 ? targets.front() : targets[rng() % targets.size()];
    }
    return next;
  }

  void check_state(const GlobalState& state) const {
    if (state.size() != system_->atoms.size()) {
      throw ContractViolation("global state has the wrong number of components");
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] >= system_->atoms[i].states.size()) {
        throw ContractViolation("global state entry out of range for atom " + system_->atoms[i].name);
      }
    }
  }

 private:
  const SystemModel* system_;
  InteractionSet gamma_;
  std::unordered_map<PortName, std::uint32_t> owner_;
  std::map<Interaction, std::set<Interaction>> dominators_;
};

inline bool act(const SystemModel& system, const GlobalState& state, const Interaction& a) {
  return Semantics(system).act(state, a);
}

inline InteractionSet enabled(const SystemModel& system, const GlobalState& state) {
  return Semantics(system).enabled(state);
}

inline InteractionSet filter_priority(const SystemModel& system, const GlobalState& state,
                                      const InteractionSet& candidates) {
  return Semantics(system).filter_priority(state, candidates);
}

/// One firing of a. ∅ leaves the state unchanged.
inline GlobalState step(const SystemModel& system, const GlobalState& state, const Interaction& a,
                        std::uint64_t seed = 0) {
  SplitMix64 rng(seed);
  return Semantics(system).fire(state, a, rng);
}

struct Reachability {
  std::vector<GlobalState> states;  // breadth-first discovery order
  bool truncated = false;
};

/// Breadth-first closure from the initial state under priority-filtered
/// enabled interactions, over every nondeterministic branch. Stops once
/// `bound` states are known.
inline Reachability reachable(const SystemModel& system, std::size_t bound) {
  if (bound == 0) throw InputError("reachable: bound must be positive");
  Semantics sem(system);
  Reachability out;
  std::unordered_map<GlobalState, bool, GlobalStateHash> seen;
  std::deque<GlobalState> queue;
  const GlobalState init = initial_state(system);
  seen.emplace(init, true);
  out.states.push_back(init);
  queue.push_back(init);
  while (!queue.empty()) {
    const GlobalState s = queue.front();
    queue.pop_front();
    for (const auto& a : sem.survivors(s)) {
      for (auto& n : sem.successors(s, a)) {
        if (seen.count(n) != 0) continue;
        if (out.states.size() >= bound) {
          out.truncated = true;
          return out;
        }
        seen.emplace(n, true);
        out.states.push_back(n);
        queue.push_back(std::move(n));
      }
    }
  }
  return out;
}

}  // namespace bipsym
