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

// Symbolic engine. The whole system is encoded once as boolean functions:
//
//   f_B  behaviour: per atom, a one-hot current state and the port valuation
//        of one outgoing transition, or all ports false (idle)
//   f_C  connectors: per connector its causal-rule formula, with every port
//        outside the connector forced false
//   f_S  f_B ∧ f_C
//   f_P  priority pairs (a, a') over ports P and primed ports P'
//
// A step restricts f_S by the current state, removes every valuation that a
// higher priority valuation of the same state dominates, and picks one of
// the rest. No interaction list is built at any point of a step.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bipsym/bdd.hpp"
#include "bipsym/causal_tree.hpp"
#include "bipsym/connector.hpp"
#include "bipsym/engine.hpp"
#include "bipsym/error.hpp"
#include "bipsym/rng.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"

namespace bipsym {

/// Name of the variable for control state `state` of `atom`.
inline std::string state_var(const AtomicBehavior& atom, const std::string& state) {
  return atom.name + "." + state;
}

/// Name of the primed twin of port p.
inline std::string primed_var(const PortName& p) { return p + "'"; }

/// Per atom in declaration order: its state variables, then each port
/// immediately followed by its primed twin.
inline VarOrder variable_order(const SystemModel& system) {
  VarOrder order;
  for (const auto& atom : system.atoms) {
    for (const auto& s : atom.states) order.push_back(state_var(atom, s));
    for (const auto& p : atom.ports) {
      order.push_back(p);
      order.push_back(primed_var(p));
    }
  }
  return order;
}

namespace detail {

inline std::uint32_t port_level(BddManager& mgr, const PortName& p, bool primed) {
  return mgr.level_of(primed ? primed_var(p) : p);
}

/// Ports of `ports` true exactly when in a, over the (primed) port variables.
inline BddRef port_minterm(BddManager& mgr, const std::vector<PortName>& ports, const Interaction& a,
                           bool primed) {
  std::vector<std::pair<std::uint32_t, bool>> lits;
  lits.reserve(ports.size());
  for (const auto& p : ports) lits.emplace_back(port_level(mgr, p, primed), a.contains(p));
  return mgr.cube(std::move(lits));
}

}  // namespace detail

/// f_Bi. With `primed` the port literals use the primed variables while the
/// state variables stay shared, which gives f_Bi[x'/x].
inline BddRef encode_atom(const AtomicBehavior& atom, BddManager& mgr, bool primed = false) {
  const Interaction none;
  BddRef f = detail::port_minterm(mgr, atom.ports, none, primed);
  for (StateIndex q = 0; q < atom.states.size(); ++q) {
    BddRef moves = mgr.zero();
    for (const auto& t : atom.transitions) {
      if (t.from == q) moves = mgr.disj(moves, detail::port_minterm(mgr, atom.ports, t.label, primed));
    }
    if (mgr.is_false(moves)) continue;
    std::vector<std::pair<std::uint32_t, bool>> lits;
    for (StateIndex r = 0; r < atom.states.size(); ++r) {
      lits.emplace_back(mgr.level_of(state_var(atom, atom.states[r])), r == q);
    }
    f = mgr.disj(f, mgr.conj(mgr.cube(std::move(lits)), moves));
  }
  return f;
}

inline BddRef encode_behavior(const SystemModel& system, BddManager& mgr, bool primed = false) {
  BddRef f = mgr.one();
  for (const auto& atom : system.atoms) f = mgr.conj(f, encode_atom(atom, mgr, primed));
  return f;
}

/// ⋁_i (f_Ci ∧ ⋀_{p ∈ universe \ C_i} ¬p). Built from causal rules only.
inline BddRef encode_connectors(const std::vector<Connector>& connectors, const Interaction& universe,
                                BddManager& mgr, bool primed = false) {
  std::vector<PortName> all(universe.begin(), universe.end());
  const BddRef all_false = detail::port_minterm(mgr, all, Interaction{}, primed);
  const PortLevel level = [&](const PortName& p) { return detail::port_level(mgr, p, primed); };
  BddRef f = mgr.zero();
  for (const auto& c : connectors) {
    const Interaction inside = support(c.term);
    std::vector<std::uint32_t> levels;
    for (const auto& p : inside) levels.push_back(level(p));
    const BddRef outside_false = mgr.exists(all_false, mgr.var_set(levels));
    const BddRef fc = connector_formula(c.term, mgr, level);
    f = mgr.disj(f, mgr.conj(fc, outside_false));
  }
  return f;
}

/// Explicit form: ⋁ over pairs a below a' of minterm(a, P) ∧ minterm(a', P').
/// Maximal progress uses the strict-inclusion pairs of gamma; explicit pairs
/// are transitively closed first.
inline BddRef encode_priority(const PriorityModel& priority, const InteractionSet& gamma,
                              const Interaction& universe, BddManager& mgr) {
  std::vector<PortName> all(universe.begin(), universe.end());
  BddRef f = mgr.zero();
  auto add = [&](const Interaction& lo, const Interaction& hi) {
    f = mgr.disj(f, mgr.conj(detail::port_minterm(mgr, all, lo, false),
                             detail::port_minterm(mgr, all, hi, true)));
  };
  if (priority.is_maximal_progress()) {
    for (const auto& a : gamma) {
      for (const auto& b : gamma) {
        if (a.strict_subset_of(b)) add(a, b);
      }
    }
    return f;
  }
  for (const auto& [lo, his] : priority.closure()) {
    for (const auto& hi : his) add(lo, hi);
  }
  return f;
}

/// Maximal progress without listing gamma: f_C(P) ∧ f_C(P') ∧ (P ⊊ P').
/// Same function as encode_priority on the maximal-progress pairs.
inline BddRef encode_maximal_progress(const std::vector<Connector>& connectors,
                                      const Interaction& universe, BddManager& mgr) {
  BddRef sub = mgr.one();
  BddRef same = mgr.one();
  // Built bottom-up: each p sits right above its twin, so both stay linear.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> twins;
  for (const auto& p : universe) twins.emplace_back(mgr.level_of(p), mgr.level_of(primed_var(p)));
  std::sort(twins.rbegin(), twins.rend());
  for (const auto& [l, lp] : twins) {
    const BddRef x = mgr.var_at(l);
    const BddRef y = mgr.var_at(lp);
    sub = mgr.conj(mgr.apply(BddOp::Implies, x, y), sub);
    same = mgr.conj(mgr.negate(mgr.apply(BddOp::Xor, x, y)), same);
  }
  const BddRef strict = mgr.and_not(sub, same);
  return mgr.conj(mgr.conj(encode_connectors(connectors, universe, mgr, false),
                           encode_connectors(connectors, universe, mgr, true)),
                  strict);
}

enum class PriorityEncoding { Factored, Materialized };

struct EncodingStats {
  std::size_t fb_nodes = 0;
  std::size_t fc_nodes = 0;
  std::size_t fs_nodes = 0;
  std::size_t fp_nodes = 0;
};

struct SystemEncoding {
  std::unique_ptr<BddManager> mgr;
  std::vector<std::vector<std::uint32_t>> state_level;   // [atom][state]
  std::vector<std::vector<std::uint32_t>> port_level;    // [atom][port]
  std::vector<std::vector<std::uint32_t>> primed_level;  // [atom][port]
  std::vector<std::uint32_t> port_levels;                // every unprimed port, ascending
  BddRef primed_cube;                                    // positive cube over P'
  BddRef f_b, f_c, f_s, f_p;
  BddRef f_b_primed;      // f_B[x'/x]
  BddRef priority_guard;  // f_P ∧ f_B[x'/x]

  [[nodiscard]] EncodingStats stats() const {
    return {mgr->node_count(f_b), mgr->node_count(f_c), mgr->node_count(f_s), mgr->node_count(f_p)};
  }

  /// Literals fixing the state variables to `state`.
  [[nodiscard]] BddRef state_cube(const GlobalState& state) const {
    std::vector<std::pair<std::uint32_t, bool>> lits;
    for (std::size_t i = 0; i < state_level.size(); ++i) {
      for (std::size_t q = 0; q < state_level[i].size(); ++q) {
        lits.emplace_back(state_level[i][q], q == state[i]);
      }
    }
    return mgr->cube(std::move(lits));
  }
};

inline Interaction port_universe(const SystemModel& system) {
  std::vector<PortName> ports;
  for (const auto& atom : system.atoms) ports.insert(ports.end(), atom.ports.begin(), atom.ports.end());
  return Interaction(std::move(ports));
}

inline SystemEncoding build(const SystemModel& system,
                            PriorityEncoding encoding = PriorityEncoding::Factored) {
  require_valid(system);
  SystemEncoding enc;
  enc.mgr = std::make_unique<BddManager>(variable_order(system));
  BddManager& mgr = *enc.mgr;

  std::vector<std::uint32_t> primed;
  for (const auto& atom : system.atoms) {
    auto& sl = enc.state_level.emplace_back();
    for (const auto& s : atom.states) sl.push_back(mgr.level_of(state_var(atom, s)));
    auto& pl = enc.port_level.emplace_back();
    auto& ppl = enc.primed_level.emplace_back();
    for (const auto& p : atom.ports) {
      pl.push_back(mgr.level_of(p));
      ppl.push_back(mgr.level_of(primed_var(p)));
      enc.port_levels.push_back(pl.back());
      primed.push_back(ppl.back());
    }
  }
  enc.primed_cube = mgr.var_set(primed);

  const Interaction universe = port_universe(system);
  enc.f_b = encode_behavior(system, mgr);
  enc.f_c = encode_connectors(system.connectors, universe, mgr);
  enc.f_s = mgr.conj(enc.f_b, enc.f_c);
  if (system.priority.is_maximal_progress() && encoding == PriorityEncoding::Factored) {
    enc.f_p = encode_maximal_progress(system.connectors, universe, mgr);
  } else {
    enc.f_p = encode_priority(system.priority, gamma_of(system), universe, mgr);
  }
  enc.f_b_primed = encode_behavior(system, mgr, true);
  enc.priority_guard = mgr.conj(enc.f_p, enc.f_b_primed);
  mgr.compact({&enc.primed_cube, &enc.f_b, &enc.f_c, &enc.f_s, &enc.f_p, &enc.f_b_primed,
               &enc.priority_guard});
  return enc;
}

struct SymbolicOptions {
  PriorityEncoding priority_encoding = PriorityEncoding::Factored;
  /// Maximal progress only: skip the priority filter and instead grow the
  /// picked valuation until no enabled strict superset remains.
  bool greedy_maximal = false;
};

class SymbolicEngine {
 public:
  explicit SymbolicEngine(SystemModel system, SymbolicOptions options = {})
      : system_(std::move(system)),
        options_(options),
        enc_(build(system_, options.priority_encoding)),
        table_(system_) {
    if (options_.greedy_maximal && !system_.priority.is_maximal_progress()) {
      throw InputError("greedy maximal selection needs the maximal progress priority");
    }
    state_ = initial_state(system_);
  }

  // table_ points into system_
  SymbolicEngine(const SymbolicEngine&) = delete;
  SymbolicEngine& operator=(const SymbolicEngine&) = delete;

  [[nodiscard]] const SystemModel& system() const noexcept { return system_; }
  [[nodiscard]] const SystemEncoding& encoding() const noexcept { return enc_; }
  /// For test fixtures that tamper with the encoding.
  [[nodiscard]] SystemEncoding& mutable_encoding() noexcept { return enc_; }
  [[nodiscard]] EncodingStats stats() const { return enc_.stats(); }
  [[nodiscard]] const GlobalState& state() const noexcept { return state_; }
  void set_state(GlobalState s) {
    Semantics(system_).check_state(s);
    state_ = std::move(s);
  }

  StepOutcome step(std::uint64_t seed) {
    std::vector<TransitionTable::Part> parts;
    {
      Scratch scratch(*enc_.mgr);
      const BddRef s = options_.greedy_maximal ? greedy(state_, seed) : survivors(state_);
      auto values = enc_.mgr->pick_sat(s, seed);
      if (!values) return StepOutcome{true, Interaction{}, state_};
      parts = parts_of(*values);
    }
    SplitMix64 rng(mix_seed(seed, 1));
    state_ = table_.advance(state_, parts, rng);
    return StepOutcome{false, table_.interaction_of(parts), state_};
  }

  /// Valuations satisfying f_S at `state`, as interactions.
  [[nodiscard]] InteractionSet enabled_set(const GlobalState& state) {
    Semantics(system_).check_state(state);
    Scratch scratch(*enc_.mgr);
    return collect(enc_.mgr->restrict_cube(enc_.f_s, enc_.state_cube(state)));
  }

  /// Enabled valuations left after the priority filter.
  [[nodiscard]] InteractionSet survivor_set(const GlobalState& state) {
    Semantics(system_).check_state(state);
    Scratch scratch(*enc_.mgr);
    return collect(survivors(state));
  }

 private:
  // Everything built during a step is dropped again afterwards, so the node
  // store stays at its post-build size however long the engine runs.
  class Scratch {
   public:
    explicit Scratch(BddManager& mgr) : mgr_(mgr) { mgr_.checkpoint(); }
    ~Scratch() { mgr_.rollback(); }
    Scratch(const Scratch&) = delete;
    Scratch& operator=(const Scratch&) = delete;

   private:
    BddManager& mgr_;
  };

  BddRef survivors(const GlobalState& state) {
    check(state);
    BddManager& mgr = *enc_.mgr;
    const BddRef cube = enc_.state_cube(state);
    const BddRef enabled = mgr.restrict_cube(enc_.f_s, cube);
    if (mgr.is_false(enabled)) return enabled;
    const BddRef guard = mgr.restrict_cube(enc_.priority_guard, cube);
    const BddRef dominated = mgr.exists(guard, enc_.primed_cube);
    return mgr.and_not(enabled, dominated);
  }

  BddRef greedy(const GlobalState& state, std::uint64_t seed) {
    check(state);
    BddManager& mgr = *enc_.mgr;
    const BddRef enabled = mgr.restrict_cube(enc_.f_s, enc_.state_cube(state));
    BddRef current = enabled;
    for (std::uint64_t round = 0;; ++round) {
      auto values = mgr.pick_sat(current, mix_seed(seed, round));
      if (!values) return current;
      std::vector<std::pair<std::uint32_t, bool>> pos;
      std::vector<std::pair<std::uint32_t, bool>> exact;
      for (auto l : enc_.port_levels) {
        if ((*values)[l]) pos.emplace_back(l, true);
        exact.emplace_back(l, (*values)[l]);
      }
      const BddRef point = mgr.cube(exact);
      const BddRef larger = mgr.and_not(mgr.conj(enabled, mgr.cube(std::move(pos))), point);
      if (mgr.is_false(larger)) return point;
      current = larger;
    }
  }

  void check(const GlobalState& state) const {
    if (state.size() != system_.atoms.size()) {
      throw ContractViolation("global state has the wrong number of components");
    }
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] >= system_.atoms[i].states.size()) {
        throw ContractViolation("global state entry out of range for atom " + system_.atoms[i].name);
      }
    }
  }

  [[nodiscard]] std::vector<TransitionTable::Part> parts_of(const Assignment& values) const {
    std::vector<TransitionTable::Part> parts;
    for (std::uint32_t i = 0; i < enc_.port_level.size(); ++i) {
      std::uint64_t mask = 0;
      for (std::uint32_t b = 0; b < enc_.port_level[i].size(); ++b) {
        if (values[enc_.port_level[i][b]]) mask |= std::uint64_t{1} << b;
      }
      if (mask != 0) parts.push_back({i, mask});
    }
    return parts;
  }

  [[nodiscard]] InteractionSet collect(BddRef f) const {
    std::vector<std::pair<std::uint32_t, const PortName*>> names;
    for (std::uint32_t i = 0; i < enc_.port_level.size(); ++i) {
      for (std::uint32_t b = 0; b < enc_.port_level[i].size(); ++b) {
        names.emplace_back(enc_.port_level[i][b], &system_.atoms[i].ports[b]);
      }
    }
    std::sort(names.begin(), names.end());
    InteractionSet out;
    enc_.mgr->for_each_sat(f, enc_.port_levels, [&](const std::vector<bool>& values) {
      std::vector<PortName> ports;
      for (std::size_t k = 0; k < values.size(); ++k) {
        if (values[k]) ports.push_back(*names[k].second);
      }
      out.insert(Interaction(std::move(ports)));
    });
    return out;
  }

  SystemModel system_;
  SymbolicOptions options_;
  SystemEncoding enc_;
  TransitionTable table_;
  GlobalState state_;
};

}  // namespace bipsym
