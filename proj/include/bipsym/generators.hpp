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

// Model generators: the three-bit ripple counter, the bus clusters, the
// preemptable tasks family and seeded random systems.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bipsym/connector.hpp"
#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"

namespace bipsym {

/// Modulo-8 counter: three modulo-2 counters chained by the connector
/// p' [[q r]' [[s t]' u]].
inline SystemModel modulo8() {
  auto counter = [](std::string name, std::string l0, std::string l1, PortName in, PortName out) {
    AtomicBehavior a;
    a.name = std::move(name);
    a.states = {std::move(l0), std::move(l1)};
    a.init = 0;
    a.ports = {in, out};
    a.transitions = {{0, Interaction{in}, 1}, {1, Interaction{in, out}, 0}};
    return a;
  };
  SystemModel m;
  m.name = "modulo8";
  m.atoms = {counter("B1", "l1", "l2", "p", "q"), counter("B2", "l3", "l4", "r", "s"),
             counter("B3", "l5", "l6", "t", "u")};
  AcTerm inner = fuse({trig(fuse({sync("s"), sync("t")})), sync("u")});
  AcTerm middle = fuse({trig(fuse({sync("q"), sync("r")})), sync(std::move(inner))});
  m.connectors = {{"x", fuse({trig("p"), sync(std::move(middle))})}};
  m.priority = PriorityModel::maximal_progress();
  return m;
}

/// N clusters of four atoms. Atom i of cluster k alternates A -c-> B -s-> A
/// (or A -s-> B -c-> A when `reversed`). Per cluster: four singleton
/// connectors on the c ports and the bus s1' s2' s3' s4.
inline SystemModel gen_bus(int n, bool reversed = false) {
  if (n < 1) throw InputError("bus: N must be at least 1");
  SystemModel m;
  m.name = "bus" + std::to_string(n);
  for (int k = 1; k <= n; ++k) {
    const std::string suffix = std::to_string(k) + "_";
    std::vector<AcFactor> bus;
    for (int i = 1; i <= 4; ++i) {
      const PortName c = "c" + suffix + std::to_string(i);
      const PortName s = "s" + suffix + std::to_string(i);
      AtomicBehavior a;
      a.name = "B" + suffix + std::to_string(i);
      a.states = {"A", "B"};
      a.init = 0;
      a.ports = {c, s};
      const PortName& first = reversed ? s : c;
      const PortName& second = reversed ? c : s;
      a.transitions = {{0, Interaction{first}, 1}, {1, Interaction{second}, 0}};
      m.atoms.push_back(std::move(a));
      m.connectors.push_back({"single" + suffix + std::to_string(i), fuse({sync(c)})});
      bus.push_back(i < 4 ? trig(s) : sync(s));
    }
    m.connectors.push_back({"bus" + std::to_string(k), fuse(std::move(bus))});
  }
  m.priority = PriorityModel::maximal_progress();
  return m;
}

/// N tasks on M processors. Task ports T<j>_{b,f,p,r}<i> per processor i,
/// processor ports P<i>_s and P<i>_e. For each ordered pair of distinct
/// tasks (T1, T2) and processor i: [b_T2 s_i]' p_T1 (start, preempting T1)
/// and [f_T1 e_i]' r_T2 (finish, resuming T2).
inline SystemModel gen_tasks(int n, int m) {
  if (n < 2) throw InputError("tasks: N must be at least 2");
  if (m < 1) throw InputError("tasks: M must be at least 1");
  auto tp = [](int task, const char* kind, int proc) {
    return "T" + std::to_string(task) + "_" + kind + std::to_string(proc);
  };
  auto pp = [](int proc, const char* kind) { return "P" + std::to_string(proc) + "_" + kind; };

  SystemModel sys;
  sys.name = "tasks" + std::to_string(n) + "x" + std::to_string(m);
  for (int j = 1; j <= n; ++j) {
    AtomicBehavior t;
    t.name = "T" + std::to_string(j);
    t.states = {"s"};
    t.init = 0;
    for (int i = 1; i <= m; ++i) {
      t.states.push_back("c" + std::to_string(i));
      t.states.push_back("w" + std::to_string(i));
    }
    for (int i = 1; i <= m; ++i) {
      for (const char* kind : {"b", "f", "p", "r"}) t.ports.push_back(tp(j, kind, i));
      const StateIndex c = static_cast<StateIndex>(2 * i - 1);
      const StateIndex w = c + 1;
      t.transitions.push_back({0, Interaction{tp(j, "b", i)}, c});
      t.transitions.push_back({c, Interaction{tp(j, "f", i)}, 0});
      t.transitions.push_back({c, Interaction{tp(j, "p", i)}, w});
      t.transitions.push_back({w, Interaction{tp(j, "r", i)}, c});
    }
    sys.atoms.push_back(std::move(t));
  }
  for (int i = 1; i <= m; ++i) {
    AtomicBehavior p;
    p.name = "P" + std::to_string(i);
    p.states = {"l0", "l1", "l2"};
    p.init = 0;
    p.ports = {pp(i, "s"), pp(i, "e")};
    const Interaction s{pp(i, "s")};
    const Interaction e{pp(i, "e")};
    p.transitions = {{0, s, 1}, {1, e, 0}, {1, s, 2}, {2, e, 1}};
    sys.atoms.push_back(std::move(p));
  }
  for (int t1 = 1; t1 <= n; ++t1) {
    for (int t2 = 1; t2 <= n; ++t2) {
      if (t1 == t2) continue;
      for (int i = 1; i <= m; ++i) {
        const std::string tag = std::to_string(t1) + "_" + std::to_string(t2) + "_" + std::to_string(i);
        sys.connectors.push_back(
            {"start" + tag,
             fuse({trig(fuse({sync(tp(t2, "b", i)), sync(pp(i, "s"))})), sync(tp(t1, "p", i))})});
        sys.connectors.push_back(
            {"finish" + tag,
             fuse({trig(fuse({sync(tp(t1, "f", i)), sync(pp(i, "e"))})), sync(tp(t2, "r", i))})});
      }
    }
  }
  sys.priority = PriorityModel::maximal_progress();
  return sys;
}

/// Upper limits for gen_random.
struct RandomBounds {
  int atoms = 4;
  int states = 3;
  int ports = 2;   // per atom
  int depth = 3;   // connector nesting
};

namespace detail {

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

}  // namespace detail

/// Random monomial connector over the given (distinct) ports. With
/// `constants`, some subterms are replaced by 0 or 1 leaves.
inline AcTerm random_term(std::mt19937_64& rng, std::vector<PortName> ports, int depth,
                          bool constants = false) {
  using detail::below;
  if (constants && below(rng, 8) == 0) return below(rng, 2) == 0 ? AcTerm::zero() : AcTerm::one();
  if (ports.size() == 1 && (depth <= 0 || below(rng, 3) != 0)) return AcTerm::port(ports.front());
  if (ports.empty()) return AcTerm::one();
  // Shuffle, then cut into 1..min(3, |ports|) non-empty groups.
  for (std::size_t i = ports.size(); i > 1; --i) std::swap(ports[i - 1], ports[below(rng, i)]);
  std::size_t groups = 1 + below(rng, std::min<std::size_t>(3, ports.size()));
  if (depth <= 1) groups = ports.size();
  std::vector<std::vector<PortName>> parts(groups);
  for (std::size_t k = 0; k < ports.size(); ++k) {
    parts[k < groups ? k : below(rng, groups)].push_back(ports[k]);
  }
  std::vector<AcFactor> factors;
  for (auto& part : parts) {
    AcTerm sub = depth <= 1 ? AcTerm::port(part.front()) : random_term(rng, std::move(part), depth - 1, constants);
    factors.push_back(AcFactor{std::move(sub), below(rng, 2) == 0});
  }
  if (constants && below(rng, 6) == 0) factors.push_back(AcFactor{AcTerm::one(), below(rng, 2) == 0});
  return fuse(std::move(factors));
}

/// Deterministic random system within `bounds`. Port names are a<i>p<j>,
/// states q<k>. Deadlocks are allowed.
inline SystemModel gen_random(std::uint64_t seed, const RandomBounds& bounds = {}) {
  using detail::below;
  if (bounds.atoms < 1 || bounds.states < 1 || bounds.ports < 1 || bounds.depth < 1) {
    throw InputError("random: every bound must be at least 1");
  }
  std::mt19937_64 rng(seed);
  SystemModel m;
  m.name = "random" + std::to_string(seed);
  std::vector<PortName> all;
  const int n = 1 + static_cast<int>(below(rng, bounds.atoms));
  for (int i = 0; i < n; ++i) {
    AtomicBehavior a;
    a.name = "a" + std::to_string(i);
    const auto states = 1 + below(rng, bounds.states);
    for (std::uint64_t k = 0; k < states; ++k) a.states.push_back("q" + std::to_string(k));
    a.init = static_cast<StateIndex>(below(rng, states));
    const auto ports = 1 + below(rng, bounds.ports);
    for (std::uint64_t k = 0; k < ports; ++k) a.ports.push_back(a.name + "p" + std::to_string(k));
    all.insert(all.end(), a.ports.begin(), a.ports.end());
    for (StateIndex q = 0; q < states; ++q) {
      const auto out = below(rng, 3);
      for (std::uint64_t t = 0; t < out; ++t) {
        std::vector<PortName> label;
        const std::uint64_t mask = 1 + below(rng, (std::uint64_t{1} << ports) - 1);
        for (std::uint64_t k = 0; k < ports; ++k) {
          if ((mask >> k) & 1U) label.push_back(a.ports[k]);
        }
        Transition tr{q, Interaction(std::move(label)), static_cast<StateIndex>(below(rng, states))};
        if (std::find(a.transitions.begin(), a.transitions.end(), tr) == a.transitions.end()) {
          a.transitions.push_back(std::move(tr));
        }
      }
    }
    m.atoms.push_back(std::move(a));
  }

  auto random_subset = [&](std::size_t max) {
    std::vector<PortName> pick = all;
    for (std::size_t i = pick.size(); i > 1; --i) std::swap(pick[i - 1], pick[below(rng, i)]);
    pick.resize(1 + below(rng, std::min(max, pick.size())));
    return pick;
  };

  const auto connectors = 1 + below(rng, 3);
  for (std::uint64_t c = 0; c < connectors; ++c) {
    m.connectors.push_back({"k" + std::to_string(c), fuse({sync(random_term(rng, random_subset(4), bounds.depth))})});
    // A connector is always a fusion at top level; drop the extra wrapper.
    auto& term = m.connectors.back().term;
    if (!term.factors().front().term.is_leaf()) term = AcTerm(term.factors().front().term);
  }

  switch (below(rng, 3)) {
    case 0:
      m.priority = PriorityModel::maximal_progress();
      break;
    case 1:
      m.priority = PriorityModel::none();
      break;
    default: {
      Interaction lo(random_subset(3));
      Interaction hi(random_subset(3));
      if (lo != hi) m.priority = PriorityModel::explicit_pairs({{lo, hi}});
      break;
    }
  }
  return m;
}

}  // namespace bipsym
