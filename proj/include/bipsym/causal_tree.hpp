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

// Causal trees: forests of interaction-labelled nodes where a node may take
// part in an interaction only if its parent does. A connector is translated
// into a causal tree, and the tree into a conjunction of causal rules
// (p => m1 | m2 | ...) plus a clause requiring some root port. That formula
// is the boolean encoding of the connector, obtained without enumerating
// its interactions.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bipsym/bdd.hpp"
#include "bipsym/connector.hpp"
#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"

namespace bipsym {

struct CausalNode {
  Interaction label;
  std::vector<CausalNode> children;

  friend bool operator==(const CausalNode&, const CausalNode&) = default;
  friend auto operator<=>(const CausalNode& a, const CausalNode& b) {
    if (auto c = a.label <=> b.label; c != 0) return c;
    return std::lexicographical_compare_three_way(a.children.begin(), a.children.end(),
                                                  b.children.begin(), b.children.end());
  }
};

/// Parallel composition of the roots. Sibling order carries no meaning; use
/// canonical() or equivalent() to compare.
struct CausalTree {
  std::vector<CausalNode> roots;

  [[nodiscard]] bool empty() const noexcept { return roots.empty(); }
  friend bool operator==(const CausalTree&, const CausalTree&) = default;
};

/// a -> (children)
inline CausalNode cnode(Interaction label, std::vector<CausalNode> children = {}) {
  return CausalNode{std::move(label), std::move(children)};
}

/// Chain a1 -> a2 -> ... -> an.
inline CausalNode chain(std::vector<Interaction> labels) {
  if (labels.empty()) throw InputError("chain needs at least one label");
  CausalNode node{labels.back(), {}};
  for (std::size_t i = labels.size() - 1; i-- > 0;) node = CausalNode{labels[i], {std::move(node)}};
  return node;
}

namespace detail {

inline void sort_forest(std::vector<CausalNode>& forest) {
  for (auto& n : forest) sort_forest(n.children);
  std::sort(forest.begin(), forest.end());
}

/// t -> u for a forest t: every root of t gains u as extra children.
inline std::vector<CausalNode> attach(std::vector<CausalNode> cause,
                                      const std::vector<CausalNode>& effect) {
  for (auto& root : cause) root.children.insert(root.children.end(), effect.begin(), effect.end());
  return cause;
}

inline std::vector<CausalNode> tau_rec(const AcTerm& term) {
  switch (term.kind()) {
    case AcTerm::Kind::Port:
      return {cnode(Interaction{term.port_name()})};
    case AcTerm::Kind::Zero:
      return {};
    case AcTerm::Kind::One:
      return {cnode(Interaction{})};
    case AcTerm::Kind::Fusion:
      break;
  }
  const auto& fs = term.factors();
  if (fs.size() == 1) return tau_rec(fs.front().term);

  std::size_t triggers = 0;
  for (const auto& f : fs) triggers += f.trigger ? 1 : 0;

  if (triggers == 1 && fs.front().trigger) {
    // [x]' [y1] ... [yn]  ->  tau(x) -> (tau(y1) + ... + tau(yn))
    std::vector<CausalNode> effect;
    for (std::size_t i = 1; i < fs.size(); ++i) {
      auto sub = tau_rec(fs[i].term);
      effect.insert(effect.end(), std::make_move_iterator(sub.begin()),
                    std::make_move_iterator(sub.end()));
    }
    return attach(tau_rec(fs.front().term), effect);
  }
  if (fs.size() == 2 && triggers == 2) {
    auto left = tau_rec(fs[0].term);
    auto right = tau_rec(fs[1].term);
    left.insert(left.end(), std::make_move_iterator(right.begin()),
                std::make_move_iterator(right.end()));
    return left;
  }
  if (fs.size() == 2 && triggers == 0) {
    // [y1][y2]: each pair of roots a_i, a_j becomes a_i a_j -> (t_i + t_j).
    const auto left = tau_rec(fs[0].term);
    const auto right = tau_rec(fs[1].term);
    std::vector<CausalNode> out;
    out.reserve(left.size() * right.size());
    for (const auto& l : left) {
      for (const auto& r : right) {
        CausalNode n{l.label.unite(r.label), l.children};
        n.children.insert(n.children.end(), r.children.begin(), r.children.end());
        out.push_back(std::move(n));
      }
    }
    return out;
  }
  throw ContractViolation("tau: fusion is not in binary normal form: " + to_string(term));
}

}  // namespace detail

/// Sorts siblings recursively so that trees equal up to reordering of
/// parallel branches compare equal.
inline CausalTree canonical(CausalTree t) {
  detail::sort_forest(t.roots);
  return t;
}

inline bool equivalent(const CausalTree& a, const CausalTree& b) {
  return canonical(a) == canonical(b);
}

/// Causal tree of a monomial connector. The term is brought to binary normal
/// form first so that exactly one translation rule applies at every level.
/// A 0 leaf yields the empty forest; a 1 leaf yields a node with the empty
/// label.
inline CausalTree tau(const AcTerm& term) {
  return CausalTree{detail::tau_rec(normalize_binary(term))};
}

/// Unions of labels over every non-empty, parent-closed set of nodes.
inline InteractionSet ct_interactions(const CausalTree& tree) {
  // For a node: every interaction produced by a parent-closed selection
  // rooted at it (the node is always included).
  std::function<InteractionSet(const CausalNode&)> rooted;
  // For a forest: (something selected?, union) pairs.
  auto forest = [&](const std::vector<CausalNode>& nodes) {
    std::set<std::pair<bool, Interaction>> acc{{false, Interaction{}}};
    for (const auto& n : nodes) {
      const InteractionSet sub = rooted(n);
      auto next = acc;
      for (const auto& [any, u] : acc) {
        for (const auto& v : sub) next.emplace(true, u.unite(v));
      }
      acc = std::move(next);
    }
    return acc;
  };
  rooted = [&](const CausalNode& n) {
    InteractionSet out;
    for (const auto& [any, u] : forest(n.children)) out.insert(n.label.unite(u));
    return out;
  };
  InteractionSet out;
  for (const auto& [any, u] : forest(tree.roots)) {
    if (any) out.insert(u);
  }
  return out;
}

/// head => m1 | m2 | ... ; each monomial is a conjunction of ports.
struct CausalRule {
  PortName head;
  std::set<Interaction> body;

  friend bool operator==(const CausalRule&, const CausalRule&) = default;
};

struct CausalRuleSet {
  /// Sorted by head; one rule per port.
  std::vector<CausalRule> rules;
  /// Disjunction of these ports: some root must take part.
  Interaction root_clause;

  friend bool operator==(const CausalRuleSet&, const CausalRuleSet&) = default;
};

/// Inverts the arrows: a port p in a node labelled a whose parent is
/// labelled b needs (a \ {p}) ∪ b. Rules of the same port merge into one
/// disjunction. A rule with an empty monomial is trivially true and is
/// dropped. Nodes with the empty label are transparent.
inline CausalRuleSet causal_rules(const CausalTree& tree) {
  std::map<PortName, std::set<Interaction>> bodies;
  std::vector<PortName> roots;

  auto walk = [&](const auto& self, const CausalNode& n, const Interaction& parent,
                  bool is_root) -> void {
    if (n.label.empty()) {
      for (const auto& c : n.children) self(self, c, parent, is_root);
      return;
    }
    for (const auto& p : n.label) {
      Interaction mono = n.label.minus(Interaction{p}).unite(parent);
      bodies[p].insert(std::move(mono));
    }
    if (is_root) roots.insert(roots.end(), n.label.begin(), n.label.end());
    for (const auto& c : n.children) self(self, c, n.label, false);
  };
  for (const auto& r : tree.roots) walk(walk, r, Interaction{}, true);

  CausalRuleSet out;
  out.root_clause = Interaction(std::move(roots));
  for (auto& [head, body] : bodies) {
    if (body.count(Interaction{}) != 0) continue;
    out.rules.push_back(CausalRule{head, std::move(body)});
  }
  return out;
}

/// Maps a port to the BDD level of the variable that encodes it.
using PortLevel = std::function<std::uint32_t(const PortName&)>;

/// (⋀ rules) ∧ (⋁ root ports). Ports map to manager variables by name unless
/// a mapping is supplied.
inline BddRef rules_to_formula(const CausalRuleSet& rs, BddManager& mgr,
                               const PortLevel& level_of = {}) {
  auto lvl = [&](const PortName& p) { return level_of ? level_of(p) : mgr.level_of(p); };
  BddRef f = mgr.zero();
  for (const auto& p : rs.root_clause) f = mgr.disj(f, mgr.var_at(lvl(p)));
  for (const auto& rule : rs.rules) {
    BddRef body = mgr.zero();
    for (const auto& mono : rule.body) {
      std::vector<std::pair<std::uint32_t, bool>> lits;
      lits.reserve(mono.size());
      for (const auto& q : mono) lits.emplace_back(lvl(q), true);
      body = mgr.disj(body, mgr.cube(std::move(lits)));
    }
    f = mgr.conj(f, mgr.apply(BddOp::Implies, mgr.var_at(lvl(rule.head)), body));
  }
  return f;
}

/// Ports occurring in some node label.
inline Interaction tree_ports(const CausalTree& tree) {
  std::vector<PortName> ports;
  auto walk = [&](const auto& self, const CausalNode& n) -> void {
    ports.insert(ports.end(), n.label.begin(), n.label.end());
    for (const auto& c : n.children) self(self, c);
  };
  for (const auto& r : tree.roots) walk(walk, r);
  return Interaction(std::move(ports));
}

/// Boolean form of a monomial over its support: the causal rules of tau(x),
/// with ports cut off by a 0 leaf forced false.
inline BddRef connector_formula(const AcTerm& x, BddManager& mgr, const PortLevel& level_of = {}) {
  auto lvl = [&](const PortName& p) { return level_of ? level_of(p) : mgr.level_of(p); };
  const CausalTree t = tau(x);
  BddRef f = rules_to_formula(causal_rules(t), mgr, level_of);
  for (const auto& p : support(x).minus(tree_ports(t))) f = mgr.and_not(f, mgr.var_at(lvl(p)));
  return f;
}

namespace detail {

inline std::string label_text(const Interaction& a) {
  if (a.empty()) return "1";
  bool short_names = std::all_of(a.begin(), a.end(), [](const auto& p) { return p.size() == 1; });
  return a.str(short_names ? "" : " ");
}

inline std::string node_text(const CausalNode& n);

inline std::string forest_text(const std::vector<CausalNode>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i != 0) out += " ⊕ ";
    out += node_text(nodes[i]);
  }
  return out;
}

inline std::string node_text(const CausalNode& n) {
  std::string out = label_text(n.label);
  if (n.children.empty()) return out;
  out += " → ";
  if (n.children.size() == 1) return out + node_text(n.children.front());
  return out + "(" + forest_text(n.children) + ")";
}

}  // namespace detail

/// Arrow/⊕ notation, e.g. "s → (r1 ⊕ r2 ⊕ r3)". Causality binds tighter
/// than parallel composition.
inline std::string to_string(const CausalTree& t) {
  if (t.empty()) return "0";
  return detail::forest_text(t.roots);
}

inline std::ostream& operator<<(std::ostream& os, const CausalTree& t) { return os << to_string(t); }

inline std::string to_string(const CausalRuleSet& rs) {
  std::string out;
  for (const auto& r : rs.rules) {
    out += r.head + " => ";
    bool first = true;
    for (const auto& m : r.body) {
      if (!first) out += " | ";
      first = false;
      out += detail::label_text(m);
    }
    out += "; ";
  }
  out += "roots: " + rs.root_clause.str(" | ");
  return out;
}

}  // namespace bipsym
