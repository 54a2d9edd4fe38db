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

// Monomial connector terms: ports, 0 and 1 leaves, and fusions of typed
// factors. A factor is either a trigger (can start an interaction on its
// own) or a synchron (joins only when something else fires).

#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"

namespace bipsym {

struct AcFactor;

class AcTerm {
 public:
  enum class Kind { Port, Zero, One, Fusion };

  static AcTerm port(PortName name) {
    AcTerm t(Kind::Port);
    t.port_ = std::move(name);
    return t;
  }
  static AcTerm zero() { return AcTerm(Kind::Zero); }
  static AcTerm one() { return AcTerm(Kind::One); }
  static AcTerm fusion(std::vector<AcFactor> factors);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] bool is_leaf() const noexcept { return kind_ != Kind::Fusion; }
  [[nodiscard]] const PortName& port_name() const noexcept { return port_; }
  [[nodiscard]] const std::vector<AcFactor>& factors() const noexcept { return factors_; }

  friend bool operator==(const AcTerm& a, const AcTerm& b);

 private:
  explicit AcTerm(Kind k) : kind_(k) {}

  Kind kind_;
  PortName port_;
  std::vector<AcFactor> factors_;
};

struct AcFactor {
  AcTerm term;
  bool trigger = false;

  friend bool operator==(const AcFactor&, const AcFactor&) = default;
};

inline AcTerm AcTerm::fusion(std::vector<AcFactor> factors) {
  if (factors.empty()) throw InputError("fusion needs at least one factor");
  AcTerm t(Kind::Fusion);
  t.factors_ = std::move(factors);
  return t;
}

inline bool operator==(const AcTerm& a, const AcTerm& b) {
  return a.kind_ == b.kind_ && a.port_ == b.port_ && a.factors_ == b.factors_;
}

/// [x]'
inline AcFactor trig(AcTerm t) { return AcFactor{std::move(t), true}; }
/// [x]
inline AcFactor sync(AcTerm t) { return AcFactor{std::move(t), false}; }
inline AcFactor trig(PortName p) { return trig(AcTerm::port(std::move(p))); }
inline AcFactor sync(PortName p) { return sync(AcTerm::port(std::move(p))); }
inline AcTerm fuse(std::vector<AcFactor> factors) { return AcTerm::fusion(std::move(factors)); }

/// Every port occurring in the term.
inline Interaction support(const AcTerm& term) {
  std::vector<PortName> out;
  auto walk = [&](const auto& self, const AcTerm& t) -> void {
    if (t.kind() == AcTerm::Kind::Port) out.push_back(t.port_name());
    for (const auto& f : t.factors()) self(self, f.term);
  };
  walk(walk, term);
  return Interaction(std::move(out));
}

/// Exact (exponential) enumeration of the interactions a connector allows.
///
/// For a fusion with at least one trigger, an interaction is a union of one
/// interaction from each member of a sub-collection of factors that contains
/// at least one trigger. Without triggers every synchron contributes exactly
/// one interaction. Typing is irrelevant at the leaves: |[x]| = |[x]'| = |x|.
inline InteractionSet interactions_of(const AcTerm& term) {
  switch (term.kind()) {
    case AcTerm::Kind::Port:
      return {Interaction{term.port_name()}};
    case AcTerm::Kind::Zero:
      return {};
    case AcTerm::Kind::One:
      return {Interaction{}};
    case AcTerm::Kind::Fusion:
      break;
  }

  bool any_trigger = false;
  for (const auto& f : term.factors()) any_trigger = any_trigger || f.trigger;

  if (!any_trigger) {
    InteractionSet acc{Interaction{}};
    for (const auto& f : term.factors()) {
      const InteractionSet sub = interactions_of(f.term);
      InteractionSet next;
      for (const auto& u : acc) {
        for (const auto& v : sub) next.insert(u.unite(v));
      }
      acc = std::move(next);
      if (acc.empty()) break;
    }
    return acc;
  }

  // (contains a trigger contribution, union so far)
  std::set<std::pair<bool, Interaction>> acc{{false, Interaction{}}};
  for (const auto& f : term.factors()) {
    const InteractionSet sub = interactions_of(f.term);
    auto next = acc;
    for (const auto& [has_trigger, u] : acc) {
      for (const auto& v : sub) next.emplace(has_trigger || f.trigger, u.unite(v));
    }
    acc = std::move(next);
  }
  InteractionSet out;
  for (const auto& [has_trigger, u] : acc) {
    if (has_trigger) out.insert(u);
  }
  return out;
}

/// Rewrites every fusion into the binary shape the causal-tree translation
/// expects: a single factor, one trigger followed by synchrons, exactly two
/// triggers, or exactly two synchrons. Several triggers are folded
/// left-nested as [[x1]'[x2]']'...; trigger-free fusions as [[y1][y2]]...
/// Semantics (interactions_of) is preserved.
inline AcTerm normalize_binary(const AcTerm& term) {
  if (term.is_leaf()) return term;

  std::vector<AcFactor> triggers;
  std::vector<AcFactor> synchrons;
  for (const auto& f : term.factors()) {
    AcFactor g{normalize_binary(f.term), f.trigger};
    (g.trigger ? triggers : synchrons).push_back(std::move(g));
  }

  if (triggers.size() + synchrons.size() == 1) {
    return fuse({triggers.empty() ? synchrons.front() : triggers.front()});
  }

  auto fold = [](std::vector<AcFactor>& xs, bool as_trigger) {
    AcTerm acc = fuse({xs[0], xs[1]});
    for (std::size_t k = 2; k < xs.size(); ++k) {
      acc = fuse({AcFactor{std::move(acc), as_trigger}, xs[k]});
    }
    return acc;
  };

  if (triggers.empty()) {
    if (synchrons.size() == 2) return fuse(std::move(synchrons));
    AcFactor last = synchrons.back();
    synchrons.pop_back();
    return fuse({sync(fold(synchrons, false)), std::move(last)});
  }

  if (triggers.size() == 1) {
    std::vector<AcFactor> out;
    out.reserve(1 + synchrons.size());
    out.push_back(std::move(triggers.front()));
    for (auto& s : synchrons) out.push_back(std::move(s));
    return fuse(std::move(out));
  }

  AcTerm folded = fold(triggers, true);
  if (synchrons.empty()) return folded;
  std::vector<AcFactor> out;
  out.reserve(1 + synchrons.size());
  out.push_back(trig(std::move(folded)));
  for (auto& s : synchrons) out.push_back(std::move(s));
  return fuse(std::move(out));
}

/// True iff the term is in the shape normalize_binary produces.
inline bool is_binary_normal(const AcTerm& term) {
  if (term.is_leaf()) return true;
  std::size_t t = 0;
  for (const auto& f : term.factors()) {
    if (!is_binary_normal(f.term)) return false;
    t += f.trigger ? 1 : 0;
  }
  const std::size_t n = term.factors().size();
  if (n == 1) return true;
  if (t == 1) return term.factors().front().trigger;
  return n == 2;
}

/// Connector text in the model file notation: juxtaposition is fusion,
/// brackets group, an apostrophe marks a trigger.
inline std::string to_string(const AcTerm& term) {
  switch (term.kind()) {
    case AcTerm::Kind::Port:
      return term.port_name();
    case AcTerm::Kind::Zero:
      return "0";
    case AcTerm::Kind::One:
      return "1";
    case AcTerm::Kind::Fusion:
      break;
  }
  std::string out;
  for (std::size_t i = 0; i < term.factors().size(); ++i) {
    const AcFactor& f = term.factors()[i];
    if (i != 0) out += ' ';
    if (f.term.is_leaf()) {
      out += to_string(f.term);
    } else {
      out += '[';
      out += to_string(f.term);
      out += ']';
    }
    if (f.trigger) out += '\'';
  }
  return out;
}

}  // namespace bipsym
