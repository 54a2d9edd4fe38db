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

// Reduced ordered binary decision diagrams.
//
// One BddManager owns a hash-consed node store over a variable order that is
// fixed at construction. Nodes are never freed individually: memory grows
// with every distinct function built. compact() keeps only what a set of
// roots still needs. Engines that create short-lived functions on every
// step bracket that work with checkpoint()/rollback(), which discards every
// node created since the checkpoint in one sweep.
//
// There are no complement edges; negation is ite(f, 0, 1).

#pragma once

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bipsym/error.hpp"
#include "bipsym/rng.hpp"

namespace bipsym {

/// Handle to a function owned by one BddManager. Two handles from the same
/// manager are equal iff they denote the same boolean function.
struct BddRef {
  std::uint32_t node = 0;
  std::uint32_t manager = 0;

  friend bool operator==(BddRef, BddRef) = default;
};

struct BddRefHash {
  std::size_t operator()(BddRef r) const noexcept {
    return (static_cast<std::size_t>(r.manager) << 32) ^ r.node;
  }
};

enum class BddOp : std::uint8_t { And, Or, Xor, Implies };

/// Ordered list of variable names; position is the BDD level (0 = root side).
using VarOrder = std::vector<std::string>;

/// Total valuation indexed by level.
using Assignment = std::vector<bool>;

class BddManager {
 public:
  static constexpr std::uint32_t kFalse = 0;
  static constexpr std::uint32_t kTrue = 1;
  static constexpr std::uint32_t kTerminalLevel = std::numeric_limits<std::uint32_t>::max();

  explicit BddManager(VarOrder order) : id_(next_id()), order_(std::move(order)) {
    for (std::uint32_t i = 0; i < order_.size(); ++i) {
      if (!level_.emplace(order_[i], i).second) {
        throw InputError("duplicate variable in order: " + order_[i]);
      }
    }
    nodes_.push_back({kTerminalLevel, kFalse, kFalse});
    nodes_.push_back({kTerminalLevel, kTrue, kTrue});
    table_.assign(std::size_t{1} << kInitialCacheLog2, kEmpty);
    cache_.resize(std::size_t{1} << kInitialCacheLog2);
  }

  BddManager(const BddManager&) = delete;
  BddManager& operator=(const BddManager&) = delete;
  BddManager(BddManager&&) noexcept = default;
  BddManager& operator=(BddManager&&) noexcept = default;

  [[nodiscard]] std::uint32_t id() const noexcept { return id_; }
  [[nodiscard]] std::size_t num_vars() const noexcept { return order_.size(); }
  [[nodiscard]] const VarOrder& order() const noexcept { return order_; }
  [[nodiscard]] const std::string& name_at(std::uint32_t level) const { return order_.at(level); }

  /// Total number of nodes ever created (terminals included) and still alive.
  [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

  [[nodiscard]] bool has_var(std::string_view name) const {
    return level_.find(std::string(name)) != level_.end();
  }

  [[nodiscard]] std::uint32_t level_of(std::string_view name) const {
    auto it = level_.find(std::string(name));
    if (it == level_.end()) throw InputError("unknown BDD variable: " + std::string(name));
    return it->second;
  }

  [[nodiscard]] BddRef zero() const noexcept { return {kFalse, id_}; }
  [[nodiscard]] BddRef one() const noexcept { return {kTrue, id_}; }
  [[nodiscard]] BddRef constant(bool v) const noexcept { return v ? one() : zero(); }

  BddRef var(std::string_view name) { return var_at(level_of(name)); }

  BddRef var_at(std::uint32_t level) {
    check_level(level);
    return wrap(mk(level, kFalse, kTrue));
  }

  BddRef nvar_at(std::uint32_t level) {
    check_level(level);
    return wrap(mk(level, kTrue, kFalse));
  }

  BddRef literal(std::uint32_t level, bool positive) {
    return positive ? var_at(level) : nvar_at(level);
  }

  [[nodiscard]] bool is_false(BddRef f) const { return own(f) == kFalse; }
  [[nodiscard]] bool is_true(BddRef f) const { return own(f) == kTrue; }
  [[nodiscard]] bool is_terminal(BddRef f) const { return own(f) <= kTrue; }

  [[nodiscard]] std::uint32_t top_level(BddRef f) const { return nodes_[own(f)].level; }
  [[nodiscard]] BddRef low(BddRef f) const { return wrap(nodes_[own(f)].low); }
  [[nodiscard]] BddRef high(BddRef f) const { return wrap(nodes_[own(f)].high); }

  BddRef ite(BddRef f, BddRef g, BddRef h) { return wrap(ite_rec(own(f), own(g), own(h))); }

  BddRef negate(BddRef f) { return wrap(ite_rec(own(f), kFalse, kTrue)); }

  BddRef apply(BddOp op, BddRef f, BddRef g) {
    const std::uint32_t a = own(f);
    const std::uint32_t b = own(g);
    switch (op) {
      case BddOp::And:
        return wrap(and_rec(a, b));
      case BddOp::Or:
        return wrap(or_rec(a, b));
      case BddOp::Xor:
        return wrap(ite_rec(a, ite_rec(b, kFalse, kTrue), b));
      case BddOp::Implies:
        return wrap(ite_rec(a, b, kTrue));
    }
    return zero();
  }

  BddRef conj(BddRef f, BddRef g) { return apply(BddOp::And, f, g); }
  BddRef disj(BddRef f, BddRef g) { return apply(BddOp::Or, f, g); }

  /// f ∧ ¬g without materializing ¬g.
  BddRef and_not(BddRef f, BddRef g) { return wrap(ite_rec(own(g), kFalse, own(f))); }

  /// Cofactor of f with the named variable fixed to value.
  BddRef restrict(BddRef f, std::string_view var, bool value) {
    return restrict_at(f, level_of(var), value);
  }

  BddRef restrict_at(BddRef f, std::uint32_t level, bool value) {
    check_level(level);
    return wrap(restrict_rec(own(f), level, value));
  }

  /// Cube (conjunction of literals), built bottom-up in O(k).
  BddRef cube(std::vector<std::pair<std::uint32_t, bool>> literals) {
    std::sort(literals.begin(), literals.end());
    std::uint32_t r = kTrue;
    for (auto it = literals.rbegin(); it != literals.rend(); ++it) {
      check_level(it->first);
      if (std::next(it) != literals.rend() && std::next(it)->first == it->first) {
        if (std::next(it)->second != it->second) return zero();
        continue;
      }
      r = it->second ? mk(it->first, kFalse, r) : mk(it->first, r, kFalse);
    }
    return wrap(r);
  }

  /// Positive cube over the given levels; used as a variable set.
  BddRef var_set(const std::vector<std::uint32_t>& levels) {
    std::vector<std::pair<std::uint32_t, bool>> lits;
    lits.reserve(levels.size());
    for (auto l : levels) lits.emplace_back(l, true);
    return cube(std::move(lits));
  }

  /// Cofactor of f by every literal of the cube at once. Visits each node of
  /// f at most once.
  BddRef restrict_cube(BddRef f, BddRef literal_cube) {
    const std::uint32_t root = own(f);
    spread_cube(own(literal_cube), "restrict_cube");
    begin_memo();
    const std::uint32_t r = restrict_cube_rec(root);
    clear_cube(own(literal_cube));
    return wrap(r);
  }

  /// ∃vars. f, with vars given as a positive cube (see var_set).
  BddRef exists(BddRef f, BddRef vars) {
    const std::uint32_t root = own(f);
    spread_cube(own(vars), "exists");
    begin_memo();
    const std::uint32_t r = exists_rec(root);
    clear_cube(own(vars));
    return wrap(r);
  }

  BddRef exists(BddRef f, const std::vector<std::string>& vars) {
    std::vector<std::uint32_t> levels;
    levels.reserve(vars.size());
    for (const auto& v : vars) levels.push_back(level_of(v));
    return exists(f, var_set(levels));
  }

  [[nodiscard]] bool eval(BddRef f, const Assignment& values) const {
    std::uint32_t n = own(f);
    while (n > kTrue) {
      const Node& node = nodes_[n];
      n = values.at(node.level) ? node.high : node.low;
    }
    return n == kTrue;
  }

  /// Levels f depends on, ascending.
  [[nodiscard]] std::vector<std::uint32_t> support(BddRef f) const {
    std::vector<bool> seen_level(order_.size(), false);
    for_each_node(own(f), [&](std::uint32_t n) { seen_level[nodes_[n].level] = true; });
    std::vector<std::uint32_t> out;
    for (std::uint32_t l = 0; l < seen_level.size(); ++l) {
      if (seen_level[l]) out.push_back(l);
    }
    return out;
  }

  /// Number of distinct internal nodes reachable from f.
  [[nodiscard]] std::size_t node_count(BddRef f) const {
    std::size_t count = 0;
    for_each_node(own(f), [&](std::uint32_t) { ++count; });
    return count;
  }

  /// Number of satisfying valuations over all manager variables.
  [[nodiscard]] double sat_count(BddRef f) const {
    std::unordered_map<std::uint32_t, double> memo;
    const auto nv = static_cast<double>(order_.size());
    std::function<double(std::uint32_t)> frac = [&](std::uint32_t n) -> double {
      if (n == kFalse) return 0.0;
      if (n == kTrue) return 1.0;
      if (auto it = memo.find(n); it != memo.end()) return it->second;
      const double v = 0.5 * frac(nodes_[n].low) + 0.5 * frac(nodes_[n].high);
      memo.emplace(n, v);
      return v;
    };
    return std::ldexp(frac(own(f)), static_cast<int>(nv));
  }

  /// Seeded random descent to a satisfying valuation. Support variables that
  /// the chosen path skips get a random value; variables outside the support
  /// of f are false. Returns nullopt iff f is FALSE.
  [[nodiscard]] std::optional<Assignment> pick_sat(BddRef f, std::uint64_t seed) const {
    std::uint32_t n = own(f);
    if (n == kFalse) return std::nullopt;
    SplitMix64 rng(seed);
    Assignment values(order_.size(), false);
    std::vector<bool> fixed(order_.size(), false);
    while (n > kTrue) {
      const Node& node = nodes_[n];
      bool take_high;
      if (node.low == kFalse) {
        take_high = true;
      } else if (node.high == kFalse) {
        take_high = false;
      } else {
        take_high = (rng() >> 63) != 0;
      }
      values[node.level] = take_high;
      fixed[node.level] = true;
      n = take_high ? node.high : node.low;
    }
    for (auto l : support(f)) {
      if (!fixed[l]) values[l] = (rng() >> 63) != 0;
    }
    return values;
  }

  /// Calls visit(values) once per satisfying valuation of f over `levels`
  /// (ascending). f must not depend on any level outside the list.
  template <class Visit>
  void for_each_sat(BddRef f, const std::vector<std::uint32_t>& levels, Visit&& visit) const {
    std::vector<bool> values(levels.size(), false);
    for_each_sat_rec(own(f), levels, 0, values, visit);
  }

  /// Checks reduction, ordering and uniqueness for every node in the store.
  [[nodiscard]] bool audit(std::string* why = nullptr) const {
    auto fail = [&](const std::string& msg) {
      if (why != nullptr) *why = msg;
      return false;
    };
    const std::size_t scratch = in_checkpoint_ ? scratch_slots_.size() : 0;
    if (unique_count_ + scratch + 2 != nodes_.size()) return fail("unique table out of sync with node store");
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.low == n.high) return fail("redundant node " + std::to_string(i));
      if (n.level >= order_.size()) return fail("bad level on node " + std::to_string(i));
      if (nodes_[n.low].level <= n.level || nodes_[n.high].level <= n.level) {
        return fail("ordering violated at node " + std::to_string(i));
      }
      if (find_node(n.level, n.low, n.high) != i) {
        return fail("duplicate node " + std::to_string(i));
      }
    }
    return true;
  }

  /// Graphviz rendering of f.
  void to_dot(BddRef f, std::ostream& os) const {
    os << "digraph bdd {\n  node [shape=circle];\n";
    os << "  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    for_each_node(own(f), [&](std::uint32_t n) {
      const Node& node = nodes_[n];
      os << "  n" << n << " [label=\"" << order_[node.level] << "\"];\n";
      os << "  n" << n << " -> n" << node.low << " [style=dashed];\n";
      os << "  n" << n << " -> n" << node.high << ";\n";
    });
    os << "}\n";
  }

  /// Marks the node store so that rollback() can discard everything created
  /// afterwards. Checkpoints do not nest.
  void checkpoint() {
    assert(!in_checkpoint_);
    in_checkpoint_ = true;
    watermark_ = static_cast<std::uint32_t>(nodes_.size());
    touched_slots_.clear();
    if (scratch_table_.empty()) scratch_table_.assign(std::size_t{1} << kInitialScratchLog2, kEmpty);
  }

  /// Drops every node created since checkpoint(). Handles to those nodes
  /// become dangling.
  void rollback() {
    assert(in_checkpoint_);
    for (std::size_t slot : touched_slots_) cache_[slot] = CacheEntry{};
    touched_slots_.clear();
    for (std::size_t slot : scratch_slots_) scratch_table_[slot] = kEmpty;
    scratch_slots_.clear();
    nodes_.resize(watermark_);
    in_checkpoint_ = false;
  }

  /// Rebuilds the store with only the nodes reachable from `roots` and
  /// rewrites the handles in place. Every other handle of this manager
  /// becomes invalid.
  void compact(const std::vector<BddRef*>& roots) {
    if (in_checkpoint_) throw ContractViolation("compact inside a checkpoint");
    for (BddRef* r : roots) static_cast<void>(own(*r));
    std::vector<std::uint32_t> remap(nodes_.size(), kEmpty);
    remap[kFalse] = kFalse;
    remap[kTrue] = kTrue;
    std::vector<Node> kept{nodes_[kFalse], nodes_[kTrue]};
    auto visit = [&](const auto& self, std::uint32_t n) -> std::uint32_t {
      if (remap[n] != kEmpty) return remap[n];
      const Node node = nodes_[n];
      const std::uint32_t lo = self(self, node.low);
      const std::uint32_t hi = self(self, node.high);
      kept.push_back({node.level, lo, hi});
      return remap[n] = static_cast<std::uint32_t>(kept.size() - 1);
    };
    for (BddRef* r : roots) r->node = visit(visit, r->node);
    nodes_ = std::move(kept);
    nodes_.shrink_to_fit();
    std::size_t cap = std::size_t{1} << kInitialCacheLog2;
    while (cap < 2 * nodes_.size()) cap *= 2;
    table_.assign(cap, kEmpty);
    unique_count_ = 0;
    for (std::uint32_t i = 2; i < nodes_.size(); ++i) insert_slot(i);
    std::size_t cache = std::size_t{1} << kInitialCacheLog2;
    while (cache < nodes_.size() && cache < (std::size_t{1} << kMaxCacheLog2)) cache *= 2;
    cache_.assign(cache, CacheEntry{});
    mark_.clear();
  }

 private:
  struct Node {
    std::uint32_t level;
    std::uint32_t low;
    std::uint32_t high;
  };

  static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

  enum OpCode : std::uint32_t {
    kNone = 0,
    kIte,
    kAnd,
    kOr,
    kRestrict,
  };

  struct CacheEntry {
    std::uint32_t op = kNone;
    std::uint32_t a = 0, b = 0, c = 0;
    std::uint32_t result = 0;
  };

  static constexpr unsigned kInitialCacheLog2 = 12;
  static constexpr unsigned kMaxCacheLog2 = 22;
  static constexpr unsigned kInitialScratchLog2 = 12;

  static std::uint32_t next_id() {
    static std::atomic<std::uint32_t> counter{1};
    return counter.fetch_add(1);
  }

  void check_level(std::uint32_t level) const {
    if (level >= order_.size()) throw InputError("BDD variable level out of range");
  }

  [[nodiscard]] std::uint32_t own(BddRef f) const {
    if (f.manager != id_) throw InputError("BDD handle belongs to a different manager");
    return f.node;
  }

  [[nodiscard]] BddRef wrap(std::uint32_t n) const noexcept { return {n, id_}; }

  // Unique table: open addressing with linear probing over node indices.
  // Inside a checkpoint the main table is read-only; new nodes go to a small
  // scratch table that rollback() empties slot by slot.

  [[nodiscard]] std::size_t home_slot(std::uint32_t level, std::uint32_t low,
                                      std::uint32_t high) const noexcept {
    return hash_node(level, low, high) & (table_.size() - 1);
  }

  [[nodiscard]] std::size_t hash_node(std::uint32_t level, std::uint32_t low, std::uint32_t high) const noexcept {
    std::uint64_t h = level;
    h = h * 0x9e3779b97f4a7c15ULL ^ low;
    h = h * 0x9e3779b97f4a7c15ULL ^ high;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }

  [[nodiscard]] std::uint32_t find_node(std::uint32_t level, std::uint32_t low,
                                       std::uint32_t high) const noexcept {
    auto probe = [&](const std::vector<std::uint32_t>& table) {
      if (table.empty()) return kEmpty;
      const std::size_t mask = table.size() - 1;
      for (std::size_t i = hash_node(level, low, high) & mask;; i = (i + 1) & mask) {
        const std::uint32_t n = table[i];
        if (n == kEmpty) return kEmpty;
        const Node& node = nodes_[n];
        if (node.level == level && node.low == low && node.high == high) return n;
      }
    };
    const std::uint32_t n = probe(table_);
    return n != kEmpty || !in_checkpoint_ ? n : probe(scratch_table_);
  }

  void insert_slot(std::uint32_t n) {
    const Node& node = nodes_[n];
    const std::size_t mask = table_.size() - 1;
    std::size_t i = home_slot(node.level, node.low, node.high);
    while (table_[i] != kEmpty) i = (i + 1) & mask;
    table_[i] = n;
    ++unique_count_;
  }

  void grow_table() {
    std::vector<std::uint32_t> old = std::move(table_);
    table_.assign(old.size() * 2, kEmpty);
    unique_count_ = 0;
    for (std::uint32_t n : old) {
      if (n != kEmpty) insert_slot(n);
    }
  }

  std::uint32_t mk(std::uint32_t level, std::uint32_t low, std::uint32_t high) {
    if (low == high) return low;
    const std::size_t mask = table_.size() - 1;
    std::size_t i = home_slot(level, low, high);
    for (;; i = (i + 1) & mask) {
      const std::uint32_t n = table_[i];
      if (n == kEmpty) break;
      const Node& node = nodes_[n];
      if (node.level == level && node.low == low && node.high == high) return n;
    }
    if (in_checkpoint_) return mk_scratch(level, low, high);
    const auto idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({level, low, high});
    table_[i] = idx;
    ++unique_count_;
    if (2 * unique_count_ > table_.size()) grow_table();
    if (nodes_.size() > cache_.size() && cache_.size() < (std::size_t{1} << kMaxCacheLog2)) {
      grow_cache();
    }
    return idx;
  }

  std::uint32_t mk_scratch(std::uint32_t level, std::uint32_t low, std::uint32_t high) {
    std::size_t mask = scratch_table_.size() - 1;
    std::size_t i = hash_node(level, low, high) & mask;
    for (;; i = (i + 1) & mask) {
      const std::uint32_t n = scratch_table_[i];
      if (n == kEmpty) break;
      const Node& node = nodes_[n];
      if (node.level == level && node.low == low && node.high == high) return n;
    }
    const auto idx = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({level, low, high});
    scratch_table_[i] = idx;
    scratch_slots_.push_back(i);
    if (2 * scratch_slots_.size() > scratch_table_.size()) {
      scratch_table_.assign(scratch_table_.size() * 2, kEmpty);
      scratch_slots_.clear();
      mask = scratch_table_.size() - 1;
      for (std::uint32_t n = watermark_; n < nodes_.size(); ++n) {
        std::size_t j = hash_node(nodes_[n].level, nodes_[n].low, nodes_[n].high) & mask;
        while (scratch_table_[j] != kEmpty) j = (j + 1) & mask;
        scratch_table_[j] = n;
        scratch_slots_.push_back(j);
      }
    }
    if (nodes_.size() > cache_.size() && cache_.size() < (std::size_t{1} << kMaxCacheLog2)) {
      grow_cache();
    }
    return idx;
  }

  void grow_cache() {
    // Entries are not rehashed; a cache may forget.
    cache_.assign(cache_.size() * 2, CacheEntry{});
    touched_slots_.clear();
  }

  [[nodiscard]] std::size_t slot_of(std::uint32_t op, std::uint32_t a, std::uint32_t b,
                                    std::uint32_t c) const noexcept {
    std::uint64_t h = op;
    h = h * 0xff51afd7ed558ccdULL + a;
    h = h * 0xc4ceb9fe1a85ec53ULL + b;
    h = h * 0x9e3779b97f4a7c15ULL + c;
    h ^= h >> 31;
    return static_cast<std::size_t>(h) & (cache_.size() - 1);
  }

  bool lookup(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
              std::uint32_t& result) const {
    const CacheEntry& e = cache_[slot_of(op, a, b, c)];
    if (e.op == op && e.a == a && e.b == b && e.c == c) {
      result = e.result;
      return true;
    }
    return false;
  }

  void store(std::uint32_t op, std::uint32_t a, std::uint32_t b, std::uint32_t c,
             std::uint32_t result) {
    const std::size_t slot = slot_of(op, a, b, c);
    cache_[slot] = CacheEntry{op, a, b, c, result};
    if (in_checkpoint_) touched_slots_.push_back(slot);
  }

  [[nodiscard]] std::uint32_t level(std::uint32_t n) const noexcept { return nodes_[n].level; }

  [[nodiscard]] std::uint32_t cof_low(std::uint32_t n, std::uint32_t lvl) const noexcept {
    return nodes_[n].level == lvl ? nodes_[n].low : n;
  }
  [[nodiscard]] std::uint32_t cof_high(std::uint32_t n, std::uint32_t lvl) const noexcept {
    return nodes_[n].level == lvl ? nodes_[n].high : n;
  }

  std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
    if (f == kTrue) return g;
    if (f == kFalse) return h;
    if (g == h) return g;
    if (g == kTrue && h == kFalse) return f;
    if (g == f) g = kTrue;
    if (h == f) h = kFalse;
    if (g == h) return g;
    std::uint32_t r;
    if (lookup(kIte, f, g, h, r)) return r;
    const std::uint32_t top = std::min({level(f), level(g), level(h)});
    const std::uint32_t lo = ite_rec(cof_low(f, top), cof_low(g, top), cof_low(h, top));
    const std::uint32_t hi = ite_rec(cof_high(f, top), cof_high(g, top), cof_high(h, top));
    r = mk(top, lo, hi);
    store(kIte, f, g, h, r);
    return r;
  }

  std::uint32_t and_rec(std::uint32_t f, std::uint32_t g) {
    if (f == kFalse || g == kFalse) return kFalse;
    if (f == kTrue) return g;
    if (g == kTrue || f == g) return f;
    if (f > g) std::swap(f, g);
    std::uint32_t r;
    if (lookup(kAnd, f, g, 0, r)) return r;
    const std::uint32_t top = std::min(level(f), level(g));
    const std::uint32_t lo = and_rec(cof_low(f, top), cof_low(g, top));
    const std::uint32_t hi = and_rec(cof_high(f, top), cof_high(g, top));
    r = mk(top, lo, hi);
    store(kAnd, f, g, 0, r);
    return r;
  }

  std::uint32_t or_rec(std::uint32_t f, std::uint32_t g) {
    if (f == kTrue || g == kTrue) return kTrue;
    if (f == kFalse) return g;
    if (g == kFalse || f == g) return f;
    if (f > g) std::swap(f, g);
    std::uint32_t r;
    if (lookup(kOr, f, g, 0, r)) return r;
    const std::uint32_t top = std::min(level(f), level(g));
    const std::uint32_t lo = or_rec(cof_low(f, top), cof_low(g, top));
    const std::uint32_t hi = or_rec(cof_high(f, top), cof_high(g, top));
    r = mk(top, lo, hi);
    store(kOr, f, g, 0, r);
    return r;
  }

  std::uint32_t restrict_rec(std::uint32_t f, std::uint32_t lvl, bool value) {
    if (f <= kTrue || level(f) > lvl) return f;
    if (level(f) == lvl) return value ? nodes_[f].high : nodes_[f].low;
    std::uint32_t r;
    const std::uint32_t c = lvl * 2 + (value ? 1 : 0);
    if (lookup(kRestrict, f, c, 0, r)) return r;
    const std::uint32_t lo = restrict_rec(nodes_[f].low, lvl, value);
    const std::uint32_t hi = restrict_rec(nodes_[f].high, lvl, value);
    r = mk(level(f), lo, hi);
    store(kRestrict, f, c, 0, r);
    return r;
  }

  // restrict_cube and exists spread their cube into cube_val_ (value per
  // level, -1 when absent) and memoize per call on node index, so every node
  // is visited once however far apart its children's levels are.

  void spread_cube(std::uint32_t c, const char* who) {
    if (cube_val_.size() < order_.size()) cube_val_.assign(order_.size(), -1);
    if (c == kFalse) throw InputError(std::string(who) + ": cube is unsatisfiable");
    while (c > kTrue) {
      const Node& n = nodes_[c];
      if (n.low == kFalse) {
        cube_val_[n.level] = 1;
        c = n.high;
      } else if (n.high == kFalse) {
        cube_val_[n.level] = 0;
        c = n.low;
      } else {
        clear_cube(c);
        throw InputError(std::string(who) + ": argument is not a cube");
      }
    }
  }

  void clear_cube(std::uint32_t c) {
    while (c > kTrue) {
      const Node& n = nodes_[c];
      if (cube_val_[n.level] < 0) return;
      cube_val_[n.level] = -1;
      c = n.low == kFalse ? n.high : n.low;
    }
  }

  void begin_memo() {
    if (memo_.size() < nodes_.size()) memo_.resize(nodes_.size());
    if (++memo_epoch_ == 0) {
      std::fill(memo_.begin(), memo_.end(), Memo{});
      memo_epoch_ = 1;
    }
    memo_limit_ = static_cast<std::uint32_t>(nodes_.size());
  }

  std::uint32_t restrict_cube_rec(std::uint32_t f) {
    while (f > kTrue && cube_val_[nodes_[f].level] >= 0) {
      f = cube_val_[nodes_[f].level] != 0 ? nodes_[f].high : nodes_[f].low;
    }
    if (f <= kTrue) return f;
    if (memo_[f].stamp == memo_epoch_) return memo_[f].value;
    const Node node = nodes_[f];
    const std::uint32_t lo = restrict_cube_rec(node.low);
    const std::uint32_t hi = restrict_cube_rec(node.high);
    const std::uint32_t r = lo == node.low && hi == node.high ? f : mk(node.level, lo, hi);
    memo_[f] = {memo_epoch_, r};
    return r;
  }

  // Every level present in the cube is quantified.
  std::uint32_t exists_rec(std::uint32_t f) {
    if (f <= kTrue) return f;
    if (f < memo_limit_ && memo_[f].stamp == memo_epoch_) return memo_[f].value;
    const Node node = nodes_[f];
    std::uint32_t r;
    if (cube_val_[node.level] >= 0) {
      const std::uint32_t lo = exists_rec(node.low);
      r = lo == kTrue ? kTrue : or_rec(lo, exists_rec(node.high));
    } else {
      const std::uint32_t lo = exists_rec(node.low);
      const std::uint32_t hi = exists_rec(node.high);
      r = lo == node.low && hi == node.high ? f : mk(node.level, lo, hi);
    }
    if (f < memo_limit_) memo_[f] = {memo_epoch_, r};
    return r;
  }

  template <class Fn>
  void for_each_node(std::uint32_t root, Fn&& fn) const {
    if (root <= kTrue) return;
    if (mark_.size() < nodes_.size()) mark_.resize(nodes_.size(), 0);
    if (++epoch_ == 0) {
      std::fill(mark_.begin(), mark_.end(), 0);
      epoch_ = 1;
    }
    std::vector<std::uint32_t>& stack = stack_;
    stack.clear();
    stack.push_back(root);
    mark_[root] = epoch_;
    while (!stack.empty()) {
      const std::uint32_t n = stack.back();
      stack.pop_back();
      fn(n);
      for (std::uint32_t child : {nodes_[n].low, nodes_[n].high}) {
        if (child > kTrue && mark_[child] != epoch_) {
          mark_[child] = epoch_;
          stack.push_back(child);
        }
      }
    }
  }

  template <class Visit>
  void for_each_sat_rec(std::uint32_t n, const std::vector<std::uint32_t>& levels, std::size_t k,
                        std::vector<bool>& values, Visit& visit) const {
    if (n == kFalse) return;
    if (k == levels.size()) {
      if (n != kTrue) throw ContractViolation("for_each_sat: function depends on unlisted variable");
      visit(static_cast<const std::vector<bool>&>(values));
      return;
    }
    const std::uint32_t lvl = levels[k];
    if (n != kTrue && level(n) < lvl) {
      throw ContractViolation("for_each_sat: function depends on unlisted variable");
    }
    const bool branches = n != kTrue && level(n) == lvl;
    values[k] = false;
    for_each_sat_rec(branches ? nodes_[n].low : n, levels, k + 1, values, visit);
    values[k] = true;
    for_each_sat_rec(branches ? nodes_[n].high : n, levels, k + 1, values, visit);
    values[k] = false;
  }

  std::uint32_t id_;
  VarOrder order_;
  std::unordered_map<std::string, std::uint32_t> level_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> table_;
  std::size_t unique_count_ = 0;
  std::vector<CacheEntry> cache_;
  bool in_checkpoint_ = false;
  std::uint32_t watermark_ = 0;
  std::vector<std::size_t> touched_slots_;
  std::vector<std::uint32_t> scratch_table_;
  std::vector<std::size_t> scratch_slots_;
  // Traversal scratch for const queries; a manager is single-threaded.
  mutable std::vector<std::uint32_t> mark_;
  mutable std::uint32_t epoch_ = 0;
  mutable std::vector<std::uint32_t> stack_;
  std::vector<std::int8_t> cube_val_;
  struct Memo {
    std::uint32_t stamp = 0;
    std::uint32_t value = 0;
  };
  std::vector<Memo> memo_;
  std::uint32_t memo_epoch_ = 0;
  std::uint32_t memo_limit_ = 0;
};

}  // namespace bipsym
