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

// Enumerative engine: the interaction set is materialized once, then every
// step scans all of it, filters by priority and picks a survivor uniformly.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bipsym/engine.hpp"
#include "bipsym/rng.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"

namespace bipsym {

class EnumEngine {
 public:
  explicit EnumEngine(SystemModel system)
      : system_(std::move(system)), table_((require_valid(system_), system_)) {
    const InteractionSet gamma = gamma_of(system_);
    gamma_.assign(gamma.begin(), gamma.end());
    parts_.reserve(gamma_.size());
    for (const auto& a : gamma_) parts_.push_back(table_.parts_of(a));
    compile_priority();
    flags_.assign(gamma_.size(), 0);
    state_ = initial_state(system_);
  }

  // table_ points into system_
  EnumEngine(const EnumEngine&) = delete;
  EnumEngine& operator=(const EnumEngine&) = delete;

  [[nodiscard]] const SystemModel& system() const noexcept { return system_; }
  /// Materialized interaction set, in Interaction order.
  [[nodiscard]] const std::vector<Interaction>& gamma() const noexcept { return gamma_; }
  [[nodiscard]] const GlobalState& state() const noexcept { return state_; }
  void set_state(GlobalState s) {
    Semantics(system_).check_state(s);
    state_ = std::move(s);
  }

  /// Act evaluations made while scanning the interaction set.
  [[nodiscard]] std::uint64_t activity_checks() const noexcept { return activity_checks_; }
  /// Act evaluations made on explicit-priority dominators.
  [[nodiscard]] std::uint64_t priority_checks() const noexcept { return priority_checks_; }

  StepOutcome step(std::uint64_t seed) {
    survivor_indices(state_, scratch_);
    if (scratch_.empty()) return StepOutcome{true, Interaction{}, state_};
    SplitMix64 rng(seed);
    const std::uint32_t pick = scratch_[rng() % scratch_.size()];
    state_ = table_.advance(state_, parts_[pick], rng);
    return StepOutcome{false, gamma_[pick], state_};
  }

  [[nodiscard]] InteractionSet enabled_set(const GlobalState& s) {
    InteractionSet out;
    for (std::uint32_t i = 0; i < gamma_.size(); ++i) {
      if (table_.active(s, parts_[i])) out.insert(gamma_[i]);
    }
    return out;
  }

  [[nodiscard]] InteractionSet survivor_set(const GlobalState& s) {
    std::vector<std::uint32_t> idx;
    survivor_indices(s, idx);
    InteractionSet out;
    for (auto i : idx) out.insert(gamma_[i]);
    return out;
  }

 private:
  void compile_priority() {
    dominators_.assign(gamma_.size(), {});
    if (system_.priority.is_maximal_progress()) {
      for (std::uint32_t i = 0; i < gamma_.size(); ++i) {
        for (std::uint32_t j = 0; j < gamma_.size(); ++j) {
          if (gamma_[j].size() > gamma_[i].size() && gamma_[i].subset_of(gamma_[j])) {
            dominators_[i].push_back(j);
          }
        }
      }
      return;
    }
    const auto up = system_.priority.closure();
    for (std::uint32_t i = 0; i < gamma_.size(); ++i) {
      auto it = up.find(gamma_[i]);
      if (it == up.end()) continue;
      for (const auto& b : it->second) {
        dominators_[i].push_back(static_cast<std::uint32_t>(extra_.size()));
        extra_.push_back(table_.parts_of(b));
      }
    }
  }

  void survivor_indices(const GlobalState& s, std::vector<std::uint32_t>& out) {
    enabled_.clear();
    for (std::uint32_t i = 0; i < gamma_.size(); ++i) {
      ++activity_checks_;
      if (table_.active(s, parts_[i])) {
        flags_[i] = 1;
        enabled_.push_back(i);
      }
    }
    out.clear();
    const bool maximal = system_.priority.is_maximal_progress();
    for (auto i : enabled_) {
      bool dominated = false;
      for (auto d : dominators_[i]) {
        if (maximal) {
          dominated = flags_[d] != 0;
        } else {
          ++priority_checks_;
          dominated = table_.active(s, extra_[d]);
        }
        if (dominated) break;
      }
      if (!dominated) out.push_back(i);
    }
    for (auto i : enabled_) flags_[i] = 0;
  }

  SystemModel system_;
  TransitionTable table_;
  std::vector<Interaction> gamma_;
  std::vector<std::vector<TransitionTable::Part>> parts_;
  // Maximal progress: indices into gamma_. Explicit pairs: indices into extra_.
  std::vector<std::vector<std::uint32_t>> dominators_;
  std::vector<std::vector<TransitionTable::Part>> extra_;
  std::vector<char> flags_;
  std::vector<std::uint32_t> enabled_;
  std::vector<std::uint32_t> scratch_;
  GlobalState state_;
  std::uint64_t activity_checks_ = 0;
  std::uint64_t priority_checks_ = 0;
};

}  // namespace bipsym
