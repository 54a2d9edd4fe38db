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

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bipsym {

using PortName = std::string;

/// A set of ports fired together. Kept sorted and duplicate-free so that
/// structural equality is set equality.
class Interaction {
 public:
  Interaction() = default;
  Interaction(std::initializer_list<PortName> ports) : ports_(ports) { canonicalize(); }
  explicit Interaction(std::vector<PortName> ports) : ports_(std::move(ports)) { canonicalize(); }

  template <class It>
  Interaction(It first, It last) : ports_(first, last) {
    canonicalize();
  }

  [[nodiscard]] bool empty() const noexcept { return ports_.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return ports_.size(); }
  [[nodiscard]] auto begin() const noexcept { return ports_.begin(); }
  [[nodiscard]] auto end() const noexcept { return ports_.end(); }
  [[nodiscard]] const std::vector<PortName>& ports() const noexcept { return ports_; }

  [[nodiscard]] bool contains(const PortName& p) const {
    return std::binary_search(ports_.begin(), ports_.end(), p);
  }

  /// this ⊆ other
  [[nodiscard]] bool subset_of(const Interaction& other) const {
    return std::includes(other.ports_.begin(), other.ports_.end(), ports_.begin(), ports_.end());
  }

  /// this ⊊ other
  [[nodiscard]] bool strict_subset_of(const Interaction& other) const {
    return size() < other.size() && subset_of(other);
  }

  [[nodiscard]] Interaction unite(const Interaction& other) const {
    Interaction out;
    out.ports_.reserve(size() + other.size());
    std::set_union(ports_.begin(), ports_.end(), other.ports_.begin(), other.ports_.end(),
                   std::back_inserter(out.ports_));
    return out;
  }

  [[nodiscard]] Interaction intersect(const Interaction& other) const {
    Interaction out;
    std::set_intersection(ports_.begin(), ports_.end(), other.ports_.begin(), other.ports_.end(),
                          std::back_inserter(out.ports_));
    return out;
  }

  [[nodiscard]] Interaction minus(const Interaction& other) const {
    Interaction out;
    std::set_difference(ports_.begin(), ports_.end(), other.ports_.begin(), other.ports_.end(),
                        std::back_inserter(out.ports_));
    return out;
  }

  /// Space-separated port names; the empty interaction renders as "".
  [[nodiscard]] std::string str(const char* sep = " ") const {
    std::string out;
    for (std::size_t i = 0; i < ports_.size(); ++i) {
      if (i != 0) out += sep;
      out += ports_[i];
    }
    return out;
  }

  friend bool operator==(const Interaction&, const Interaction&) = default;
  friend auto operator<=>(const Interaction& a, const Interaction& b) {
    // Shorter interactions first, then lexicographic: reads naturally in dumps.
    if (a.size() != b.size()) return a.size() <=> b.size();
    return a.ports_ <=> b.ports_;
  }

  friend std::ostream& operator<<(std::ostream& os, const Interaction& a) {
    return os << '{' << a.str() << '}';
  }

 private:
  void canonicalize() {
    std::sort(ports_.begin(), ports_.end());
    ports_.erase(std::unique(ports_.begin(), ports_.end()), ports_.end());
  }

  std::vector<PortName> ports_;
};

/// A set of interactions (an element of 2^(2^P)).
using InteractionSet = std::set<Interaction>;

inline std::ostream& operator<<(std::ostream& os, const InteractionSet& s) {
  os << '{';
  bool first = true;
  for (const auto& a : s) {
    if (!first) os << ", ";
    first = false;
    os << a;
  }
  return os << '}';
}

struct InteractionHash {
  std::size_t operator()(const Interaction& a) const noexcept {
    std::size_t seed = a.size();
    for (const auto& p : a) {
      seed ^= std::hash<std::string>{}(p) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

}  // namespace bipsym
