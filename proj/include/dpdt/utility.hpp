// Copyright 2026 The dpdt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpdt/hyperreal.hpp"
#include "dpdt/mechanism.hpp"

namespace dpdt {

// Total preorder over a finite consequence set, stored as ordered
// equivalence classes (best first). Completeness and transitivity are
// structural, not checked.
class PreferenceOrdering {
 public:
  explicit PreferenceOrdering(std::vector<std::vector<Symbol>> classes)
      : classes_(std::move(classes)) {
    for (std::size_t i = 0; i < classes_.size(); ++i) {
      if (classes_[i].empty()) throw std::invalid_argument("empty preference class");
      for (const Symbol& c : classes_[i]) {
        if (!rank_.emplace(c, i).second)
          throw std::invalid_argument("consequence appears twice: " + c);
        consequences_.push_back(c);
      }
    }
    if (consequences_.empty()) throw std::invalid_argument("empty preference ordering");
  }

  const std::vector<Symbol>& consequences() const { return consequences_; }
  const std::vector<std::vector<Symbol>>& classes() const { return classes_; }

  std::size_t rank(const Symbol& c) const {
    auto it = rank_.find(c);
    if (it == rank_.end()) throw std::invalid_argument("unknown consequence: " + c);
    return it->second;
  }

  // c1 is weakly preferred to c2.
  bool prefers(const Symbol& c1, const Symbol& c2) const {
    return rank(c1) <= rank(c2);
  }

 private:
  std::vector<std::vector<Symbol>> classes_;
  std::vector<Symbol> consequences_;
  std::map<Symbol, std::size_t> rank_;
};

// Map from consequences to hyperreal utilities; real-valued utilities are
// the degree-0 slice.
class UtilityFunction {
 public:
  UtilityFunction() = default;
  explicit UtilityFunction(std::map<Symbol, Hyperreal> values)
      : values_(std::move(values)) {
    if (values_.empty()) throw std::invalid_argument("empty utility function");
  }

  const std::map<Symbol, Hyperreal>& values() const { return values_; }

  const Hyperreal& at(const Symbol& c) const {
    auto it = values_.find(c);
    if (it == values_.end()) throw std::invalid_argument("utility undefined at: " + c);
    return it->second;
  }

  bool defined_on(const std::vector<Symbol>& consequences) const {
    for (const Symbol& c : consequences)
      if (values_.find(c) == values_.end()) return false;
    return true;
  }

  bool real_valued() const {
    for (const auto& [c, v] : values_)
      if (!v.is_real()) return false;
    return true;
  }

  bool nonnegative_real() const {
    for (const auto& [c, v] : values_)
      if (!v.is_real() || v < Hyperreal(0)) return false;
    return true;
  }

  Hyperreal max_value() const {
    Hyperreal best = values_.begin()->second;
    for (const auto& [c, v] : values_)
      if (v > best) best = v;
    return best;
  }
  Hyperreal min_value() const {
    Hyperreal worst = values_.begin()->second;
    for (const auto& [c, v] : values_)
      if (v < worst) worst = v;
    return worst;
  }
  Hyperreal range_span() const { return max_value() - min_value(); }

 private:
  std::map<Symbol, Hyperreal> values_;
};

// u represents the preference iff the order of utility values matches the
// preference on every pair.
inline bool represents(const UtilityFunction& u, const PreferenceOrdering& p) {
  if (!u.defined_on(p.consequences()))
    throw std::invalid_argument("utility and preference domains differ");
  const auto& cs = p.consequences();
  for (const Symbol& a : cs)
    for (const Symbol& b : cs)
      if (p.prefers(a, b) != (u.at(a) >= u.at(b))) return false;
  return true;
}

// Rank-valued representation: class i of k (best first) gets utility
// k - 1 - i, so better classes get larger values.
inline UtilityFunction canonical_utility(const PreferenceOrdering& p) {
  std::map<Symbol, Hyperreal> values;
  std::size_t k = p.classes().size();
  for (std::size_t i = 0; i < k; ++i)
    for (const Symbol& c : p.classes()[i])
      values[c] = Hyperreal(Rational(static_cast<unsigned>(k - 1 - i)));
  return UtilityFunction(std::move(values));
}

// Positive affine transform a*u + b; requires a > 0.
inline UtilityFunction affine(const UtilityFunction& u, const Hyperreal& a,
                              const Hyperreal& b) {
  if (!(a > Hyperreal(0)))
    throw std::invalid_argument("affine scale must be positive");
  std::map<Symbol, Hyperreal> values;
  for (const auto& [c, v] : u.values()) values[c] = a * v + b;
  return UtilityFunction(std::move(values));
}

// Probability-weighted utility under an explicit distribution over the
// given consequence list. The distribution must be a distribution.
inline Hyperreal expected_utility(const UtilityFunction& u,
                                  const std::vector<Symbol>& consequences,
                                  const std::vector<Rational>& dist) {
  if (consequences.size() != dist.size())
    throw std::invalid_argument("distribution width mismatch");
  Rational sum = 0;
  for (const Rational& p : dist) {
    if (p < 0) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (sum != 1) throw std::invalid_argument("distribution does not sum to 1");
  Hyperreal eu;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] == 0) continue;
    eu += u.at(consequences[i]) * Hyperreal(dist[i]);
  }
  return eu;
}

// Expected utility of reporting x under the post-processed mechanism.
inline Hyperreal expected_utility(const UtilityFunction& u,
                                  const TableMechanism& m,
                                  const PostProcessor& f, const InputTuple& x) {
  return expected_utility(u, f.consequences(), consequence_distribution(m, f, x));
}

}  // namespace dpdt
