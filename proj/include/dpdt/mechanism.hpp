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

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpdt/rational.hpp"

namespace dpdt {

using Symbol = std::string;
using InputTuple = std::vector<Symbol>;

// Distinguished opt-out report.
inline const Symbol kOptOut = "\xE2\x8A\xA5";  // U+22A5

// Per-agent finite report alphabets. The opt-out symbol is ordinary data
// here; participation analyses require it to be present and say so when it
// is not.
class InputSpace {
 public:
  InputSpace() = default;
  explicit InputSpace(std::vector<std::vector<Symbol>> alphabets)
      : alphabets_(std::move(alphabets)) {
    if (alphabets_.empty()) throw std::invalid_argument("no agents");
    for (const auto& a : alphabets_) {
      if (a.empty()) throw std::invalid_argument("empty alphabet");
      if (std::set<Symbol>(a.begin(), a.end()).size() != a.size())
        throw std::invalid_argument("duplicate symbol in alphabet");
    }
  }

  // n agents sharing one alphabet.
  static InputSpace uniform(std::size_t n, std::vector<Symbol> alphabet) {
    return InputSpace(std::vector<std::vector<Symbol>>(n, std::move(alphabet)));
  }

  std::size_t agent_count() const { return alphabets_.size(); }
  const std::vector<Symbol>& alphabet(std::size_t j) const {
    return alphabets_.at(j);
  }
  bool has_opt_out(std::size_t j) const {
    const auto& a = alphabets_.at(j);
    return std::find(a.begin(), a.end(), kOptOut) != a.end();
  }

  bool valid(const InputTuple& x) const {
    if (x.size() != alphabets_.size()) return false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto& a = alphabets_[j];
      if (std::find(a.begin(), a.end(), x[j]) == a.end()) return false;
    }
    return true;
  }

  // All input tuples, lexicographic in the declared alphabet orders.
  std::vector<InputTuple> inputs() const {
    std::vector<InputTuple> out;
    InputTuple current(alphabets_.size());
    enumerate(0, current, out);
    return out;
  }

  // All environments for agent j: tuples over the other agents' alphabets,
  // in agent order with j removed.
  std::vector<InputTuple> environments(std::size_t j) const {
    check_agent(j);
    std::vector<std::vector<Symbol>> rest;
    for (std::size_t i = 0; i < alphabets_.size(); ++i)
      if (i != j) rest.push_back(alphabets_[i]);
    if (rest.empty()) return {InputTuple{}};
    return InputSpace(std::move(rest)).inputs();
  }

  InputTuple with_response(std::size_t j, const Symbol& response,
                           const InputTuple& environment) const {
    check_agent(j);
    if (environment.size() + 1 != alphabets_.size())
      throw std::invalid_argument("environment size mismatch");
    InputTuple x;
    x.reserve(alphabets_.size());
    x.insert(x.end(), environment.begin(), environment.begin() + j);
    x.push_back(response);
    x.insert(x.end(), environment.begin() + j, environment.end());
    return x;
  }

  friend bool operator==(const InputSpace&, const InputSpace&) = default;

 private:
  void check_agent(std::size_t j) const {
    if (j >= alphabets_.size()) throw std::invalid_argument("agent index out of range");
  }
  void enumerate(std::size_t j, InputTuple& current,
                 std::vector<InputTuple>& out) const {
    if (j == alphabets_.size()) {
      out.push_back(current);
      return;
    }
    for (const Symbol& s : alphabets_[j]) {
      current[j] = s;
      enumerate(j + 1, current, out);
    }
  }

  std::vector<std::vector<Symbol>> alphabets_;
};

// Bounded (switch) neighbors: tuples differing in exactly one coordinate.
inline std::vector<InputTuple> neighbors(const InputSpace& space,
                                         const InputTuple& x) {
  if (!space.valid(x)) throw std::invalid_argument("input tuple not in space");
  std::vector<InputTuple> out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (const Symbol& s : space.alphabet(j)) {
      if (s == x[j]) continue;
      InputTuple y = x;
      y[j] = s;
      out.push_back(std::move(y));
    }
  }
  return out;
}

// Finite mechanism as an explicit conditional probability table with exact
// rational entries: one row per input tuple, one column per output.
class TableMechanism {
 public:
  TableMechanism() = default;
  TableMechanism(InputSpace space, std::vector<Symbol> outputs,
                 std::map<InputTuple, std::vector<Rational>> rows)
      : space_(std::move(space)),
        outputs_(std::move(outputs)),
        rows_(std::move(rows)) {
    validate();
  }

  const InputSpace& space() const { return space_; }
  const std::vector<Symbol>& outputs() const { return outputs_; }
  const std::map<InputTuple, std::vector<Rational>>& rows() const {
    return rows_;
  }

  const std::vector<Rational>& row(const InputTuple& x) const {
    auto it = rows_.find(x);
    if (it == rows_.end()) throw std::invalid_argument("input tuple not in space");
    return it->second;
  }

  Rational probability(const InputTuple& x, std::size_t output_index) const {
    return row(x).at(output_index);
  }

  std::size_t output_index(const Symbol& o) const {
    auto it = std::find(outputs_.begin(), outputs_.end(), o);
    if (it == outputs_.end()) throw std::invalid_argument("unknown output: " + o);
    return static_cast<std::size_t>(it - outputs_.begin());
  }

 private:
  void validate() const {
    if (outputs_.empty()) throw std::invalid_argument("no outputs");
    if (std::set<Symbol>(outputs_.begin(), outputs_.end()).size() != outputs_.size())
      throw std::invalid_argument("duplicate output symbol");
    auto inputs = space_.inputs();
    if (rows_.size() != inputs.size())
      throw std::invalid_argument("row count does not match input space");
    for (const auto& x : inputs) {
      auto it = rows_.find(x);
      if (it == rows_.end()) throw std::invalid_argument("missing row");
      const auto& p = it->second;
      if (p.size() != outputs_.size())
        throw std::invalid_argument("row width does not match outputs");
      Rational sum = 0;
      for (const Rational& v : p) {
        if (v < 0) throw std::invalid_argument("negative probability");
        sum += v;
      }
      if (sum != 1) throw std::invalid_argument("row does not sum to 1");
    }
  }

  InputSpace space_;
  std::vector<Symbol> outputs_;
  std::map<InputTuple, std::vector<Rational>> rows_;
};

// Possibly randomized map from mechanism outputs to a finite consequence
// set; deterministic maps are point masses.
class PostProcessor {
 public:
  PostProcessor() = default;
  PostProcessor(std::vector<Symbol> consequences,
                std::map<Symbol, std::vector<Rational>> rows)
      : consequences_(std::move(consequences)), rows_(std::move(rows)) {
    if (consequences_.empty()) throw std::invalid_argument("no consequences");
    if (std::set<Symbol>(consequences_.begin(), consequences_.end()).size() !=
        consequences_.size())
      throw std::invalid_argument("duplicate consequence symbol");
    for (const auto& [o, p] : rows_) {
      if (p.size() != consequences_.size())
        throw std::invalid_argument("post-processor row width mismatch");
      Rational sum = 0;
      for (const Rational& v : p) {
        if (v < 0) throw std::invalid_argument("negative probability");
        sum += v;
      }
      if (sum != 1) throw std::invalid_argument("post-processor row does not sum to 1");
    }
  }

  static PostProcessor identity(const std::vector<Symbol>& outputs) {
    std::map<Symbol, std::vector<Rational>> rows;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
      std::vector<Rational> p(outputs.size(), Rational(0));
      p[i] = 1;
      rows[outputs[i]] = std::move(p);
    }
    return PostProcessor(outputs, std::move(rows));
  }

  static PostProcessor deterministic(const std::vector<Symbol>& consequences,
                                     const std::map<Symbol, Symbol>& map) {
    std::map<Symbol, std::vector<Rational>> rows;
    for (const auto& [o, c] : map) {
      auto it = std::find(consequences.begin(), consequences.end(), c);
      if (it == consequences.end())
        throw std::invalid_argument("unknown consequence: " + c);
      std::vector<Rational> p(consequences.size(), Rational(0));
      p[static_cast<std::size_t>(it - consequences.begin())] = 1;
      rows[o] = std::move(p);
    }
    return PostProcessor(consequences, std::move(rows));
  }

  const std::vector<Symbol>& consequences() const { return consequences_; }
  const std::map<Symbol, std::vector<Rational>>& rows() const { return rows_; }

  const std::vector<Rational>& row(const Symbol& output) const {
    auto it = rows_.find(output);
    if (it == rows_.end())
      throw std::invalid_argument("post-processor does not cover output: " + output);
    return it->second;
  }

 private:
  std::vector<Symbol> consequences_;
  std::map<Symbol, std::vector<Rational>> rows_;
};

// Distribution of f(M(x)) over the consequence set: the mechanism row at x
// pushed through the post-processor.
inline std::vector<Rational> consequence_distribution(const TableMechanism& m,
                                                      const PostProcessor& f,
                                                      const InputTuple& x) {
  const auto& mech_row = m.row(x);
  std::vector<Rational> dist(f.consequences().size(), Rational(0));
  for (std::size_t o = 0; o < m.outputs().size(); ++o) {
    if (mech_row[o] == 0) continue;
    const auto& frow = f.row(m.outputs()[o]);
    for (std::size_t c = 0; c < dist.size(); ++c) dist[c] += mech_row[o] * frow[c];
  }
  return dist;
}

// f composed with m as a mechanism over the consequence space.
inline TableMechanism compose(const TableMechanism& m, const PostProcessor& f) {
  std::map<InputTuple, std::vector<Rational>> rows;
  for (const auto& x : m.space().inputs()) rows[x] = consequence_distribution(m, f, x);
  return TableMechanism(m.space(), f.consequences(), std::move(rows));
}

// Two-agent noisy-count mechanism over O = {0,1,2}: row keyed by the number
// of ones in the input, with entries phi * {1, e^eps, e^2eps} arranged as
//   count 0: (phi,        e^eps phi,  e^2eps phi)
//   count 1: (phi,        e^2eps phi, e^eps phi)
//   count 2: (e^eps phi,  e^2eps phi, phi)
// where phi = (1 + e^eps + e^2eps)^{-1}. `e_eps` is e^eps as an exact
// rational (pick eps = ln of a rational), so the table is exact.
inline TableMechanism noisy_count_mechanism(const Rational& e_eps,
                                            bool with_opt_out = false) {
  if (e_eps < 1) throw std::invalid_argument("e^eps must be >= 1");
  Rational e1 = e_eps, e2 = e_eps * e_eps;
  Rational phi = 1 / (1 + e1 + e2);
  std::vector<std::vector<Rational>> by_count = {
      {phi, e1 * phi, e2 * phi},
      {phi, e2 * phi, e1 * phi},
      {e1 * phi, e2 * phi, phi},
  };
  std::vector<Symbol> alphabet =
      with_opt_out ? std::vector<Symbol>{kOptOut, "0", "1"}
                   : std::vector<Symbol>{"0", "1"};
  InputSpace space = InputSpace::uniform(2, alphabet);
  std::map<InputTuple, std::vector<Rational>> rows;
  for (const auto& x : space.inputs()) {
    std::size_t count = 0;
    for (const Symbol& s : x) count += (s == "1");
    rows[x] = by_count[count];
  }
  return TableMechanism(std::move(space), {"0", "1", "2"}, std::move(rows));
}

// Consequences of the noisy count for the suspected member: grief unless
// the count is zero.
inline PostProcessor grief_if_nonzero_postprocessor() {
  return PostProcessor::deterministic({"g", "n"},
                                      {{"0", "n"}, {"1", "g"}, {"2", "g"}});
}

// One-bit randomized response: report flipped with the given probability.
inline TableMechanism randomized_response_mechanism(const Rational& flip) {
  if (flip < 0 || flip > 1) throw std::invalid_argument("flip probability in [0,1]");
  InputSpace space = InputSpace::uniform(1, {"0", "1"});
  std::map<InputTuple, std::vector<Rational>> rows;
  rows[{"0"}] = {1 - flip, flip};
  rows[{"1"}] = {flip, 1 - flip};
  return TableMechanism(std::move(space), {"0", "1"}, std::move(rows));
}

// Single-agent mechanism that leaks the submitted response with probability
// `delta` and otherwise outputs a fixed symbol; opting out is never leaked.
// Audits to tightest pure epsilon = infinity and tight delta(eps=0) = delta.
inline TableMechanism reveal_with_probability_mechanism(const Rational& delta) {
  if (delta < 0 || delta > 1) throw std::invalid_argument("delta in [0,1]");
  InputSpace space(std::vector<std::vector<Symbol>>{{kOptOut, "1"}});
  std::map<InputTuple, std::vector<Rational>> rows;
  rows[{kOptOut}] = {Rational(0), Rational(1)};
  rows[{"1"}] = {delta, 1 - delta};
  return TableMechanism(std::move(space), {"1", "silent"}, std::move(rows));
}

// Post-processor of a judge who punishes only on certainty: an output is
// mapped to `convict` exactly when it is reachable only through inputs
// where agent j reports one of `guilty`, i.e. observing it proves the
// report. Everything else maps to `acquit`.
inline PostProcessor certainty_postprocessor(const TableMechanism& m,
                                             std::size_t j,
                                             const std::set<Symbol>& guilty,
                                             const Symbol& convict = "g",
                                             const Symbol& acquit = "n") {
  auto inputs = m.space().inputs();
  std::map<Symbol, Symbol> verdicts;
  for (std::size_t o = 0; o < m.outputs().size(); ++o) {
    bool reachable_innocent = false, reachable_guilty = false;
    for (const auto& x : inputs) {
      if (m.probability(x, o) == 0) continue;
      (guilty.count(x.at(j)) ? reachable_guilty : reachable_innocent) = true;
    }
    verdicts[m.outputs()[o]] =
        (reachable_guilty && !reachable_innocent) ? convict : acquit;
  }
  return PostProcessor::deterministic({convict, acquit}, verdicts);
}

}  // namespace dpdt
