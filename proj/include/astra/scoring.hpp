// Copyright 2026 The ASTRA Negotiation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exact scoring, allocation enumeration and the Pareto frontier. Everything
// here is brute force over the finite allocation space and serves as ground
// truth for the optimizer and the simulator.

#ifndef ASTRA_SCORING_HPP_
#define ASTRA_SCORING_HPP_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "astra/domain.hpp"

namespace astra {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

struct ScorePair {
  Rational agent;
  Rational partner;

  friend bool operator==(const ScorePair&, const ScorePair&) = default;
};

// True when `a` is at least as good for both sides and strictly better for one.
bool dominates(const ScorePair& a, const ScorePair& b);

// Score of `side` under `prefs`. Validates the offer first and throws
// Error(kValidation) with the violation list when it is malformed.
Rational score(const Scenario& scenario, const Offer& offer, const PreferenceProfile& prefs,
               Side side);

// Contribution of issue `index` holding `value` (proposer frame).
Rational issue_score(const IssueSpec& issue, const PreferenceProfile& prefs, std::size_t index,
                     int value, Side side);

// Unchecked variant for hot loops; `claims` must be valid.
Rational score_claims(const Scenario& scenario, std::span<const int> claims,
                      const PreferenceProfile& prefs, Side side);

// Score of the allocation that grants this party every allocated unit and
// its best shared options.
Rational possible_max_score(const Scenario& scenario, const PreferenceProfile& prefs);

// Number of feasible allocations, saturating at SIZE_MAX.
std::size_t allocation_space_size(const Scenario& scenario);

// Every feasible allocation once, lexicographic in issue declaration order
// with ascending values. Throws Error(kSpaceTooLarge) beyond `cap`.
std::vector<std::vector<int>> enumerate_allocations(const Scenario& scenario,
                                                    std::size_t cap = kDefaultEnumerationCap);

// Allocations are in the agent's frame: claims are what the agent receives.
struct ScoredAllocation {
  std::vector<int> claims;
  ScorePair scores;
};

std::vector<ScoredAllocation> score_allocations(const Scenario& scenario,
                                                const PreferenceProfile& agent_prefs,
                                                const PreferenceProfile& partner_prefs,
                                                std::size_t cap = kDefaultEnumerationCap);

struct ParetoSet {
  // Members in enumeration order.
  std::vector<ScoredAllocation> members;

  bool contains_scores(const ScorePair& p) const;
  // Smallest Chebyshev distance in score space to any member.
  Rational distance(const ScorePair& p) const;
};

// Non-dominated subset of `all`, preserving input order.
ParetoSet pareto_filter(const std::vector<ScoredAllocation>& all);

ParetoSet pareto_frontier(const Scenario& scenario, const PreferenceProfile& agent_prefs,
                          const PreferenceProfile& partner_prefs,
                          std::size_t cap = kDefaultEnumerationCap);

// CSV with columns allocation,agent_score,partner_score,member for every
// allocation, scored with the scenario's agent and partner preferences.
void write_frontier_csv(std::ostream& os, const Scenario& scenario,
                        std::size_t cap = kDefaultEnumerationCap);

}  // namespace astra

#endif  // ASTRA_SCORING_HPP_
