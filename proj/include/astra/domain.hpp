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

// Scenario, preference, offer and signal types shared by every module.

#ifndef ASTRA_DOMAIN_HPP_
#define ASTRA_DOMAIN_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "astra/rational.hpp"

namespace astra {

enum class IssueKind {
  kAllocatedInteger,   // a pool of units split between the parties
  kSharedCategorical,  // one option chosen for both parties
  kSharedBinary,       // one flag applying to both parties
};

const char* issue_kind_name(IssueKind kind);

// Issue values are plain ints: units claimed (allocated), option index
// (categorical) or 0/1 (binary).
struct IssueSpec {
  std::string name;
  IssueKind kind = IssueKind::kAllocatedInteger;
  int min_units = 0;
  int max_units = 0;
  std::vector<std::string> options;
  std::string description;

  static IssueSpec allocated(std::string name, int min_units, int max_units);
  static IssueSpec categorical(std::string name, std::vector<std::string> options);
  static IssueSpec binary(std::string name);

  int lowest_value() const;
  int highest_value() const;
  int domain_size() const { return highest_value() - lowest_value() + 1; }
  bool contains(int value) const { return value >= lowest_value() && value <= highest_value(); }

  // Value the other party receives. Allocated issues split a pool of
  // min_units + max_units so both shares stay within [min, max]; shared
  // issues return the value unchanged.
  int complement(int value) const;
};

// Points per unit for allocated issues, the issue weight for shared issues,
// and for categorical issues a multiplier in [0,1] per option.
struct PreferenceProfile {
  std::vector<Rational> weights;
  std::vector<std::vector<Rational>> option_multipliers;

  friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;
};

struct Scenario {
  std::string id;
  int max_turns = 20;
  std::vector<IssueSpec> issues;
  PreferenceProfile agent_prefs;
  // Ground truth for the simulator; absent in live coaching sessions.
  std::optional<PreferenceProfile> partner_prefs;

  std::optional<std::size_t> issue_index(std::string_view name) const;
  const PreferenceProfile& partner_truth() const;
};

// Structural problems with the scenario; empty when well formed.
std::vector<std::string> scenario_violations(const Scenario& scenario);
// Throws Error(kValidation) carrying every violation.
void require_valid(const Scenario& scenario);

enum class Side { kProposer, kCounterpart };

// One value per issue from the proposer's perspective. `counterpart` holds
// what the proposer explicitly stated the other side receives, when it did;
// it must agree with the complement of `claims`.
struct Offer {
  std::vector<int> claims;
  std::optional<std::vector<int>> counterpart;

  friend bool operator==(const Offer&, const Offer&) = default;
};

// Every unit-bound, option-membership and over-specification problem.
std::vector<std::string> validate_offer(const Offer& offer, const Scenario& scenario);
void require_valid(const Offer& offer, const Scenario& scenario);

// Claims as seen from the other party.
std::vector<int> complement(const Scenario& scenario, const std::vector<int>& claims);

// "food=3 water=3 firewood=1" with option names for categorical issues.
std::string describe_claims(const Scenario& scenario, const std::vector<int>& claims);

enum class Fairness { kFair, kUnfair, kUnknown };
enum class Stance { kGenerous, kNeutral, kGreedy, kUnknown };

struct BehaviorSignal {
  Fairness fairness = Fairness::kUnknown;
  Stance stance = Stance::kUnknown;

  friend bool operator==(const BehaviorSignal&, const BehaviorSignal&) = default;
};

const char* fairness_name(Fairness f);
const char* stance_name(Stance s);

enum class Tactic { kLIC, kCSC, kRC, kLGR, kMGF, kAEO, kREO, kNCR, kRNC };

inline constexpr Tactic kAllTactics[] = {Tactic::kLIC, Tactic::kCSC, Tactic::kRC,
                                         Tactic::kLGR, Tactic::kMGF, Tactic::kAEO,
                                         Tactic::kREO, Tactic::kNCR, Tactic::kRNC};

const char* tactic_code(Tactic t);
std::optional<Tactic> parse_tactic(std::string_view code);
bool is_competitive(Tactic t);

struct TacticDescription {
  const char* name;
  const char* when;
  const char* how;
  const char* why;
};
const TacticDescription& describe(Tactic t);

enum class SolverKind { kEnumerate, kBranchAndBound };

struct EngineConfig {
  Rational fairness_threshold{4};
  Rational ts_weight{3, 4};
  Rational alpha{7, 20};
  Rational beta{13, 20};
  int candidate_count = 5;
  Rational batna{12};
  Rational anchor_fraction{5, 6};
  Rational lambda_greedy{9, 10};
  Rational lambda_neutral{1, 2};
  Rational lambda_generous{3, 10};
  Rational lambda_unknown{1};
  Rational concession_threshold{2};
  // Optimizer floors as a fraction of each party's possible max score;
  // 10/36 and 5/36 give the 10- and 5-point floors on a 36-point scenario.
  Rational agent_floor_fraction{10, 36};
  Rational partner_floor_fraction{5, 36};
  Rational lambda_step{1, 10};
  int lambda_radius = 3;
  int smax_steps = 10;
  Rational extreme_offer_share{7, 10};
  int max_preference_questions = 2;
  SolverKind solver = SolverKind::kEnumerate;
  std::size_t enumeration_cap = 10'000'000;

  // Throws Error(kValidation) listing every out-of-range field.
  void validate() const;
};

}  // namespace astra

#endif  // ASTRA_DOMAIN_HPP_
