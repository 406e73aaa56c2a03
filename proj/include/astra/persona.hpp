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

// Scripted partners for self-play. A persona sees the scenario with both
// true profiles and the session so far; its reply is a pure function of
// (config, session).

#ifndef ASTRA_PERSONA_HPP_
#define ASTRA_PERSONA_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "astra/adapter.hpp"
#include "astra/session.hpp"

namespace astra {

enum class PersonaKind { kBase, kGreedy, kFair };

const char* persona_name(PersonaKind k);
std::optional<PersonaKind> parse_persona(std::string_view name);

struct PersonaConfig {
  PersonaKind kind = PersonaKind::kBase;
  Rational concession_step{2};
  Rational fair_target_share{1, 2};
  Rational fair_tolerance{3};
  Rational anchor_fraction{7, 12};
  // Base and greedy never ask for less than this share of their PMS.
  Rational floor_fraction{1, 3};
  // Identical own offers in a row after which base and greedy concede anyway.
  int patience = 2;
  std::uint64_t rng_seed = 0;

  // Greedy defaults: step 1, anchor 11/12, patience 4.
  static PersonaConfig for_kind(PersonaKind kind, std::uint64_t seed = 0);
  void validate() const;
};

// The persona's own score for an allocation in the agent's frame.
Rational persona_score(const Scenario& scenario, const std::vector<int>& agent_claims);

// Allocation (agent's frame) whose persona score is the smallest value
// >= target, ties broken toward the agent's higher score and then by a
// seeded draw. Falls back to the persona's best allocation when nothing
// reaches the target.
std::vector<int> persona_offer_for_target(const Scenario& scenario, const Rational& target,
                                          std::uint64_t seed);

// The allocation whose persona score is nearest share * PMS, then the
// larger agent score, then a seeded draw.
std::vector<int> fair_allocation(const Scenario& scenario, const Rational& share,
                                 std::uint64_t seed);

PartnerEvent persona_respond(const PersonaConfig& persona, const Scenario& scenario,
                             const SessionState& state);

// Delegates to an external model, falling back to the scripted reply when
// the adapter fails or replies with an invalid action.
PartnerEvent adapter_persona_respond(ModelAdapter& adapter, const PersonaConfig& persona,
                                     const Scenario& scenario, const SessionState& state,
                                     bool* fallback);

}  // namespace astra

#endif  // ASTRA_PERSONA_HPP_
