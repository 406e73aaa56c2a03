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

// Turn controller: which of ask / accept / walk away / propose to play.

#ifndef ASTRA_POLICY_HPP_
#define ASTRA_POLICY_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "astra/scoring.hpp"

namespace astra {

enum class Mode { kAskPreference, kAccept, kWalkAway, kProposeOffer };

const char* mode_name(Mode m);
std::optional<Mode> parse_mode(std::string_view name);

struct PolicyState {
  std::vector<Rational> own_offers;       // agent score of each own offer
  std::vector<ScorePair> partner_offers;  // (agent, partner under IPP)
  int no_concession_streak = 0;
  int below_batna_count = 0;
  bool warning_issued = false;
  bool fresh_partner_offer = false;
  int turn = 0;
};

// Consecutive most-recent partner offers that did not lower the partner's
// own score. The first offer ever made counts.
int no_concession_streak(std::span<const ScorePair> partner_offers);

PolicyState derive_policy_state(std::vector<Rational> own_offers,
                                std::vector<ScorePair> partner_offers, const Rational& batna,
                                bool warning_issued, bool fresh_partner_offer, int turn);

bool should_accept(const Rational& partner_offer_agent_score,
                   const std::optional<Rational>& last_own_offer_score);

enum class WalkDecision { kStay, kWarn, kWalk };

const char* walk_decision_name(WalkDecision d);

WalkDecision should_walk_away(const PolicyState& state, const Rational& batna);

inline constexpr int kNoConcessionLimit = 3;

struct ModeChoice {
  Mode mode = Mode::kProposeOffer;
  WalkDecision walk = WalkDecision::kStay;
  bool forced = false;
  std::string reason;
};

// Turn cap, then ask while no IPP exists, then accept, then walk away,
// otherwise propose (carrying a BATNA warning when one is due).
ModeChoice choose_mode(const PolicyState& state, bool ipp_present, const Rational& batna,
                       int max_turns);

}  // namespace astra

#endif  // ASTRA_POLICY_HPP_
