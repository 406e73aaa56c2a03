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

#include "astra/policy.hpp"

namespace astra {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kAskPreference:
      return "ask-preference";
    case Mode::kAccept:
      return "accept";
    case Mode::kWalkAway:
      return "walk-away";
    case Mode::kProposeOffer:
      return "propose-offer";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view name) {
  for (Mode m : {Mode::kAskPreference, Mode::kAccept, Mode::kWalkAway, Mode::kProposeOffer}) {
    if (name == mode_name(m)) return m;
  }
  if (name == "ask") return Mode::kAskPreference;
  if (name == "propose") return Mode::kProposeOffer;
  if (name == "walk") return Mode::kWalkAway;
  return std::nullopt;
}

const char* walk_decision_name(WalkDecision d) {
  switch (d) {
    case WalkDecision::kStay:
      return "stay";
    case WalkDecision::kWarn:
      return "warn";
    case WalkDecision::kWalk:
      return "walk";
  }
  return "?";
}

int no_concession_streak(std::span<const ScorePair> partner_offers) {
  int streak = 0;
  for (std::size_t k = partner_offers.size(); k-- > 0;) {
    if (k > 0 && partner_offers[k].partner < partner_offers[k - 1].partner) break;
    ++streak;
  }
  return streak;
}

PolicyState derive_policy_state(std::vector<Rational> own_offers,
                                std::vector<ScorePair> partner_offers, const Rational& batna,
                                bool warning_issued, bool fresh_partner_offer, int turn) {
  PolicyState s;
  s.no_concession_streak = no_concession_streak(partner_offers);
  for (const ScorePair& p : partner_offers) {
    if (p.agent < batna) ++s.below_batna_count;
  }
  s.own_offers = std::move(own_offers);
  s.partner_offers = std::move(partner_offers);
  s.warning_issued = warning_issued;
  s.fresh_partner_offer = fresh_partner_offer;
  s.turn = turn;
  return s;
}

bool should_accept(const Rational& partner_offer_agent_score,
                   const std::optional<Rational>& last_own_offer_score) {
  return last_own_offer_score.has_value() && partner_offer_agent_score >= *last_own_offer_score;
}

WalkDecision should_walk_away(const PolicyState& state, const Rational& batna) {
  if (state.no_concession_streak >= kNoConcessionLimit) return WalkDecision::kWalk;
  if (!state.partner_offers.empty() && state.partner_offers.back().agent < batna) {
    return state.warning_issued ? WalkDecision::kWalk : WalkDecision::kWarn;
  }
  return WalkDecision::kStay;
}

ModeChoice choose_mode(const PolicyState& state, bool ipp_present, const Rational& batna,
                       int max_turns) {
  ModeChoice c;
  if (state.turn >= max_turns) {
    c.mode = Mode::kWalkAway;
    c.forced = true;
    c.reason = "turn cap of " + std::to_string(max_turns) + " reached";
    return c;
  }
  if (!ipp_present) {
    c.mode = Mode::kAskPreference;
    c.reason = "no inferred partner preferences yet";
    return c;
  }
  if (state.fresh_partner_offer && !state.partner_offers.empty()) {
    const Rational& offered = state.partner_offers.back().agent;
    std::optional<Rational> last_own;
    if (!state.own_offers.empty()) last_own = state.own_offers.back();
    if (should_accept(offered, last_own)) {
      c.mode = Mode::kAccept;
      c.reason = "partner offer scores " + offered.to_string() + " >= own last offer " +
                 last_own->to_string();
      return c;
    }
    c.walk = should_walk_away(state, batna);
    if (c.walk == WalkDecision::kWalk) {
      c.mode = Mode::kWalkAway;
      if (state.no_concession_streak >= kNoConcessionLimit) {
        c.reason = "partner made no concession in " +
                   std::to_string(state.no_concession_streak) + " consecutive offers";
      } else {
        c.reason = "second offer below BATNA " + batna.to_string() + " after a warning (" +
                   offered.to_string() + ")";
      }
      return c;
    }
  }
  c.mode = Mode::kProposeOffer;
  if (c.walk == WalkDecision::kWarn) {
    c.reason = "partner offer scores " + state.partner_offers.back().agent.to_string() +
               " below BATNA " + batna.to_string() + "; warning issued";
  } else {
    c.reason = "no accept or walk-away condition met";
  }
  return c;
}

}  // namespace astra
