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

#include "astra/persona.hpp"

#include <algorithm>
#include <random>

#include "astra/error.hpp"

namespace astra {

const char* persona_name(PersonaKind k) {
  switch (k) {
    case PersonaKind::kBase:
      return "base";
    case PersonaKind::kGreedy:
      return "greedy";
    case PersonaKind::kFair:
      return "fair";
  }
  return "?";
}

std::optional<PersonaKind> parse_persona(std::string_view name) {
  for (PersonaKind k : {PersonaKind::kBase, PersonaKind::kGreedy, PersonaKind::kFair}) {
    if (name == persona_name(k)) return k;
  }
  return std::nullopt;
}

PersonaConfig PersonaConfig::for_kind(PersonaKind kind, std::uint64_t seed) {
  PersonaConfig c;
  c.kind = kind;
  c.rng_seed = seed;
  if (kind == PersonaKind::kGreedy) {
    c.concession_step = 1;
    c.anchor_fraction = Rational(11, 12);
    c.patience = 4;
  }
  return c;
}

void PersonaConfig::validate() const {
  std::vector<std::string> errors;
  if (concession_step < Rational(0)) errors.push_back("concession_step must be >= 0");
  if (fair_target_share <= Rational(0) || fair_target_share >= Rational(1)) {
    errors.push_back("fair_target_share must lie in (0,1)");
  }
  if (fair_tolerance < Rational(0)) errors.push_back("fair_tolerance must be >= 0");
  if (anchor_fraction <= Rational(0) || anchor_fraction > Rational(1)) {
    errors.push_back("anchor_fraction must lie in (0,1]");
  }
  if (floor_fraction < Rational(0) || floor_fraction > anchor_fraction) {
    errors.push_back("floor_fraction must lie in [0, anchor_fraction]");
  }
  if (patience < 1) errors.push_back("patience must be >= 1");
  if (!errors.empty()) throw Error(ErrorCode::kValidation, "invalid persona config", errors);
}

Rational persona_score(const Scenario& scenario, const std::vector<int>& agent_claims) {
  return score_claims(scenario, agent_claims, scenario.partner_truth(), Side::kCounterpart);
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <typename Better>
std::vector<int> pick(const std::vector<ScoredAllocation>& space, Better better,
                      std::uint64_t seed) {
  std::vector<const ScoredAllocation*> best;
  for (const auto& s : space) {
    if (best.empty() || better(s, *best.front())) {
      best.assign(1, &s);
    } else if (!better(*best.front(), s)) {
      best.push_back(&s);
    }
  }
  if (best.empty()) throw Error(ErrorCode::kInfeasible, "scenario has no allocations");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> draw(0, best.size() - 1);
  return best[draw(rng)]->claims;
}

std::vector<ScoredAllocation> truth_space(const Scenario& scenario) {
  return score_allocations(scenario, scenario.agent_prefs, scenario.partner_truth());
}

std::string offer_text(const Scenario& scenario, const std::vector<int>& agent_claims) {
  return "How about I take " + describe_claims(scenario, complement(scenario, agent_claims)) + "?";
}

PartnerEvent answer(const Scenario& scenario, const Question& q) {
  const auto& w = scenario.partner_truth().weights;
  PartnerEvent e;
  PreferenceStatement s;
  switch (q.kind) {
    case QuestionKind::kHighest:
      s.issue = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
      s.relation = Relation::kHighest;
      e.utterance = scenario.issues[s.issue].name + " matters most to me.";
      break;
    case QuestionKind::kLowest:
      s.issue = static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
      s.relation = Relation::kLowest;
      e.utterance = scenario.issues[s.issue].name + " matters least to me.";
      break;
    case QuestionKind::kCompare: {
      if (!q.issue || !q.other || w[*q.issue] == w[*q.other]) {
        e.utterance = "I value those about the same.";
        return e;
      }
      const bool first = w[*q.other] < w[*q.issue];
      s.issue = first ? *q.issue : *q.other;
      s.other = first ? *q.other : *q.issue;
      s.relation = Relation::kGreaterThan;
      e.utterance = scenario.issues[s.issue].name + " matters more to me than " +
                    scenario.issues[s.other].name + ".";
      break;
    }
  }
  e.statements.push_back(s);
  return e;
}

}  // namespace

std::vector<int> persona_offer_for_target(const Scenario& scenario, const Rational& target,
                                          std::uint64_t seed) {
  const auto space = truth_space(scenario);
  const bool reachable = std::any_of(space.begin(), space.end(), [&](const ScoredAllocation& s) {
    return s.scores.partner >= target;
  });
  return pick(
      space,
      [&](const ScoredAllocation& a, const ScoredAllocation& b) {
        if (!reachable) {
          if (a.scores.partner != b.scores.partner) return a.scores.partner > b.scores.partner;
          return a.scores.agent > b.scores.agent;
        }
        const bool ra = a.scores.partner >= target, rb = b.scores.partner >= target;
        if (ra != rb) return ra;
        if (a.scores.partner != b.scores.partner) {
          return ra ? a.scores.partner < b.scores.partner : a.scores.partner > b.scores.partner;
        }
        return a.scores.agent > b.scores.agent;
      },
      seed);
}

std::vector<int> fair_allocation(const Scenario& scenario, const Rational& share,
                                 std::uint64_t seed) {
  const auto space = truth_space(scenario);
  const Rational target = share * possible_max_score(scenario, scenario.partner_truth());
  auto gap = [&](const ScoredAllocation& s) { return (s.scores.partner - target).abs(); };
  return pick(
      space,
      [&](const ScoredAllocation& a, const ScoredAllocation& b) {
        const Rational ga = gap(a), gb = gap(b);
        if (ga != gb) return ga < gb;
        return a.scores.agent > b.scores.agent;
      },
      seed);
}

PartnerEvent persona_respond(const PersonaConfig& persona, const Scenario& scenario,
                             const SessionState& state) {
  persona.validate();
  const std::uint64_t seed = mix(persona.rng_seed, static_cast<std::uint64_t>(state.partner_turns));
  PartnerEvent e;
  if (!state.last_move) {
    e.utterance = "Hello! Let's start.";
    return e;
  }
  const AgentMove& move = *state.last_move;
  if (move.mode == Mode::kAskPreference) {
    return answer(scenario, move.question.value_or(Question{}));
  }
  if (move.mode != Mode::kProposeOffer || !move.claims) return e;

  const std::vector<int>& offered = *move.claims;
  const Rational u = persona_score(scenario, offered);
  const Rational pms = possible_max_score(scenario, scenario.partner_truth());
  const Rational anchor((persona.anchor_fraction * pms).round());
  const Rational floor = persona.floor_fraction * pms;

  std::vector<Rational> mine;
  for (const auto& claims : state.partner_offers()) mine.push_back(persona_score(scenario, claims));

  if (persona.kind == PersonaKind::kFair) {
    if (u >= persona.fair_target_share * pms - persona.fair_tolerance) {
      e.accept = true;
      e.utterance = "That split is fair. Deal.";
      return e;
    }
    const auto fair = fair_allocation(scenario, persona.fair_target_share, persona.rng_seed);
    e.offer = Offer{complement(scenario, fair), std::nullopt};
    e.utterance = offer_text(scenario, fair) + " That is an even split.";
    return e;
  }

  Rational target = anchor;
  if (!mine.empty()) {
    target = mine.back();
    int stalled = 0;
    for (std::size_t k = mine.size(); k-- > 0 && mine[k] == mine.back();) ++stalled;
    bool concede = stalled >= persona.patience;
    if (persona.kind == PersonaKind::kBase) {
      const auto agent_offers = state.own_offers();
      const std::size_t n = agent_offers.size();
      concede = concede || (n >= 2 && persona_score(scenario, agent_offers[n - 1]) >
                                          persona_score(scenario, agent_offers[n - 2]));
    }
    if (concede) target = max(floor, target - persona.concession_step);
  }
  if (u >= target) {
    e.accept = true;
    e.utterance = "That works for me. Deal.";
    return e;
  }
  const auto claims = persona_offer_for_target(scenario, target, seed);
  e.offer = Offer{complement(scenario, claims), std::nullopt};
  e.utterance = offer_text(scenario, claims);
  return e;
}

PartnerEvent adapter_persona_respond(ModelAdapter& adapter, const PersonaConfig& persona,
                                     const Scenario& scenario, const SessionState& state,
                                     bool* fallback) {
  try {
    Json transcript = Json::array();
    for (const auto& e : state.log) transcript.push_back(e);
    const Json reply = adapter.call({{"task", "persona_respond"},
                                     {"persona", persona_name(persona.kind)},
                                     {"scenario", scenario_to_json(scenario)},
                                     {"transcript", transcript}});
    PartnerEvent e = partner_event_from_json(reply, scenario);
    if (e.offer) require_valid(*e.offer, scenario);
    return e;
  } catch (const std::exception&) {
    *fallback = true;
    return persona_respond(persona, scenario, state);
  }
}

}  // namespace astra
