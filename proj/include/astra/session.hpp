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

// Negotiation state as a value, advanced by two pure transitions: ingest a
// partner event, then apply the agent's move. recommend() reads a state and
// never changes it. The simulator and the coaching service share this code.

#ifndef ASTRA_SESSION_HPP_
#define ASTRA_SESSION_HPP_

#include <optional>
#include <string>
#include <vector>

#include "astra/engine.hpp"
#include "astra/opponent_model.hpp"
#include "astra/policy.hpp"

namespace astra {

struct PartnerEvent {
  std::optional<Offer> offer;  // partner's frame: claims are what the partner takes
  std::vector<PreferenceStatement> statements;
  bool accept = false;  // accepts the agent's latest offer
  bool walk_away = false;
  std::string utterance;
};

Json partner_event_to_json(const PartnerEvent& e, const Scenario& scenario);
PartnerEvent partner_event_from_json(const Json& j, const Scenario& scenario);

struct AgentMove {
  Mode mode = Mode::kProposeOffer;
  std::optional<std::vector<int>> claims;  // agent's frame
  std::optional<Question> question;
  bool warning = false;
  bool forced = false;
  std::string reason;
};

Json agent_move_to_json(const AgentMove& m, const Scenario& scenario);
AgentMove agent_move_from_json(const Json& j, const Scenario& scenario);

enum class Outcome { kOngoing, kAgreement, kWalkAway };

const char* outcome_name(Outcome o);

struct SessionState {
  std::vector<OfferRecord> history;  // agent's frame
  std::vector<PreferenceStatement> statements;
  IppState ipp;
  int questions_asked = 0;
  int agent_turns = 0;
  int partner_turns = 0;
  bool warning_issued = false;
  bool fresh_partner_offer = false;
  std::optional<Question> pending_question;
  std::optional<AgentMove> last_move;
  Outcome outcome = Outcome::kOngoing;
  bool forced_end = false;
  bool ended_by_partner = false;
  std::optional<std::vector<int>> agreement;  // agent's frame
  std::vector<Json> log;

  bool closed() const { return outcome != Outcome::kOngoing; }
  std::vector<std::vector<int>> own_offers() const;
  std::vector<std::vector<int>> partner_offers() const;
};

Json session_state_to_json(const SessionState& s, const Scenario& scenario);

struct Decision {
  AgentMove move;
  std::optional<StageTrace> trace;
  WalkDecision walk = WalkDecision::kStay;
  PolicyState policy;
};

// Scores of the partner offers under the current IPP (agent score under the
// agent's own profile), oldest first.
std::vector<ScorePair> scored_partner_offers(const Scenario& scenario, const SessionState& s);
PolicyState policy_state(const Scenario& scenario, const EngineConfig& config,
                         const SessionState& s);

// Records the event, infers or revises the IPP and runs the consistency
// check. Throws Error(kConflict) on a closed session and Error(kValidation)
// on a malformed offer or an accept with nothing to accept.
SessionState ingest(const Scenario& scenario, const EngineConfig& config, SessionState state,
                    const PartnerEvent& event);

Decision recommend(const Scenario& scenario, const AstraEngine& engine, const SessionState& state);

// `trace` is logged alongside a proposal when given.
SessionState apply_move(const Scenario& scenario, const EngineConfig& config, SessionState state,
                        const AgentMove& move, const std::optional<StageTrace>& trace = {});

// Final score pair of a closed session: zeros for a walk-away, otherwise the
// agreement scored with the agent's profile and the partner's true profile
// (the IPP when no truth is known).
ScorePair outcome_scores(const Scenario& scenario, const SessionState& s);

}  // namespace astra

#endif  // ASTRA_SESSION_HPP_
