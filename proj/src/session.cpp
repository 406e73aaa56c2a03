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

#include "astra/session.hpp"

#include "astra/error.hpp"

namespace astra {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kOngoing:
      return "ongoing";
    case Outcome::kAgreement:
      return "agreement";
    case Outcome::kWalkAway:
      return "walk-away";
  }
  return "?";
}

Json partner_event_to_json(const PartnerEvent& e, const Scenario& scenario) {
  Json j = Json::object();
  if (e.offer) j["offer"] = offer_to_json(*e.offer, scenario);
  if (!e.statements.empty()) {
    Json st = Json::array();
    for (const auto& s : e.statements) st.push_back(statement_to_json(s, scenario));
    j["statements"] = st;
  }
  if (e.accept) j["accept"] = true;
  if (e.walk_away) j["walk_away"] = true;
  if (!e.utterance.empty()) j["utterance"] = e.utterance;
  return j;
}

PartnerEvent partner_event_from_json(const Json& j, const Scenario& scenario) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "partner event must be an object");
  PartnerEvent e;
  if (j.contains("offer") && !j["offer"].is_null()) e.offer = offer_from_json(j["offer"], scenario);
  if (j.contains("statements")) {
    if (!j["statements"].is_array()) {
      throw Error(ErrorCode::kValidation, "statements must be an array");
    }
    for (const auto& s : j["statements"]) e.statements.push_back(statement_from_json(s, scenario));
  }
  e.accept = j.value("accept", false);
  e.walk_away = j.value("walk_away", false);
  e.utterance = j.value("utterance", std::string());
  if (e.accept && e.walk_away) {
    throw Error(ErrorCode::kValidation, "partner event cannot both accept and walk away");
  }
  return e;
}

Json agent_move_to_json(const AgentMove& m, const Scenario& scenario) {
  Json j = {{"mode", mode_name(m.mode)},
            {"warning", m.warning},
            {"forced", m.forced},
            {"reason", m.reason}};
  if (m.claims) j["offer"] = {{"claims", claims_to_json(*m.claims, scenario)}};
  if (m.question) j["question"] = question_to_json(*m.question, scenario);
  return j;
}

namespace {

Question question_from_json(const Json& j, const Scenario& scenario) {
  Question q;
  const std::string kind = j.value("kind", std::string("highest"));
  if (kind == "highest") {
    q.kind = QuestionKind::kHighest;
  } else if (kind == "lowest") {
    q.kind = QuestionKind::kLowest;
  } else if (kind == "compare") {
    q.kind = QuestionKind::kCompare;
  } else {
    throw Error(ErrorCode::kValidation, "unknown question kind '" + kind + "'");
  }
  auto issue_ref = [&](const char* key) -> std::optional<std::size_t> {
    if (!j.contains(key)) return std::nullopt;
    auto idx = scenario.issue_index(j[key].get<std::string>());
    if (!idx) throw Error(ErrorCode::kValidation, std::string("question names unknown ") + key);
    return idx;
  };
  q.issue = issue_ref("issue");
  q.other = issue_ref("other");
  return q;
}

}  // namespace

AgentMove agent_move_from_json(const Json& j, const Scenario& scenario) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "move must be an object");
  AgentMove m;
  if (j.contains("offer") && !j["offer"].is_null()) {
    const Offer offer = offer_from_json(j["offer"], scenario);
    require_valid(offer, scenario);
    m.claims = offer.claims;
    m.mode = Mode::kProposeOffer;
  }
  if (j.contains("mode")) {
    auto mode = parse_mode(j["mode"].get<std::string>());
    if (!mode) throw Error(ErrorCode::kValidation, "unknown mode '" + j["mode"].dump() + "'");
    if (m.claims && *mode != Mode::kProposeOffer) {
      throw Error(ErrorCode::kValidation, "an offer can only accompany propose-offer");
    }
    m.mode = *mode;
  } else if (!m.claims) {
    throw Error(ErrorCode::kValidation, "move needs an offer or a mode");
  }
  if (j.contains("question") && !j["question"].is_null()) {
    m.question = question_from_json(j["question"], scenario);
  }
  m.warning = j.value("warning", false);
  m.forced = j.value("forced", false);
  m.reason = j.value("reason", std::string());
  return m;
}

std::vector<std::vector<int>> SessionState::own_offers() const {
  std::vector<std::vector<int>> out;
  for (const auto& r : history) {
    if (r.by_agent) out.push_back(r.claims);
  }
  return out;
}

std::vector<std::vector<int>> SessionState::partner_offers() const {
  std::vector<std::vector<int>> out;
  for (const auto& r : history) {
    if (!r.by_agent) out.push_back(r.claims);
  }
  return out;
}

Json session_state_to_json(const SessionState& s, const Scenario& scenario) {
  Json history = Json::array();
  for (const auto& r : s.history) {
    history.push_back({{"by", r.by_agent ? "agent" : "partner"},
                       {"claims", claims_to_json(r.claims, scenario)}});
  }
  Json statements = Json::array();
  for (const auto& st : s.statements) statements.push_back(statement_to_json(st, scenario));
  Json ipp = {{"status", ipp_status_name(s.ipp.status)}};
  if (s.ipp.profile) {
    Json w = Json::object();
    for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
      w[scenario.issues[i].name] = exact_json(s.ipp.profile->weights[i]);
    }
    ipp["weights"] = w;
  }
  Json j = {{"history", history},
            {"statements", statements},
            {"ipp", ipp},
            {"questions_asked", s.questions_asked},
            {"agent_turns", s.agent_turns},
            {"partner_turns", s.partner_turns},
            {"warning_issued", s.warning_issued},
            {"fresh_partner_offer", s.fresh_partner_offer},
            {"outcome", outcome_name(s.outcome)},
            {"forced_end", s.forced_end},
            {"ended_by_partner", s.ended_by_partner},
            {"log", s.log}};
  j["pending_question"] =
      s.pending_question ? question_to_json(*s.pending_question, scenario) : Json(nullptr);
  j["last_move"] = s.last_move ? agent_move_to_json(*s.last_move, scenario) : Json(nullptr);
  j["agreement"] = s.agreement ? claims_to_json(*s.agreement, scenario) : Json(nullptr);
  return j;
}

std::vector<ScorePair> scored_partner_offers(const Scenario& scenario, const SessionState& s) {
  std::vector<ScorePair> out;
  for (const auto& r : s.history) {
    if (r.by_agent) continue;
    ScorePair p{score_claims(scenario, r.claims, scenario.agent_prefs, Side::kProposer), {}};
    if (s.ipp.profile) p.partner = score_claims(scenario, r.claims, *s.ipp.profile, Side::kCounterpart);
    out.push_back(p);
  }
  return out;
}

PolicyState policy_state(const Scenario& scenario, const EngineConfig& config,
                         const SessionState& s) {
  std::vector<Rational> own;
  for (const auto& r : s.history) {
    if (r.by_agent) own.push_back(score_claims(scenario, r.claims, scenario.agent_prefs, Side::kProposer));
  }
  return derive_policy_state(std::move(own), scored_partner_offers(scenario, s), config.batna,
                             s.warning_issued, s.fresh_partner_offer, s.agent_turns);
}

namespace {

Json offer_event(const Scenario& scenario, const SessionState& s, bool by_agent,
                 const std::vector<int>& agent_claims, int turn) {
  const std::vector<int> proposer = by_agent ? agent_claims : complement(scenario, agent_claims);
  Json j = {{"type", "offer"},
            {"by", by_agent ? "agent" : "partner"},
            {"turn", turn},
            {"claims", claims_to_json(proposer, scenario)},
            {"agent_score",
             exact_json(score_claims(scenario, agent_claims, scenario.agent_prefs, Side::kProposer))}};
  if (s.ipp.profile) {
    j["partner_score_est"] =
        exact_json(score_claims(scenario, agent_claims, *s.ipp.profile, Side::kCounterpart));
  }
  if (scenario.partner_prefs) {
    j["partner_score"] =
        exact_json(score_claims(scenario, agent_claims, *scenario.partner_prefs, Side::kCounterpart));
  }
  return j;
}

Json ipp_event(const Scenario& scenario, const IppState& ipp, int turn, const std::string& why) {
  Json w = Json::object();
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    w[scenario.issues[i].name] = exact_json(ipp.profile->weights[i]);
  }
  return {{"type", "ipp"}, {"turn", turn}, {"status", ipp_status_name(ipp.status)},
          {"weights", w}, {"reason", why}};
}

void close(const Scenario& scenario, SessionState& s, Outcome outcome,
           std::optional<std::vector<int>> agreement, const std::string& by, int turn) {
  s.outcome = outcome;
  s.agreement = std::move(agreement);
  const ScorePair scores = outcome_scores(scenario, s);
  Json j = {{"type", "outcome"},
            {"result", outcome_name(outcome)},
            {"by", by},
            {"turn", turn},
            {"forced", s.forced_end},
            {"agent_score", exact_json(scores.agent)},
            {"partner_score", exact_json(scores.partner)}};
  j["claims"] = s.agreement ? claims_to_json(*s.agreement, scenario) : Json(nullptr);
  s.log.push_back(std::move(j));
}

}  // namespace

ScorePair outcome_scores(const Scenario& scenario, const SessionState& s) {
  if (s.outcome != Outcome::kAgreement || !s.agreement) return {};
  const PreferenceProfile* partner = scenario.partner_prefs ? &*scenario.partner_prefs
                                     : s.ipp.profile        ? &*s.ipp.profile
                                                            : nullptr;
  ScorePair out{score_claims(scenario, *s.agreement, scenario.agent_prefs, Side::kProposer), {}};
  if (partner) out.partner = score_claims(scenario, *s.agreement, *partner, Side::kCounterpart);
  return out;
}

SessionState ingest(const Scenario& scenario, const EngineConfig& config, SessionState s,
                    const PartnerEvent& event) {
  if (s.closed()) throw Error(ErrorCode::kConflict, "session is closed");
  if (event.offer) require_valid(*event.offer, scenario);
  const int turn = ++s.partner_turns;
  s.pending_question.reset();
  if (!event.utterance.empty()) {
    s.log.push_back({{"type", "message"}, {"by", "partner"}, {"turn", turn}, {"text", event.utterance}});
  }

  if (event.accept) {
    if (!s.last_move || s.last_move->mode != Mode::kProposeOffer || !s.last_move->claims) {
      throw Error(ErrorCode::kValidation, "partner accepted but the agent has no open offer");
    }
    s.ended_by_partner = true;
    close(scenario, s, Outcome::kAgreement, *s.last_move->claims, "partner", turn);
    return s;
  }
  if (event.walk_away) {
    s.ended_by_partner = true;
    close(scenario, s, Outcome::kWalkAway, std::nullopt, "partner", turn);
    return s;
  }

  const auto value_set = partner_value_set(scenario);
  bool statements_changed = false;
  for (PreferenceStatement st : event.statements) {
    st.source_turn = turn;
    s.log.push_back(statement_to_json(st, scenario));
    std::vector<PreferenceStatement> trial = s.statements;
    trial.push_back(st);
    try {
      infer_profile(scenario, trial, value_set, scenario.agent_prefs);
      s.statements = std::move(trial);
      statements_changed = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kContradiction) throw;
      Json j = {{"type", "consistency"},
                {"turn", turn},
                {"kind", consistency_name(ConsistencyKind::kStatementContradiction)},
                {"detail", e.what()},
                {"statements", e.details()},
                {"action", "statement ignored"}};
      s.log.push_back(std::move(j));
    }
  }

  s.fresh_partner_offer = event.offer.has_value();
  if (event.offer) {
    std::vector<int> agent_claims = complement(scenario, event.offer->claims);
    s.history.push_back({false, agent_claims});
    s.log.push_back(offer_event(scenario, s, false, agent_claims, turn));
  }

  if (!s.ipp.profile) {
    const bool pinned = !next_question(scenario, s.statements, scenario.agent_prefs).has_value();
    if (pinned || s.questions_asked >= config.max_preference_questions) {
      s.ipp = infer_profile(scenario, s.statements, value_set, scenario.agent_prefs);
      s.log.push_back(ipp_event(scenario, s.ipp, turn,
                                pinned ? "statements fix the ranking" : "question budget spent"));
    }
    return s;
  }

  if (!statements_changed && !event.offer) return s;
  const ConsistencyReport report = check_consistency(scenario, s.ipp, s.history, s.statements);
  if (!report.consistent()) {
    s.log.push_back({{"type", "consistency"},
                     {"turn", turn},
                     {"kind", consistency_name(report.kind)},
                     {"detail", report.detail},
                     {"action", "ipp updated"}});
    IppState updated = update_ipp(scenario, s.ipp, s.statements, s.history, scenario.agent_prefs);
    if (updated.profile != s.ipp.profile) {
      s.ipp = std::move(updated);
      s.log.push_back(ipp_event(scenario, s.ipp, turn, "inconsistency"));
    }
  } else if (statements_changed) {
    IppState updated = infer_profile(scenario, s.statements, value_set, scenario.agent_prefs);
    if (updated.profile != s.ipp.profile) {
      s.ipp = std::move(updated);
      s.log.push_back(ipp_event(scenario, s.ipp, turn, "new statement"));
    }
  }
  return s;
}

Decision recommend(const Scenario& scenario, const AstraEngine& engine, const SessionState& s) {
  if (s.closed()) throw Error(ErrorCode::kConflict, "session is closed");
  const EngineConfig& config = engine.config();
  Decision d;
  d.policy = policy_state(scenario, config, s);
  const ModeChoice choice =
      choose_mode(d.policy, s.ipp.profile.has_value(), config.batna, scenario.max_turns);
  d.walk = choice.walk;
  d.move.mode = choice.mode;
  d.move.reason = choice.reason;
  d.move.forced = choice.forced;
  d.move.warning = choice.walk == WalkDecision::kWarn;

  if (choice.mode == Mode::kAskPreference) {
    d.move.question = next_question(scenario, s.statements, scenario.agent_prefs)
                          .value_or(Question{QuestionKind::kHighest, std::nullopt, std::nullopt});
  } else if (choice.mode == Mode::kProposeOffer) {
    const auto own = s.own_offers();
    const auto partner = s.partner_offers();
    d.trace = engine.propose(scenario, *s.ipp.profile, own, partner, s.agent_turns + 1);
    if (!d.trace->infeasible()) {
      d.move.claims = d.trace->selected_offer()->claims;
    } else if (!own.empty()) {
      d.move.claims = own.back();
      d.move.reason += "; offer program infeasible, repeating previous offer";
    } else {
      d.move.mode = Mode::kWalkAway;
      d.move.reason = "offer program infeasible for the opening offer";
    }
  }
  return d;
}

SessionState apply_move(const Scenario& scenario, const EngineConfig& config, SessionState s,
                        const AgentMove& move, const std::optional<StageTrace>& trace) {
  if (s.closed()) throw Error(ErrorCode::kConflict, "session is closed");
  const int turn = s.agent_turns + 1;
  Json mode = {{"type", "mode"},      {"turn", turn},          {"mode", mode_name(move.mode)},
               {"reason", move.reason}, {"warning", move.warning}, {"forced", move.forced}};
  if (move.warning) mode["batna"] = exact_json(config.batna);

  switch (move.mode) {
    case Mode::kAskPreference: {
      Question q = move.question ? *move.question
                                 : next_question(scenario, s.statements, scenario.agent_prefs)
                                       .value_or(Question{QuestionKind::kHighest, {}, {}});
      s.log.push_back(std::move(mode));
      Json qj = question_to_json(q, scenario);
      qj["type"] = "question";
      qj["turn"] = turn;
      s.log.push_back(std::move(qj));
      ++s.questions_asked;
      s.pending_question = q;
      break;
    }
    case Mode::kAccept: {
      const auto partner = s.partner_offers();
      if (partner.empty()) throw Error(ErrorCode::kValidation, "no partner offer to accept");
      s.log.push_back(std::move(mode));
      close(scenario, s, Outcome::kAgreement, partner.back(), "agent", turn);
      break;
    }
    case Mode::kWalkAway:
      s.log.push_back(std::move(mode));
      s.forced_end = move.forced;
      close(scenario, s, Outcome::kWalkAway, std::nullopt, "agent", turn);
      break;
    case Mode::kProposeOffer: {
      if (!move.claims) throw Error(ErrorCode::kValidation, "propose-offer needs an offer");
      require_valid(Offer{*move.claims, std::nullopt}, scenario);
      s.log.push_back(std::move(mode));
      if (trace) s.log.push_back(stage_trace_to_json(*trace, scenario));
      s.history.push_back({true, *move.claims});
      s.log.push_back(offer_event(scenario, s, true, *move.claims, turn));
      break;
    }
  }
  if (move.warning) s.warning_issued = true;
  s.agent_turns = turn;
  s.fresh_partner_offer = false;
  s.last_move = move;
  return s;
}

}  // namespace astra
