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

#include "astra/coach.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>

#include "astra/json_codec.hpp"

namespace astra {

namespace fs = std::filesystem;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kValidation:
    case ErrorCode::kContradiction:
      return 400;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    case ErrorCode::kInfeasible:
    case ErrorCode::kSpaceTooLarge:
    case ErrorCode::kDegenerate:
      return 422;
    case ErrorCode::kAdapter:
      return 502;
    case ErrorCode::kIo:
      return 500;
  }
  return 500;
}

Json error_envelope(ErrorCode code, const std::string& message,
                    const std::vector<std::string>& details) {
  return {{"error", {{"code", error_code_name(code)}, {"message", message}, {"details", details}}}};
}

struct CoachService::Entry {
  std::string id;
  std::string created_at;
  Scenario scenario;
  EngineConfig config;
  AstraEngine engine;
  SessionState state;
  std::vector<Json> commands;  // commit bodies, in order
  std::optional<fs::path> journal;
  mutable std::shared_mutex mu;

  Entry(std::string id_, std::string created, Scenario s, EngineConfig c,
        std::shared_ptr<ModelAdapter> adapter)
      : id(std::move(id_)),
        created_at(std::move(created)),
        scenario(std::move(s)),
        config(c),
        engine(c, std::move(adapter)) {}
};

namespace {

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json parse_body(std::string_view body) {
  if (body.empty()) return Json::object();
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation, "request body is not valid JSON", {e.what()});
  }
}

void append_line(const fs::path& path, const Json& line) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::kIo, "cannot append to journal " + path.string());
  out << line.dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "journal write failed for " + path.string());
}

PartnerEvent event_or_empty(const Json& j, const Scenario& scenario) {
  if (j.is_null()) return {};
  return partner_event_from_json(j, scenario);
}

// Applies one commit body. Pure in its state argument.
SessionState apply_commit(const Scenario& scenario, const EngineConfig& config,
                          const AstraEngine& engine, SessionState state, const Json& body) {
  if (!body.is_object()) throw Error(ErrorCode::kValidation, "commit body must be an object");
  if (state.closed()) throw Error(ErrorCode::kConflict, "session is closed");
  if (body.contains("partner_event") && !body["partner_event"].is_null()) {
    state = ingest(scenario, config, std::move(state),
                   partner_event_from_json(body["partner_event"], scenario));
  }
  const bool has_move = body.contains("offer") || body.contains("mode");
  if (state.closed()) {
    if (has_move) throw Error(ErrorCode::kConflict, "the partner event closed the session");
    return state;
  }
  if (!has_move) {
    if (body.contains("partner_event")) return state;
    throw Error(ErrorCode::kValidation, "commit needs a partner_event, an offer or a mode");
  }
  AgentMove move = agent_move_from_json(body, scenario);
  if (move.mode == Mode::kAccept && state.partner_offers().empty()) {
    throw Error(ErrorCode::kValidation, "there is no partner offer to accept");
  }
  const Decision advised = recommend(scenario, engine, state);
  if (move.reason.empty()) {
    const bool followed = advised.move.mode == move.mode && advised.move.claims == move.claims;
    move.reason = followed ? advised.move.reason : "chosen by the user";
  }
  std::optional<StageTrace> trace;
  if (move.mode == Mode::kProposeOffer) trace = advised.trace;
  return apply_move(scenario, config, std::move(state), move, trace);
}

Json policy_json(const PolicyState& p) {
  return {{"no_concession_streak", p.no_concession_streak},
          {"below_batna_count", p.below_batna_count},
          {"warning_issued", p.warning_issued},
          {"own_offers", p.own_offers.size()},
          {"partner_offers", p.partner_offers.size()}};
}

Json summary(const std::string& id, const Scenario& scenario, const SessionState& s) {
  Json j = {{"session_id", id},
            {"outcome", outcome_name(s.outcome)},
            {"closed", s.closed()},
            {"agent_turns", s.agent_turns},
            {"partner_turns", s.partner_turns},
            {"own_offers", s.own_offers().size()},
            {"partner_offers", s.partner_offers().size()},
            {"warning_issued", s.warning_issued},
            {"log_length", s.log.size()}};
  const auto own = s.own_offers();
  j["last_own_score"] =
      own.empty() ? Json(nullptr)
                  : exact_json(score_claims(scenario, own.back(), scenario.agent_prefs,
                                            Side::kProposer));
  if (s.closed()) {
    const ScorePair sc = outcome_scores(scenario, s);
    j["agent_score"] = exact_json(sc.agent);
    j["partner_score"] = exact_json(sc.partner);
    j["agreement"] = s.agreement ? claims_to_json(*s.agreement, scenario) : Json(nullptr);
  }
  return j;
}

}  // namespace

CoachService::CoachService(CoachOptions options) : options_(std::move(options)) {
  if (options_.journal_dir) {
    std::error_code ec;
    fs::create_directories(*options_.journal_dir, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create journal directory: " + ec.message());
    restore_journals();
  }
}

CoachService::~CoachService() = default;

std::shared_ptr<CoachService::Entry> CoachService::find(const std::string& id) const {
  std::shared_lock lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw Error(ErrorCode::kNotFound, "unknown session '" + id + "'");
  return it->second;
}

Json CoachService::create_session(const Json& body) {
  if (!body.is_object() || !body.contains("scenario")) {
    throw Error(ErrorCode::kValidation, "body needs a scenario");
  }
  Scenario scenario = scenario_from_json(body["scenario"]);
  require_valid(scenario);
  EngineConfig config = config_from_json(body.value("config", Json()));
  config.validate();

  std::string id;
  {
    std::unique_lock lock(mu_);
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06lu", next_id_++);
    id = buf;
  }
  auto entry = std::make_shared<Entry>(id, now_utc(), std::move(scenario), config,
                                       options_.adapter);
  if (options_.journal_dir) {
    entry->journal = fs::path(*options_.journal_dir) / (id + ".jsonl");
    append_line(*entry->journal, {{"op", "create"},
                                  {"session_id", id},
                                  {"created_at", entry->created_at},
                                  {"scenario", scenario_to_json(entry->scenario)},
                                  {"config", config_to_json(config)}});
  }
  {
    std::unique_lock lock(mu_);
    sessions_[id] = entry;
  }
  return {{"session_id", id},
          {"scenario_id", entry->scenario.id},
          {"created_at", entry->created_at},
          {"config", config_to_json(config)}};
}

Json CoachService::advise(const std::string& id, const Json& body) const {
  auto e = find(id);
  std::shared_lock lock(e->mu);
  if (e->state.closed()) throw Error(ErrorCode::kConflict, "session is closed");
  const SessionState preview =
      ingest(e->scenario, e->config, e->state, event_or_empty(body, e->scenario));
  Json j = {{"session_id", id}, {"turn", preview.agent_turns + 1}};
  if (preview.closed()) {
    j["mode"] = nullptr;
    j["closed"] = true;
    j["outcome"] = outcome_name(preview.outcome);
    j["reason"] = "the partner event ends the session";
    return j;
  }
  const Decision d = recommend(e->scenario, e->engine, preview);
  j["closed"] = false;
  j["mode"] = mode_name(d.move.mode);
  j["reason"] = d.move.reason;
  j["warning"] = d.move.warning;
  j["forced"] = d.move.forced;
  j["policy"] = policy_json(d.policy);
  j["ipp"] = session_state_to_json(preview, e->scenario)["ipp"];
  j["question"] = nullptr;
  if (d.move.question) {
    j["question"] = agent_move_to_json(d.move, e->scenario).value("question", Json(nullptr));
  }
  j["offer"] = nullptr;
  if (d.move.claims) {
    Json offer = {{"claims", claims_to_json(*d.move.claims, e->scenario)},
                  {"agent_score", exact_json(score_claims(e->scenario, *d.move.claims,
                                                          e->scenario.agent_prefs,
                                                          Side::kProposer))}};
    if (preview.ipp.profile) {
      offer["partner_score_est"] = exact_json(
          score_claims(e->scenario, *d.move.claims, *preview.ipp.profile, Side::kCounterpart));
    }
    j["offer"] = offer;
  }
  j["trace"] = d.trace ? stage_trace_to_json(*d.trace, e->scenario) : Json(nullptr);
  return j;
}

Json CoachService::commit(const std::string& id, const Json& body) {
  auto e = find(id);
  std::unique_lock lock(e->mu);
  SessionState next = apply_commit(e->scenario, e->config, e->engine, e->state, body);
  if (e->journal) append_line(*e->journal, {{"op", "commit"}, {"body", body}});
  e->state = std::move(next);
  e->commands.push_back(body);
  return summary(e->id, e->scenario, e->state);
}

Json CoachService::report(const std::string& id) const {
  auto e = find(id);
  std::shared_lock lock(e->mu);
  const Scenario& s = e->scenario;
  Json traces = Json::array();
  for (const Json& ev : e->state.log) {
    if (ev.value("type", std::string()) == "stage_trace") traces.push_back(ev);
  }
  const PreferenceProfile* partner = s.partner_prefs          ? &*s.partner_prefs
                                     : e->state.ipp.profile ? &*e->state.ipp.profile
                                                            : nullptr;
  Json j = {{"session_id", id},
            {"created_at", e->created_at},
            {"scenario", scenario_to_json(s)},
            {"config", config_to_json(e->config)},
            {"summary", summary(e->id, e->scenario, e->state)},
            {"log", e->state.log},
            {"stage_traces", traces},
            {"frontier_basis", !partner ? "none" : s.partner_prefs ? "truth" : "ipp"}};
  Json frontier = Json::array();
  Json offers = Json::array();
  if (partner) {
    const ParetoSet set = pareto_frontier(s, s.agent_prefs, *partner);
    for (const auto& m : set.members) {
      frontier.push_back({{"claims", claims_to_json(m.claims, s)},
                          {"agent_score", exact_json(m.scores.agent)},
                          {"partner_score", exact_json(m.scores.partner)}});
    }
    int index = 0;
    for (const OfferRecord& r : e->state.history) {
      const ScorePair sc{score_claims(s, r.claims, s.agent_prefs, Side::kProposer),
                         score_claims(s, r.claims, *partner, Side::kCounterpart)};
      offers.push_back({{"index", index++},
                        {"by", r.by_agent ? "agent" : "partner"},
                        {"claims", claims_to_json(r.claims, s)},
                        {"agent_score", exact_json(sc.agent)},
                        {"partner_score", exact_json(sc.partner)},
                        {"pareto_member", set.contains_scores(sc)},
                        {"frontier_distance", exact_json(set.distance(sc))}});
    }
  }
  j["frontier"] = frontier;
  j["offers"] = offers;
  return j;
}

Json CoachService::state(const std::string& id) const {
  auto e = find(id);
  std::shared_lock lock(e->mu);
  return session_state_to_json(e->state, e->scenario);
}

Json CoachService::rebuild_state(const std::string& id) const {
  auto e = find(id);
  std::shared_lock lock(e->mu);
  SessionState s;
  for (const Json& body : e->commands) {
    s = apply_commit(e->scenario, e->config, e->engine, std::move(s), body);
  }
  return session_state_to_json(s, e->scenario);
}

std::vector<std::string> CoachService::session_ids() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

void CoachService::restore_journals() {
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(*options_.journal_dir)) {
    if (de.is_regular_file() && de.path().extension() == ".jsonl") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& path : files) {
    std::ifstream in(path);
    std::string line;
    std::shared_ptr<Entry> entry;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const std::string where = path.string() + ":" + std::to_string(line_no);
      Json j;
      try {
        j = Json::parse(line);
      } catch (const Json::parse_error& err) {
        throw Error(ErrorCode::kIo, "corrupt journal line " + where, {err.what()});
      }
      const std::string op = j.value("op", std::string());
      if (op == "create") {
        entry = std::make_shared<Entry>(j.at("session_id").get<std::string>(),
                                        j.value("created_at", std::string()),
                                        scenario_from_json(j.at("scenario")),
                                        config_from_json(j.at("config")), options_.adapter);
      } else if (op == "commit" && entry) {
        entry->state = apply_commit(entry->scenario, entry->config, entry->engine,
                                    std::move(entry->state), j.at("body"));
        entry->commands.push_back(j.at("body"));
      } else {
        throw Error(ErrorCode::kIo, "unexpected journal record at " + where);
      }
    }
    if (!entry) continue;
    entry->journal = path;
    unsigned long n = 0;
    if (std::sscanf(entry->id.c_str(), "s%lu", &n) == 1) next_id_ = std::max(next_id_, n + 1);
    sessions_[entry->id] = entry;
  }
}

ApiResponse CoachService::handle(std::string_view method, std::string_view path,
                                 std::string_view body) {
  static const std::regex kSession(R"(^/sessions/([A-Za-z0-9_-]+)/(advise|commit|report|state)$)");
  try {
    const std::string p(path);
    if (p == "/healthz") {
      if (method != "GET") throw Error(ErrorCode::kNotFound, "use GET /healthz");
      return {200, {{"status", "ok"}, {"sessions", session_ids().size()}}};
    }
    if (p == "/sessions") {
      if (method != "POST") throw Error(ErrorCode::kNotFound, "use POST /sessions");
      return {201, create_session(parse_body(body))};
    }
    std::smatch m;
    if (std::regex_match(p, m, kSession)) {
      const std::string id = m[1], action = m[2];
      if (action == "advise" && method == "POST") return {200, advise(id, parse_body(body))};
      if (action == "commit" && method == "POST") return {200, commit(id, parse_body(body))};
      if (action == "report" && method == "GET") return {200, report(id)};
      if (action == "state" && method == "GET") return {200, state(id)};
    }
    throw Error(ErrorCode::kNotFound, "no route for " + std::string(method) + " " + p);
  } catch (const Error& e) {
    return {http_status(e.code()), error_envelope(e.code(), e.what(), e.details())};
  } catch (const Json::exception& e) {
    return {400, error_envelope(ErrorCode::kValidation, "malformed request", {e.what()})};
  } catch (const std::exception& e) {
    return {500, error_envelope(ErrorCode::kIo, e.what())};
  }
}

}  // namespace astra
