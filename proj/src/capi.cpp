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

#include "astra/astra.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "astra/coach.hpp"
#include "astra/json_codec.hpp"
#include "astra/simulator.hpp"

struct astra_scenario {
  astra::Scenario scenario;
};

struct astra_coach {
  std::unique_ptr<astra::CoachService> service;
};

struct astra_server {
  std::unique_ptr<astra::CoachServer> server;
};

namespace {

thread_local std::string g_last_error;

astra_status to_status(astra::ErrorCode code) {
  using astra::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ASTRA_E_INVALID_ARGUMENT;
    case ErrorCode::kValidation:
      return ASTRA_E_VALIDATION;
    case ErrorCode::kNotFound:
      return ASTRA_E_NOT_FOUND;
    case ErrorCode::kConflict:
      return ASTRA_E_CONFLICT;
    case ErrorCode::kInfeasible:
      return ASTRA_E_INFEASIBLE;
    case ErrorCode::kSpaceTooLarge:
      return ASTRA_E_SPACE_TOO_LARGE;
    case ErrorCode::kContradiction:
      return ASTRA_E_CONTRADICTION;
    case ErrorCode::kDegenerate:
      return ASTRA_E_DEGENERATE;
    case ErrorCode::kIo:
      return ASTRA_E_IO;
    case ErrorCode::kAdapter:
      return ASTRA_E_ADAPTER;
  }
  return ASTRA_E_INTERNAL;
}

template <typename F>
astra_status guarded(F&& f) {
  g_last_error.clear();
  try {
    f();
    return ASTRA_OK;
  } catch (const astra::Error& e) {
    g_last_error = e.what();
    for (const auto& d : e.details()) g_last_error += "\n  " + d;
    return to_status(e.code());
  } catch (const astra::Json::exception& e) {
    g_last_error = e.what();
    return ASTRA_E_VALIDATION;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ASTRA_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ASTRA_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw astra::Error(astra::ErrorCode::kInvalidArgument, what);
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

astra::Json parse_json(const char* text, const char* what) {
  if (!text || !*text) return astra::Json::object();
  try {
    return astra::Json::parse(text);
  } catch (const astra::Json::parse_error& e) {
    throw astra::Error(astra::ErrorCode::kValidation, std::string(what) + " is not valid JSON",
                       {e.what()});
  }
}

std::shared_ptr<astra::ModelAdapter> adapter_from(const astra::Json& j) {
  if (!j.contains("adapter_url") || j["adapter_url"].is_null()) return nullptr;
  return std::make_shared<astra::HttpModelAdapter>(
      astra::parse_adapter_url(j["adapter_url"].get<std::string>()));
}

astra::PersonaConfig persona_from_json(const astra::Json& j) {
  astra::PersonaConfig p;
  auto read = [&](const char* key, astra::Rational& field) {
    if (j.contains(key)) field = astra::rational_from_json(j[key]);
  };
  read("concession_step", p.concession_step);
  read("fair_target_share", p.fair_target_share);
  read("fair_tolerance", p.fair_tolerance);
  read("anchor_fraction", p.anchor_fraction);
  read("floor_fraction", p.floor_fraction);
  if (j.contains("patience")) p.patience = j["patience"].get<int>();
  p.validate();
  return p;
}

struct BatchRequest {
  astra::SimulationOptions options;
  std::size_t n = 100;
  std::uint64_t seed = 7;
};

BatchRequest batch_from_json(const astra::Json& j) {
  BatchRequest r;
  if (j.contains("partner")) {
    auto p = astra::parse_partner_choice(j["partner"].get<std::string>());
    require(p.has_value(), "partner must be base, greedy, fair or mix");
    r.options.partner = *p;
  }
  if (j.contains("mix")) {
    auto m = astra::parse_mix(j["mix"].get<std::string>());
    require(m.has_value(), "mix must be auto, permuted or fixed");
    r.options.mix = *m;
  }
  if (j.contains("n")) {
    const long long n = j["n"].get<long long>();
    require(n >= 0, "n must be >= 0");
    r.n = static_cast<std::size_t>(n);
  }
  if (j.contains("seed")) r.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("threads")) r.options.threads = j["threads"].get<int>();
  r.options.engine = astra::config_from_json(j.value("config", astra::Json()));
  r.options.engine.validate();
  if (j.contains("persona") && !j["persona"].is_null()) {
    r.options.persona_override = persona_from_json(j["persona"]);
  }
  r.options.adapter = adapter_from(j);
  return r;
}

std::vector<astra::SessionRecord> read_jsonl(const char* jsonl) {
  require(jsonl != nullptr, "transcript is null");
  std::istringstream in{std::string(jsonl)};
  return astra::read_transcripts(in);
}

}  // namespace

extern "C" {

const char* astra_version(void) { return "1.0.0"; }

const char* astra_status_name(astra_status status) {
  switch (status) {
    case ASTRA_OK:
      return "ok";
    case ASTRA_E_INVALID_ARGUMENT:
      return "invalid_argument";
    case ASTRA_E_VALIDATION:
      return "validation";
    case ASTRA_E_NOT_FOUND:
      return "not_found";
    case ASTRA_E_CONFLICT:
      return "conflict";
    case ASTRA_E_INFEASIBLE:
      return "infeasible";
    case ASTRA_E_SPACE_TOO_LARGE:
      return "space_too_large";
    case ASTRA_E_CONTRADICTION:
      return "contradiction";
    case ASTRA_E_DEGENERATE:
      return "degenerate";
    case ASTRA_E_IO:
      return "io";
    case ASTRA_E_ADAPTER:
      return "adapter";
    case ASTRA_E_INTERNAL:
      return "internal";
  }
  return "unknown";
}

const char* astra_last_error(void) { return g_last_error.c_str(); }

void astra_string_free(char* s) { std::free(s); }

astra_status astra_scenario_load(const char* path, astra_scenario** out) {
  return guarded([&] {
    require(path && out, "path and out are required");
    auto s = std::make_unique<astra_scenario>();
    s->scenario = astra::load_scenario_file(path);
    astra::require_valid(s->scenario);
    *out = s.release();
  });
}

astra_status astra_scenario_parse(const char* json, astra_scenario** out) {
  return guarded([&] {
    require(json && out, "json and out are required");
    auto s = std::make_unique<astra_scenario>();
    s->scenario = astra::scenario_from_json(parse_json(json, "scenario"));
    astra::require_valid(s->scenario);
    *out = s.release();
  });
}

void astra_scenario_free(astra_scenario* scenario) { delete scenario; }

astra_status astra_scenario_json(const astra_scenario* scenario, char** out) {
  return guarded([&] {
    require(scenario && out, "scenario and out are required");
    *out = dup(astra::scenario_to_json(scenario->scenario).dump(2));
  });
}

astra_status astra_pareto_csv(const astra_scenario* scenario, char** out_csv) {
  return guarded([&] {
    require(scenario && out_csv, "scenario and out_csv are required");
    std::ostringstream os;
    astra::write_frontier_csv(os, scenario->scenario);
    *out_csv = dup(os.str());
  });
}

astra_status astra_simulate(const astra_scenario* scenario, const char* options_json,
                            char** out_jsonl, char** out_metrics_json) {
  return guarded([&] {
    require(scenario != nullptr, "scenario is required");
    const BatchRequest r = batch_from_json(parse_json(options_json, "options"));
    const auto records = astra::run_sessions(scenario->scenario, r.options, r.n, r.seed);
    std::string jsonl, metrics;
    if (out_jsonl) {
      std::ostringstream os;
      astra::write_transcripts(os, records);
      jsonl = os.str();
    }
    if (out_metrics_json) metrics = astra::metrics_to_json(astra::compute_metrics(records)).dump(2);
    char* a = out_jsonl ? dup(jsonl) : nullptr;
    char* b = nullptr;
    try {
      b = out_metrics_json ? dup(metrics) : nullptr;
    } catch (...) {
      std::free(a);
      throw;
    }
    if (out_jsonl) *out_jsonl = a;
    if (out_metrics_json) *out_metrics_json = b;
  });
}

astra_status astra_analyze(const char* jsonl, char** out_metrics_csv, char** out_metrics_json) {
  return guarded([&] {
    const auto m = astra::compute_metrics(read_jsonl(jsonl));
    std::ostringstream os;
    astra::write_metrics_csv(os, m);
    const std::string j = astra::metrics_to_json(m).dump(2);
    char* a = out_metrics_csv ? dup(os.str()) : nullptr;
    char* b = nullptr;
    try {
      b = out_metrics_json ? dup(j) : nullptr;
    } catch (...) {
      std::free(a);
      throw;
    }
    if (out_metrics_csv) *out_metrics_csv = a;
    if (out_metrics_json) *out_metrics_json = b;
  });
}

astra_status astra_pareto_report(const char* jsonl, char** out_csv) {
  return guarded([&] {
    require(out_csv != nullptr, "out_csv is required");
    std::ostringstream os;
    astra::write_pareto_csv(os, astra::pareto_report(read_jsonl(jsonl)));
    *out_csv = dup(os.str());
  });
}

astra_status astra_ablate(const astra_scenario* scenario, const char* options_json,
                          char** out_csv) {
  return guarded([&] {
    require(scenario && out_csv, "scenario and out_csv are required");
    const astra::Json j = parse_json(options_json, "options");
    BatchRequest r = batch_from_json(j);
    if (!j.contains("partner")) r.options.partner = astra::PartnerChoice::kMix;
    if (!j.contains("n")) r.n = 200;
    std::vector<astra::Rational> alphas;
    for (const auto& a : j.value("alphas", astra::Json::array({"0", "0.15", "0.35", "0.5", "0.75", "1"}))) {
      alphas.push_back(astra::rational_from_json(a));
    }
    const auto rows = astra::run_ablation(scenario->scenario, r.options, alphas, r.n, r.seed);
    std::ostringstream os;
    astra::write_ablation_csv(os, rows);
    *out_csv = dup(os.str());
  });
}

astra_status astra_coach_create(const char* options_json, astra_coach** out) {
  return guarded([&] {
    require(out != nullptr, "out is required");
    const astra::Json j = parse_json(options_json, "options");
    astra::CoachOptions o;
    if (j.contains("journal_dir") && !j["journal_dir"].is_null()) {
      o.journal_dir = j["journal_dir"].get<std::string>();
    }
    o.adapter = adapter_from(j);
    auto c = std::make_unique<astra_coach>();
    c->service = std::make_unique<astra::CoachService>(std::move(o));
    *out = c.release();
  });
}

void astra_coach_free(astra_coach* coach) { delete coach; }

astra_status astra_coach_request(astra_coach* coach, const char* method, const char* path,
                                 const char* body, int* http_status, char** out_body) {
  return guarded([&] {
    require(coach && method && path && http_status && out_body,
            "coach, method, path, http_status and out_body are required");
    const astra::ApiResponse r = coach->service->handle(method, path, body ? body : "");
    *out_body = dup(r.body.dump());
    *http_status = r.status;
  });
}

astra_status astra_server_create(astra_coach* coach, const char* host, int port,
                                 astra_server** out, int* bound_port) {
  return guarded([&] {
    require(coach && host && out, "coach, host and out are required");
    auto s = std::make_unique<astra_server>();
    s->server = std::make_unique<astra::CoachServer>(*coach->service);
    const int bound = s->server->bind(host, port);
    if (bound < 0) {
      throw astra::Error(astra::ErrorCode::kIo,
                         "cannot bind " + std::string(host) + ":" + std::to_string(port));
    }
    if (bound_port) *bound_port = bound;
    *out = s.release();
  });
}

astra_status astra_server_listen(astra_server* server) {
  return guarded([&] {
    require(server != nullptr, "server is required");
    if (!server->server->listen()) throw astra::Error(astra::ErrorCode::kIo, "listen failed");
  });
}

void astra_server_stop(astra_server* server) {
  if (server) server->server->stop();
}

void astra_server_free(astra_server* server) { delete server; }

}  // extern "C"
