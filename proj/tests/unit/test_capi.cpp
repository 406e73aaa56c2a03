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

// Exercises the shared library through astra.h only.

#include <gtest/gtest.h>

#include <string>
#include <thread>

#include "astra/astra.h"
#include "json.hpp"

namespace {

using Json = nlohmann::json;

const std::string kScenarioDir = ASTRA_SCENARIO_DIR;

struct Owned {
  char* p = nullptr;
  ~Owned() { astra_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

astra_scenario* load(const std::string& name) {
  astra_scenario* s = nullptr;
  EXPECT_EQ(astra_scenario_load((kScenarioDir + "/" + name + ".json").c_str(), &s), ASTRA_OK);
  return s;
}

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(astra_version(), "1.0.0");
  EXPECT_STREQ(astra_status_name(ASTRA_OK), "ok");
  EXPECT_STRNE(astra_status_name(ASTRA_E_VALIDATION), astra_status_name(ASTRA_E_IO));
}

TEST(CApi, ErrorsAreReported) {
  astra_scenario* s = nullptr;
  EXPECT_EQ(astra_scenario_load("/nonexistent/file.json", &s), ASTRA_E_IO);
  EXPECT_EQ(s, nullptr);
  EXPECT_STRNE(astra_last_error(), "");
  EXPECT_EQ(astra_scenario_parse("{\"id\": 3}", &s), ASTRA_E_VALIDATION);
  EXPECT_EQ(astra_scenario_parse(nullptr, &s), ASTRA_E_INVALID_ARGUMENT);
  EXPECT_EQ(astra_scenario_parse("not json", &s), ASTRA_E_VALIDATION);
}

TEST(CApi, ScenarioAndParetoCsv) {
  astra_scenario* s = load("research_allocation");
  ASSERT_NE(s, nullptr);
  Owned json, csv;
  ASSERT_EQ(astra_scenario_json(s, &json.p), ASTRA_OK);
  EXPECT_EQ(Json::parse(json.str()).at("id"), "research-allocation");
  ASSERT_EQ(astra_pareto_csv(s, &csv.p), ASTRA_OK);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 217);
  astra_scenario_free(s);
}

TEST(CApi, SimulateAnalyzeAgree) {
  astra_scenario* s = load("casino_integrative");
  const std::string opts = R"({"partner": "mix", "n": 30, "seed": 4, "threads": 2})";
  Owned jsonl, metrics, again, csv, json, pareto;
  ASSERT_EQ(astra_simulate(s, opts.c_str(), &jsonl.p, &metrics.p), ASTRA_OK);
  ASSERT_EQ(astra_simulate(s, opts.c_str(), &again.p, nullptr), ASTRA_OK);
  EXPECT_EQ(jsonl.str(), again.str());
  ASSERT_EQ(astra_analyze(jsonl.p, &csv.p, &json.p), ASTRA_OK);
  EXPECT_EQ(Json::parse(json.str()), Json::parse(metrics.str()));
  EXPECT_EQ(Json::parse(json.str()).at("sessions"), 30);
  ASSERT_EQ(astra_pareto_report(jsonl.p, &pareto.p), ASTRA_OK);
  EXPECT_EQ(pareto.str().rfind("session,turn,by,agent_score,partner_score,member,distance", 0),
            0u);
  Owned bad;
  EXPECT_EQ(astra_simulate(s, R"({"partner": "angry"})", &bad.p, nullptr),
            ASTRA_E_INVALID_ARGUMENT);
  astra_scenario_free(s);
}

TEST(CApi, Ablate) {
  astra_scenario* s = load("casino_integrative");
  Owned csv;
  ASSERT_EQ(astra_ablate(s, R"({"n": 10, "alphas": [0, "0.5", 1]})", &csv.p), ASTRA_OK);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  astra_scenario_free(s);
}

TEST(CApi, CoachRequestsAndServer) {
  astra_coach* coach = nullptr;
  ASSERT_EQ(astra_coach_create(nullptr, &coach), ASTRA_OK);
  astra_scenario* s = load("casino_integrative");
  Owned scenario_json;
  ASSERT_EQ(astra_scenario_json(s, &scenario_json.p), ASTRA_OK);
  const std::string body = Json{{"scenario", Json::parse(scenario_json.str())}}.dump();
  int status = 0;
  Owned created;
  ASSERT_EQ(astra_coach_request(coach, "POST", "/sessions", body.c_str(), &status, &created.p),
            ASTRA_OK);
  EXPECT_EQ(status, 201);
  const std::string id = Json::parse(created.str()).at("session_id");
  Owned advice;
  ASSERT_EQ(astra_coach_request(coach, "POST", ("/sessions/" + id + "/advise").c_str(), "{}",
                                &status, &advice.p),
            ASTRA_OK);
  EXPECT_EQ(status, 200);
  EXPECT_EQ(Json::parse(advice.str()).at("mode"), "ask-preference");
  Owned missing;
  ASSERT_EQ(astra_coach_request(coach, "GET", "/sessions/x/state", nullptr, &status, &missing.p),
            ASTRA_OK);
  EXPECT_EQ(status, 404);

  astra_server* server = nullptr;
  int port = 0;
  ASSERT_EQ(astra_server_create(coach, "127.0.0.1", 0, &server, &port), ASTRA_OK);
  EXPECT_GT(port, 0);
  std::thread listener([&] { astra_server_listen(server); });
  astra_server_stop(server);
  listener.join();
  astra_server_free(server);
  astra_coach_free(coach);
  astra_scenario_free(s);
}

}  // namespace
