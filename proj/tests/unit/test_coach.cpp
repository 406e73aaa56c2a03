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

#include <gtest/gtest.h>

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <thread>
#include <vector>

#include "astra/coach.hpp"
#include "httplib.h"
#include "test_support.hpp"

namespace astra {
namespace {

namespace fs = std::filesystem;

Json live_scenario() {
  Json s = scenario_to_json(testing::integrative());
  s.erase("partner_prefs");
  return s;
}

Json statements_event() {
  return {{"statements",
           {{{"issue", "firewood"}, {"relation", "highest"}},
            {{"issue", "food"}, {"relation", "lowest"}}}}};
}

Json offer_event(int food, int water, int firewood) {
  return {{"offer", {{"claims", {{"food", food}, {"water", water}, {"firewood", firewood}}}}}};
}

// Commits whatever advise recommends for `event`.
Json follow(CoachService& svc, const std::string& id, const Json& event) {
  const Json advice = svc.advise(id, event);
  Json body = {{"partner_event", event}};
  if (advice.at("closed").get<bool>()) return svc.commit(id, body);
  if (advice.at("mode") == "propose-offer") {
    body["offer"] = {{"claims", advice.at("offer").at("claims")}};
  } else {
    body["mode"] = advice.at("mode");
  }
  return svc.commit(id, body);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("astra-coach-" + std::to_string(::getpid()) + "-" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

TEST(Coach, CreateAssignsIdsAndEchoesConfig) {
  CoachService svc;
  const ApiResponse r = svc.handle(
      "POST", "/sessions",
      Json{{"scenario", live_scenario()}, {"config", {{"alpha", "0.15"}}}}.dump());
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body.at("session_id"), "s000001");
  EXPECT_EQ(r.body.at("config").at("alpha"), "0.15");
  EXPECT_EQ(r.body.at("config").at("beta"), "0.85");
  EXPECT_EQ(svc.create_session({{"scenario", live_scenario()}}).at("session_id"), "s000002");
}

TEST(Coach, AdviseIsPure) {
  CoachService svc;
  const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
  follow(svc, id, Json::object());
  follow(svc, id, statements_event());
  const Json before = svc.state(id);
  const Json a = svc.advise(id, offer_event(1, 1, 3));
  const Json b = svc.advise(id, offer_event(1, 1, 3));
  EXPECT_EQ(a, b);
  EXPECT_EQ(svc.state(id), before);
  EXPECT_EQ(a.at("mode"), "propose-offer");
  ASSERT_TRUE(a.at("trace").is_object());
  EXPECT_EQ(a.at("trace").at("fairness"), "unfair");
}

TEST(Coach, FullSessionReportAndRebuild) {
  CoachService svc;
  const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
  EXPECT_EQ(follow(svc, id, Json::object()).at("closed"), false);  // asks
  follow(svc, id, statements_event());                              // opens at 30
  follow(svc, id, offer_event(1, 2, 3));
  follow(svc, id, offer_event(1, 1, 3));
  const Json rep = svc.report(id);
  EXPECT_EQ(rep.at("stage_traces").size(), 3u);
  EXPECT_EQ(rep.at("frontier_basis"), "ipp");
  EXPECT_FALSE(rep.at("frontier").empty());
  for (const Json& o : rep.at("offers")) {
    EXPECT_EQ(o.at("pareto_member").get<bool>(), o.at("frontier_distance") == "0");
  }
  EXPECT_EQ(svc.rebuild_state(id), svc.state(id));
}

TEST(Coach, UserOverrideRecorded) {
  CoachService svc;
  const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
  follow(svc, id, Json::object());
  svc.commit(id, {{"partner_event", statements_event()},
                  {"offer", {{"claims", {{"food", 2}, {"water", 2}, {"firewood", 1}}}}}});
  const Json st = svc.state(id);
  bool found = false;
  for (const Json& e : st.at("log")) {
    if (e.value("type", "") == "mode" && e.value("reason", "") == "chosen by the user") found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Coach, ErrorEnvelopes) {
  CoachService svc;
  const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
  ApiResponse r = svc.handle("POST", "/sessions/nope/advise", "{}");
  EXPECT_EQ(r.status, 404);
  EXPECT_TRUE(r.body.contains("error"));
  r = svc.handle("POST", "/sessions/" + id + "/advise", offer_event(4, 0, 0).dump());
  EXPECT_EQ(r.status, 400);
  r = svc.handle("POST", "/sessions/" + id + "/commit", "{not json");
  EXPECT_EQ(r.status, 400);
  r = svc.handle("POST", "/sessions", Json{{"scenario", {{"id", "x"}}}}.dump());
  EXPECT_EQ(r.status, 400);
  r = svc.handle("DELETE", "/healthz", "");
  EXPECT_EQ(r.status, 404);
  r = svc.handle("GET", "/healthz", "");
  EXPECT_EQ(r.status, 200);
}

TEST(Coach, ClosedSessionConflicts) {
  CoachService svc;
  const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
  follow(svc, id, Json::object());
  follow(svc, id, statements_event());
  svc.commit(id, {{"partner_event", {{"walk_away", true}}}});
  EXPECT_EQ(svc.state(id).at("outcome"), "walk-away");
  const ApiResponse r = svc.handle("POST", "/sessions/" + id + "/commit",
                                   Json{{"mode", "ask-preference"}}.dump());
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/advise", "{}").status, 409);
  EXPECT_EQ(svc.handle("GET", "/sessions/" + id + "/report", "").status, 200);
}

TEST(Coach, JournalRestoresSessions) {
  TempDir dir;
  Json live_state;
  {
    CoachService svc(CoachOptions{dir.path.string(), nullptr});
    const std::string id = svc.create_session({{"scenario", live_scenario()}}).at("session_id");
    follow(svc, id, Json::object());
    follow(svc, id, statements_event());
    follow(svc, id, offer_event(1, 2, 3));
    // A rejected commit leaves no trace in the journal.
    EXPECT_EQ(svc.handle("POST", "/sessions/" + id + "/commit", offer_event(9, 9, 9).dump()).status,
              400);
    live_state = svc.state(id);
  }
  CoachService again(CoachOptions{dir.path.string(), nullptr});
  ASSERT_EQ(again.session_ids(), std::vector<std::string>{"s000001"});
  EXPECT_EQ(again.state("s000001"), live_state);
  EXPECT_EQ(again.create_session({{"scenario", live_scenario()}}).at("session_id"), "s000002");
}

TEST(Coach, ConcurrentSessions) {
  CoachService svc;
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i) {
    ids.push_back(svc.create_session({{"scenario", live_scenario()}}).at("session_id"));
  }
  std::atomic<int> failures{0};
  std::vector<std::thread> workers;
  for (const std::string& id : ids) {
    workers.emplace_back([&, id] {
      try {
        follow(svc, id, Json::object());
        follow(svc, id, statements_event());
        follow(svc, id, offer_event(1, 2, 3));
      } catch (...) {
        ++failures;
      }
    });
    workers.emplace_back([&, id] {
      for (int k = 0; k < 20; ++k) {
        const ApiResponse r = svc.handle("GET", "/sessions/" + id + "/report", "");
        if (r.status != 200) ++failures;
      }
    });
  }
  for (auto& w : workers) w.join();
  EXPECT_EQ(failures.load(), 0);
  for (const std::string& id : ids) {
    EXPECT_EQ(svc.state(id), svc.state(ids.front()));
    EXPECT_EQ(svc.rebuild_state(id), svc.state(id));
  }
}

TEST(Coach, HttpRoundTrip) {
  CoachService svc;
  CoachServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread listener([&] { server.listen(); });
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  auto created = client.Post("/sessions", Json{{"scenario", live_scenario()}}.dump(),
                             "application/json");
  ASSERT_TRUE(created);
  EXPECT_EQ(created->status, 201);
  const std::string id = Json::parse(created->body).at("session_id");
  auto advice = client.Post("/sessions/" + id + "/advise", "{}", "application/json");
  ASSERT_TRUE(advice);
  EXPECT_EQ(Json::parse(advice->body).at("mode"), "ask-preference");
  auto missing = client.Get("/sessions/zzz/report");
  ASSERT_TRUE(missing);
  EXPECT_EQ(missing->status, 404);
  server.stop();
  listener.join();
}

}  // namespace
}  // namespace astra
