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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "astra/error.hpp"
#include "astra/persona.hpp"
#include "astra/simulator.hpp"
#include "test_support.hpp"

namespace astra {
namespace {

using testing::distributive;
using testing::integrative;
using testing::r;
using testing::research;

std::string transcript(std::span<const SessionRecord> records) {
  std::ostringstream os;
  write_transcripts(os, records);
  return os.str();
}

std::string metrics_csv(const BatchMetrics& m) {
  std::ostringstream os;
  write_metrics_csv(os, m);
  return os.str();
}

SimulationOptions options(PartnerChoice p, int threads = 1) {
  SimulationOptions o;
  o.partner = p;
  o.threads = threads;
  return o;
}

// Agent-offer state for a persona to answer.
SessionState proposed(const std::vector<std::vector<int>>& own) {
  SessionState s;
  for (const auto& c : own) {
    s.history.push_back({true, c});
    AgentMove m;
    m.claims = c;
    s.last_move = m;
    ++s.agent_turns;
  }
  return s;
}

// ---- Personas ----------------------------------------------------------------

TEST(Persona, ConfigValidation) {
  PersonaConfig c;
  EXPECT_NO_THROW(c.validate());
  c.fair_target_share = 1;
  EXPECT_THROW(c.validate(), Error);
  c = PersonaConfig{};
  c.concession_step = -1;
  EXPECT_THROW(c.validate(), Error);
  const PersonaConfig g = PersonaConfig::for_kind(PersonaKind::kGreedy);
  EXPECT_EQ(g.anchor_fraction, Rational(11, 12));
  EXPECT_EQ(g.concession_step, 1);
  EXPECT_EQ(g.patience, 4);
}

TEST(Persona, AnswersTruthfully) {
  const Scenario s = integrative();  // partner truth: firewood 5, water 4, food 3
  SessionState st;
  AgentMove ask;
  ask.mode = Mode::kAskPreference;
  ask.question = Question{QuestionKind::kHighest, std::nullopt, std::nullopt};
  st.last_move = ask;
  const PartnerEvent e = persona_respond(PersonaConfig{}, s, st);
  ASSERT_EQ(e.statements.size(), 1u);
  EXPECT_EQ(e.statements[0].relation, Relation::kHighest);
  EXPECT_EQ(e.statements[0].issue, 2u);
  ask.question = Question{QuestionKind::kLowest, 2, std::nullopt};
  st.last_move = ask;
  const PartnerEvent l = persona_respond(PersonaConfig{}, s, st);
  ASSERT_EQ(l.statements.size(), 1u);
  for (const auto& x : l.statements) EXPECT_TRUE(satisfies(s.partner_truth().weights, x));
}

TEST(Persona, Deterministic) {
  const Scenario s = integrative();
  const SessionState st = proposed({{3, 3, 0}});
  for (PersonaKind k : {PersonaKind::kBase, PersonaKind::kGreedy, PersonaKind::kFair}) {
    const PersonaConfig c = PersonaConfig::for_kind(k, 99);
    EXPECT_EQ(partner_event_to_json(persona_respond(c, s, st), s),
              partner_event_to_json(persona_respond(c, s, st), s));
  }
}

TEST(Persona, OpensAtAnchor) {
  const Scenario s = integrative();
  const SessionState st = proposed({{3, 3, 0}});
  const PartnerEvent base = persona_respond(PersonaConfig::for_kind(PersonaKind::kBase), s, st);
  ASSERT_TRUE(base.offer);
  EXPECT_EQ(persona_score(s, complement(s, base.offer->claims)), 21);  // 7/12 of 36
  const PartnerEvent greedy =
      persona_respond(PersonaConfig::for_kind(PersonaKind::kGreedy), s, st);
  ASSERT_TRUE(greedy.offer);
  EXPECT_EQ(persona_score(s, complement(s, greedy.offer->claims)), 33);  // 11/12 of 36
}

TEST(Persona, TargetSearchPicksSmallestReachingScore) {
  const Scenario s = integrative();
  for (int target = 0; target <= 36; ++target) {
    const auto c = persona_offer_for_target(s, target, 1);
    const Rational got = persona_score(s, c);
    EXPECT_GE(got, target);
    for (const auto& q : enumerate_allocations(s)) {
      const Rational v = persona_score(s, q);
      if (v >= target) EXPECT_GE(v, got);
    }
  }
}

TEST(Persona, GreedyHoldsUntilPatienceRunsOut) {
  const Scenario s = integrative();
  const PersonaConfig g = PersonaConfig::for_kind(PersonaKind::kGreedy);
  SessionState st = proposed({{3, 3, 0}});
  std::vector<Rational> asks;
  for (int i = 0; i < 6; ++i) {
    const PartnerEvent e = persona_respond(g, s, st);
    ASSERT_TRUE(e.offer);
    const auto agent_frame = complement(s, e.offer->claims);
    asks.push_back(persona_score(s, agent_frame));
    st.history.push_back({false, agent_frame});
    ++st.partner_turns;
    st.history.push_back({true, {3, 3, 0}});
  }
  EXPECT_EQ(asks[0], 33);
  EXPECT_EQ(asks[3], 33);
  EXPECT_LT(asks[5], 33);
}

TEST(Persona, FairOffersStayNearTarget) {
  const Scenario s = integrative();
  SimulationOptions o = options(PartnerChoice::kFair);
  const auto records = run_sessions(s, o, 40, 11);
  const PersonaConfig c = PersonaConfig::for_kind(PersonaKind::kFair);
  for (const auto& rec : records) {
    const Scenario& sc = rec.scenario;
    const Rational pms = possible_max_score(sc, sc.partner_truth());
    for (const auto& e : rec.events) {
      if (e.value("type", "") != "offer" || e.value("by", "") != "partner") continue;
      const auto claims = offer_from_json(Json{{"claims", e.at("claims")}}, sc).claims;
      EXPECT_GE(persona_score(sc, claims), c.fair_target_share * pms - c.fair_tolerance);
    }
  }
}

TEST(Persona, AdapterFailureFallsBack) {
  struct Broken : ModelAdapter {
    Json call(const Json&) override { throw Error(ErrorCode::kAdapter, "down"); }
  };
  Broken broken;
  const Scenario s = integrative();
  const SessionState st = proposed({{3, 3, 0}});
  bool fallback = false;
  const PartnerEvent e = adapter_persona_respond(broken, PersonaConfig{}, s, st, &fallback);
  EXPECT_TRUE(fallback);
  EXPECT_EQ(partner_event_to_json(e, s),
            partner_event_to_json(persona_respond(PersonaConfig{}, s, st), s));
}

// ---- Scenario sampling -------------------------------------------------------

TEST(Simulator, PermutedMixDrawsRankings) {
  const Scenario s = integrative();
  std::set<std::string> kinds;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    std::string kind;
    const Scenario d = sample_scenario(s, MixKind::kPermuted, seed, &kind);
    kinds.insert(kind);
    auto w = d.agent_prefs.weights;
    std::sort(w.begin(), w.end());
    EXPECT_EQ(w, (std::vector<Rational>{3, 4, 5}));
    const auto& a = d.agent_prefs.weights;
    const auto& p = d.partner_truth().weights;
    if (kind == "distributive") {
      EXPECT_EQ(a, p);
    } else {
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i] + p[i], 8);
    }
  }
  EXPECT_EQ(kinds.size(), 2u);
  std::string kind;
  EXPECT_THROW(sample_scenario(research(), MixKind::kPermuted, 1, &kind), Error);
  EXPECT_EQ(sample_scenario(research(), MixKind::kAuto, 1, &kind).agent_prefs,
            research().agent_prefs);
}

TEST(Simulator, SessionSeedsDistinct) {
  std::set<std::uint64_t> seen;
  for (std::size_t i = 0; i < 1000; ++i) seen.insert(session_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(session_seed(7, 0), session_seed(8, 0));
}

// ---- Batches -----------------------------------------------------------------

TEST(Simulator, ByteExactAcrossRunsAndThreads) {
  const Scenario s = integrative();
  const auto a = run_sessions(s, options(PartnerChoice::kMix), 60, 5);
  const auto b = run_sessions(s, options(PartnerChoice::kMix), 60, 5);
  const auto c = run_sessions(s, options(PartnerChoice::kMix, 3), 60, 5);
  EXPECT_EQ(transcript(a), transcript(b));
  EXPECT_EQ(transcript(a), transcript(c));
  EXPECT_EQ(metrics_csv(compute_metrics(a)), metrics_csv(compute_metrics(c)));
  const auto d = run_sessions(s, options(PartnerChoice::kMix), 60, 6);
  EXPECT_NE(transcript(a), transcript(d));
}

TEST(Simulator, TranscriptRoundTrip) {
  const Scenario s = research();
  const auto a = run_sessions(s, options(PartnerChoice::kMix), 12, 3);
  std::istringstream in(transcript(a));
  const auto back = read_transcripts(in);
  ASSERT_EQ(back.size(), a.size());
  EXPECT_EQ(transcript(back), transcript(a));
  EXPECT_EQ(metrics_csv(compute_metrics(back)), metrics_csv(compute_metrics(a)));
}

TEST(Simulator, MetricInvariants) {
  for (PartnerChoice p : {PartnerChoice::kBase, PartnerChoice::kGreedy, PartnerChoice::kFair}) {
    const auto recs = run_sessions(integrative(), options(p), 100, 21);
    const BatchMetrics m = compute_metrics(recs);
    EXPECT_EQ(m.agreements + m.walk_aways, m.n);
    EXPECT_GE(m.walk_away_rate(), 0);
    EXPECT_LE(m.walk_away_rate(), 1);
    EXPECT_EQ(m.non_escalation_violations, 0);
    EXPECT_EQ(m.conservation_violations, 0);
    for (const auto& [key, cell] : m.cells) {
      ASSERT_GT(cell.turns, 0);
      const Rational mean = cell.lambda_sum / Rational(cell.turns);
      const std::string stance = key.substr(0, key.find('/'));
      if (stance == "greedy") EXPECT_EQ(mean, r("0.9")) << key;
      if (stance == "generous") EXPECT_EQ(mean, r("0.3")) << key;
      if (stance == "neutral") EXPECT_EQ(mean, r("0.5")) << key;
      if (cell.delta_max) EXPECT_LE(*cell.delta_max, 0) << key;
    }
  }
}

TEST(Simulator, GeneralPatternsAgainstPersonas) {
  const Scenario s = integrative();
  const BatchMetrics greedy = compute_metrics(run_sessions(s, options(PartnerChoice::kGreedy), 200, 1));
  EXPECT_GT(greedy.walk_away_rate(), r("0.5"));
  for (PartnerChoice p : {PartnerChoice::kBase, PartnerChoice::kFair}) {
    const BatchMetrics m = compute_metrics(run_sessions(s, options(p), 200, 1));
    ASSERT_GT(m.agreements, 0u);
    EXPECT_GT(m.avg_agent_agreement(), m.avg_partner_agreement());
  }
}

TEST(Simulator, MetricsJsonAndCsvShapes) {
  const auto recs = run_sessions(distributive(), options(PartnerChoice::kBase), 10, 2);
  const BatchMetrics m = compute_metrics(recs);
  const Json j = metrics_to_json(m);
  EXPECT_EQ(j.at("sessions"), 10);
  EXPECT_TRUE(j.contains("walk_away_rate"));
  EXPECT_TRUE(j.contains("cells"));
  const std::string csv = metrics_csv(m);
  EXPECT_EQ(csv.rfind("metric,stance,fairness,value\n", 0), 0u);
}

TEST(Simulator, ParetoReportCoversEveryOffer) {
  const auto recs = run_sessions(integrative(), options(PartnerChoice::kBase), 20, 4);
  const ParetoReport rep = pareto_report(recs);
  int offers = 0;
  for (const auto& rec : recs) {
    for (const auto& e : rec.events) offers += e.value("type", "") == "offer";
  }
  EXPECT_EQ(static_cast<int>(rep.offers.size()), offers);
  for (const auto& o : rep.offers) EXPECT_EQ(o.member, o.distance == 0);
}

TEST(Simulator, AblationRowsPairAlphaAndBeta) {
  const std::vector<Rational> alphas{0, r("0.35"), 1};
  const auto rows = run_ablation(integrative(), options(PartnerChoice::kMix), alphas, 30, 9);
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) {
    EXPECT_EQ(row.alpha + row.beta, 1);
    EXPECT_EQ(row.metrics.n, 30u);
  }
  std::ostringstream os;
  write_ablation_csv(os, rows);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

// ---- Statistics --------------------------------------------------------------

TEST(Statistics, PairedTTestHandOracle) {
  const std::vector<double> a{1, 2, 3}, b{0, 0, 0};
  const TTestResult t = paired_t_test(a, b);
  // mean 2, sd 1, n 3: t = 2 * sqrt(3).
  EXPECT_NEAR(t.t, 2 * std::sqrt(3.0), 1e-9);
  EXPECT_EQ(t.df, 2);
  // Student t with 2 df has CDF 1/2 + t / (2 sqrt(2 + t^2)).
  EXPECT_NEAR(t.p, 1 - t.t / std::sqrt(2 + t.t * t.t), 1e-9);
  EXPECT_FALSE(t.degenerate);
}

TEST(Statistics, PairedTTestEdgeCases) {
  const std::vector<double> a{1, 2, 3}, b{0, 1, 2}, shortv{1};
  EXPECT_TRUE(paired_t_test(a, b).degenerate);
  EXPECT_THROW(paired_t_test(a, shortv), Error);
  EXPECT_THROW(paired_t_test(shortv, shortv), Error);
  const std::vector<double> x{3, 1, 4, 1, 5}, y{2, 7, 1, 8, 2};
  const TTestResult fwd = paired_t_test(x, y), rev = paired_t_test(y, x);
  EXPECT_NEAR(fwd.t, -rev.t, 1e-12);
  EXPECT_NEAR(fwd.p, rev.p, 1e-12);
}

TEST(Statistics, Fixed6) {
  EXPECT_EQ(fixed6(r("12.4")), "12.400000");
  EXPECT_EQ(fixed6(Rational(1, 3)), "0.333333");
  EXPECT_EQ(fixed6(Rational(2, 3)), "0.666667");
}

}  // namespace
}  // namespace astra
