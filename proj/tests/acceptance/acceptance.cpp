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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "astra/engine.hpp"
#include "astra/json_codec.hpp"
#include "astra/simulator.hpp"

namespace astra {
namespace {

using Clock = std::chrono::steady_clock;

Scenario load(const std::string& name) {
  return load_scenario_file(std::string(ASTRA_SCENARIO_DIR) + "/" + name + ".json");
}

Rational q(const char* text) { return Rational::parse(text); }

bool near(const Rational& got, const char* want, const char* tol = "0.01") {
  return (got - q(want)).abs() <= q(tol);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Result {
  bool pass = false;
  std::string detail;
};

// ---- Criteria ------------------------------------------------------------

Result trace_arithmetic() {
  const auto t0 = Clock::now();
  struct Row {
    int s_a;
    const char *ts, *si, *sa, *pap, *final_score;
  };
  const Row rows[] = {{30, "0.22", "0.5", "0", "0.3", "0.10"},
                      {27, "0.46", "0.6", "0.75", "0.5", "0.66"},
                      {26, "0.52", "0.64", "1.0", "0.56", "0.85"},
                      {23, "0.76", "0.74", "0.5", "0.75", "0.59"},
                      {22, "0.6", "0.72", "0.25", "0.64", "0.39"}};
  std::vector<CandidateOffer> c;
  for (const Row& r : rows) {
    CandidateOffer o;
    o.s_a = r.s_a;
    o.ts = q(r.ts);
    o.si = q(r.si);
    o.sa = q(r.sa);
    o.pap = compute_pap(o.ts, o.si, q("0.75"));
    c.push_back(o);
  }
  const std::size_t pick = final_select(c, q("0.35"), q("0.65"));
  int matched = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    matched += near(c[i].pap, rows[i].pap) && near(c[i].final_score, rows[i].final_score);
  }
  const double dt = seconds_since(t0);
  Result res;
  res.pass = matched == 5 && c[pick].s_a == 26 && dt < 1.0;
  res.detail = std::to_string(matched) + "/5 PAP+final within 0.01, selected " +
               c[pick].s_a.to_string() + "-point offer, " + std::to_string(dt) + "s";
  return res;
}

Result signal_reproduction() {
  const ScorePair offers[] = {{17, 21}, {17, 21}, {16, 20}, {22, 18}};
  const BehaviorSignal want[] = {{Fairness::kUnfair, Stance::kNeutral},
                                 {Fairness::kUnfair, Stance::kNeutral},
                                 {Fairness::kUnfair, Stance::kGenerous},
                                 {Fairness::kFair, Stance::kGenerous}};
  std::vector<Rational> self;
  std::string seq;
  bool ok = true;
  for (int i = 0; i < 4; ++i) {
    self.push_back(offers[i].partner);
    const BehaviorSignal got{assess_fairness(offers[i], 36, 4), assess_stance(self)};
    ok = ok && got == want[i];
    seq += std::string(i ? " " : "") + "(" + fairness_name(got.fairness) + "," +
           stance_name(got.stance) + ")";
  }
  return {ok, seq};
}

Result oracle_equivalence() {
  const auto t0 = Clock::now();
  long checked = 0, mismatches = 0;
  for (const Scenario& s : {load("casino_integrative"), load("research_allocation")}) {
    const auto& own = s.agent_prefs;
    const auto& ipp = s.partner_truth();
    const auto space = enumerate_allocations(s);
    const Rational pms_a = possible_max_score(s, own), pms_p = possible_max_score(s, ipp);
    EngineConfig config;
    for (int l = 0; l <= 10; ++l) {
      for (int smax = 0; smax <= pms_a.round(); ++smax) {
        const LpParams p = make_lp_params(Rational(l, 10), smax, pms_a, pms_p, config);
        // Oracle: linear scan keeping the first maximum of (objective, S_a).
        std::optional<std::vector<int>> want;
        Rational best_obj, best_a;
        for (const auto& claims : space) {
          const Rational a = score_claims(s, claims, own, Side::kProposer);
          const Rational b = score_claims(s, claims, ipp, Side::kCounterpart);
          if (a < p.s_min_agent || a > p.s_max || b < p.s_min_partner) continue;
          const Rational obj = a + (Rational(1) - p.lambda) * b;
          if (!want || obj > best_obj || (obj == best_obj && a > best_a)) {
            want = claims;
            best_obj = obj;
            best_a = a;
          }
        }
        for (SolverKind k : {SolverKind::kEnumerate, SolverKind::kBranchAndBound}) {
          const auto got = solve_program(p, s, own, ipp, k);
          ++checked;
          if (got.has_value() != want.has_value() || (got && got->claims != *want)) ++mismatches;
        }
      }
    }
  }
  const double dt = seconds_since(t0);
  return {mismatches == 0 && dt < 10.0,
          std::to_string(checked) + " solves, " + std::to_string(mismatches) + " mismatches, " +
              std::to_string(dt) + "s"};
}

Result sweep_set() {
  const Scenario s = load("casino_integrative");
  const auto cands =
      sweep_candidates(q("0.3"), 30, s, s.agent_prefs, s.partner_truth(), EngineConfig{});
  std::string got;
  std::vector<Rational> scores;
  for (const auto& c : cands) {
    scores.push_back(c.s_a);
    got += (got.empty() ? "" : ",") + c.s_a.to_string();
  }
  return {scores == std::vector<Rational>{30, 27, 26, 23, 22}, "{" + got + "}"};
}

Result pareto_property() {
  long outputs = 0, dominated = 0;
  for (const Scenario& s : {load("casino_integrative"), load("casino_distributive"),
                            load("research_allocation")}) {
    const auto space = score_allocations(s, s.agent_prefs, s.partner_truth());
    const Rational pms_a = possible_max_score(s, s.agent_prefs);
    const Rational pms_p = possible_max_score(s, s.partner_truth());
    for (int l = 0; l <= 9; ++l) {
      for (int smax = 0; smax <= pms_a.round(); ++smax) {
        const LpParams p = make_lp_params(Rational(l, 10), smax, pms_a, pms_p, EngineConfig{});
        const auto best = solve_program(p, s, s.agent_prefs, s.partner_truth());
        if (!best) continue;
        ++outputs;
        for (const auto& o : space) {
          if (o.scores.agent < p.s_min_agent || o.scores.agent > p.s_max ||
              o.scores.partner < p.s_min_partner) {
            continue;
          }
          if (dominates(o.scores, best->scores)) {
            ++dominated;
            break;
          }
        }
      }
    }
  }
  // Frontier membership through the transcript report.
  const Scenario s = load("casino_integrative");
  SessionRecord rec;
  rec.scenario = s;
  for (const std::vector<int>& claims : {std::vector<int>{3, 3, 0}, std::vector<int>{3, 2, 1}}) {
    rec.events.push_back(
        {{"type", "offer"},
         {"by", "agent"},
         {"agent_score", exact_json(score_claims(s, claims, s.agent_prefs, Side::kProposer))},
         {"partner_score",
          exact_json(score_claims(s, claims, s.partner_truth(), Side::kCounterpart))}});
  }
  const std::vector<SessionRecord> recs{rec};
  const ParetoReport rep = pareto_report(recs);
  const bool member_ok = rep.offers.size() == 2 && rep.offers[0].scores == ScorePair{27, 15} &&
                         rep.offers[0].member && rep.offers[1].scores == ScorePair{26, 14} &&
                         !rep.offers[1].member;
  return {dominated == 0 && member_ok,
          std::to_string(outputs - dominated) + "/" + std::to_string(outputs) +
              " outputs Pareto-optimal; (27,15) member=" + (rep.offers[0].member ? "yes" : "no") +
              ", (26,14) member=" + (rep.offers[1].member ? "yes" : "no")};
}

Result extended_scoring() {
  const Scenario s = load("research_allocation");
  const PreferenceProfile& a = s.agent_prefs;
  const PreferenceProfile& p = s.partner_truth();
  const Offer partner_offer{{4, 3, 0, 1}, {}};  // partner's frame
  const Offer agent_reply{{2, 4, 2, 1}, {}};
  const Offer pick{{1, 4, 2, 1}, {}};
  const Rational v1 = score(s, partner_offer, p, Side::kProposer);
  const Rational v2 = score(s, partner_offer, a, Side::kCounterpart);
  const Rational v3 = score(s, agent_reply, a, Side::kProposer);
  const Rational v4 = score(s, agent_reply, p, Side::kCounterpart);
  const Rational v5 = score(s, pick, a, Side::kProposer);
  const bool ok = v1 == 26 && v2 == q("12.4") && v3 == 25 && v4 == q("17.2") && v5 == 22;
  return {ok, v1.to_string() + ", " + v2.to_string() + ", " + v3.to_string() + ", " +
                  v4.to_string() + "; E=1,S=4,L=biology,W=True -> " + v5.to_string()};
}

std::string metrics_bytes(const BatchMetrics& m) {
  std::ostringstream os;
  write_metrics_csv(os, m);
  return os.str();
}

std::string transcript_bytes(std::span<const SessionRecord> recs) {
  std::ostringstream os;
  write_transcripts(os, recs);
  return os.str();
}

Result policy_properties(int threads) {
  const auto t0 = Clock::now();
  const Scenario s = load("casino_integrative");
  constexpr std::size_t kSessions = 1000;
  constexpr std::uint64_t kSeed = 2024;
  bool ok = true;
  int violations = 0;
  std::string detail;
  for (PartnerChoice p : {PartnerChoice::kBase, PartnerChoice::kGreedy, PartnerChoice::kFair}) {
    SimulationOptions o;
    o.partner = p;
    o.threads = threads;
    const auto first = run_sessions(s, o, kSessions, kSeed);
    const auto second = run_sessions(s, o, kSessions, kSeed);
    const BatchMetrics m = compute_metrics(first);
    const bool same = metrics_bytes(m) == metrics_bytes(compute_metrics(second)) &&
                      transcript_bytes(first) == transcript_bytes(second);
    violations += m.non_escalation_violations;
    ok = ok && same && m.non_escalation_violations == 0;
    char buf[200];
    if (p == PartnerChoice::kGreedy) {
      ok = ok && m.walk_away_rate() > q("0.5");
      std::snprintf(buf, sizeof buf, "greedy walk %.3f", m.walk_away_rate().to_double());
    } else {
      ok = ok && m.agreements > 0 && m.avg_agent_agreement() > m.avg_partner_agreement();
      std::snprintf(buf, sizeof buf, "%s agreement %.2f vs %.2f", partner_choice_name(p),
                    m.avg_agent_agreement().to_double(), m.avg_partner_agreement().to_double());
    }
    detail += std::string(buf) + (same ? "" : " (NOT deterministic)") + "; ";
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 120.0;
  return {ok, detail + "non-escalation violations " + std::to_string(violations) + ", " +
                  std::to_string(dt) + "s"};
}

Result ablation_direction(int threads) {
  const Scenario s = load("casino_integrative");
  SimulationOptions o;
  o.partner = PartnerChoice::kMix;
  o.threads = threads;
  const std::vector<Rational> alphas{0, 1};
  const auto rows = run_ablation(s, o, alphas, 200, 7);
  const Rational w0 = rows[0].metrics.walk_away_rate(), w1 = rows[1].metrics.walk_away_rate();
  char buf[160];
  std::snprintf(buf, sizeof buf, "walk-away rate alpha=0: %.3f, alpha=1: %.3f (mix partner, n=200)",
                w0.to_double(), w1.to_double());
  return {w1 < w0, buf};
}

Result statistics() {
  const std::vector<double> a{1, 2, 3}, b{0, 0, 0};
  const TTestResult t = paired_t_test(a, b);
  char buf[120];
  std::snprintf(buf, sizeof buf, "t=%.4f df=%d p=%.4f", t.t, t.df, t.p);
  return {std::fabs(t.t - 3.464) <= 0.001 && t.df == 2, buf};
}

}  // namespace
}  // namespace astra

int main() {
  using astra::Result;
  const int threads = std::max(1u, std::thread::hardware_concurrency());
  struct Criterion {
    const char* name;
    std::function<Result()> run;
  };
  const std::vector<Criterion> criteria = {
      {"trace arithmetic reproduction", astra::trace_arithmetic},
      {"signal reproduction", astra::signal_reproduction},
      {"optimizer-oracle equivalence", astra::oracle_equivalence},
      {"sweep candidate set", astra::sweep_set},
      {"pareto property", astra::pareto_property},
      {"extended-scenario scoring", astra::extended_scoring},
      {"policy properties over 1000 sessions per persona",
       [threads] { return astra::policy_properties(threads); }},
      {"ablation direction", [threads] { return astra::ablation_direction(threads); }},
      {"paired t-test oracle", astra::statistics},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::printf("%s  %s: %s\n", r.pass ? "PASS" : "FAIL", c.name, r.detail.c_str());
    std::fflush(stdout);
  }
  // Table-level values come from live-model partners and are not targeted;
  // the criteria above stand in for them.
  std::printf("%s  table-scale values substituted by directional and trace criteria: %s\n",
              failed == 0 ? "PASS" : "FAIL",
              failed == 0 ? "all substitute criteria hold"
                          : (std::to_string(failed) + " substitute criteria failed").c_str());
  return failed == 0 ? 0 : 1;
}
