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
#include <tuple>

#include "astra/engine.hpp"
#include "astra/error.hpp"
#include "test_support.hpp"

namespace astra {
namespace {

using testing::integrative;
using testing::r;
using testing::research;

// Independent argmax: scan with an explicit key tuple, keep the first max.
std::optional<std::vector<int>> oracle_argmax(const Scenario& s, const PreferenceProfile& own,
                                              const PreferenceProfile& ipp, const LpParams& p) {
  std::optional<std::vector<int>> best;
  std::tuple<Rational, Rational> best_key;
  for (const auto& claims : enumerate_allocations(s)) {
    const Rational a = score_claims(s, claims, own, Side::kProposer);
    const Rational b = score_claims(s, claims, ipp, Side::kCounterpart);
    if (a < p.s_min_agent || a > p.s_max || b < p.s_min_partner) continue;
    std::tuple<Rational, Rational> key{a + (Rational(1) - p.lambda) * b, a};
    if (!best || key > best_key) {
      best = claims;
      best_key = key;
    }
  }
  return best;
}

TEST(Signals, FairnessFollowsStrictGap) {
  EXPECT_EQ(assess_fairness({17, 21}, 36, 4), Fairness::kUnfair);
  EXPECT_EQ(assess_fairness({22, 18}, 36, 4), Fairness::kFair);
  EXPECT_EQ(assess_fairness({18, 18}, 36, 4), Fairness::kFair);
  EXPECT_EQ(assess_fairness({16, 20}, 36, 4), Fairness::kUnfair);
  EXPECT_EQ(assess_fairness({17, 20}, 36, 4), Fairness::kFair);
}

TEST(Signals, StanceFromLastTwoOffers) {
  std::vector<Rational> none;
  EXPECT_EQ(assess_stance(none), Stance::kUnknown);
  std::vector<Rational> one{21};
  EXPECT_EQ(assess_stance(one), Stance::kNeutral);
  std::vector<Rational> same{21, 21};
  EXPECT_EQ(assess_stance(same), Stance::kNeutral);
  std::vector<Rational> down{21, 20};
  EXPECT_EQ(assess_stance(down), Stance::kGenerous);
  std::vector<Rational> up{20, 21};
  EXPECT_EQ(assess_stance(up), Stance::kGreedy);
}

TEST(Signals, StanceAntisymmetry) {
  for (int a = 0; a <= 36; a += 3) {
    for (int b = 0; b <= 36; b += 4) {
      std::vector<Rational> fwd{a, b}, rev{b, a};
      const Stance x = assess_stance(fwd), y = assess_stance(rev);
      if (x == Stance::kNeutral) EXPECT_EQ(y, Stance::kNeutral);
      if (x == Stance::kGenerous) EXPECT_EQ(y, Stance::kGreedy);
      if (x == Stance::kGreedy) EXPECT_EQ(y, Stance::kGenerous);
    }
  }
}

TEST(Signals, LambdaTable) {
  EngineConfig c;
  EXPECT_EQ(choose_lambda({Fairness::kUnfair, Stance::kGreedy}, c), r("0.9"));
  EXPECT_EQ(choose_lambda({Fairness::kFair, Stance::kGenerous}, c), r("0.3"));
  EXPECT_EQ(choose_lambda({Fairness::kFair, Stance::kNeutral}, c), r("0.5"));
  EXPECT_EQ(choose_lambda({}, c), Rational(1));
  c.lambda_greedy = 2;
  EXPECT_EQ(choose_lambda({Fairness::kUnfair, Stance::kGreedy}, c), Rational(1));
}

TEST(Signals, SmaxAnchorsThenNeverEscalates) {
  EngineConfig c;
  std::vector<Rational> none;
  EXPECT_EQ(choose_smax(none, 36, c), Rational(30));
  EXPECT_EQ(choose_smax(none, 38, c), Rational(32));
  std::vector<Rational> prior{30, 26};
  EXPECT_EQ(choose_smax(prior, 36, c), Rational(26));
}

TEST(Solver, CasinoExamples) {
  const Scenario s = integrative();
  const auto& own = s.agent_prefs;
  const auto& ipp = s.partner_truth();
  auto top = solve_program({1, 36, 10, 5}, s, own, ipp);
  ASSERT_TRUE(top);
  EXPECT_EQ(top->claims, (std::vector<int>{3, 3, 2}));
  EXPECT_EQ(top->scores.agent, Rational(33));
  EXPECT_EQ(top->scores.partner, Rational(5));

  auto flat = solve_program({0, 36, 10, 5}, s, own, ipp);
  ASSERT_TRUE(flat);
  EXPECT_EQ(flat->claims, (std::vector<int>{3, 3, 0}));
  EXPECT_EQ(flat->scores.agent + flat->scores.partner, Rational(42));

  EXPECT_FALSE(solve_program({r("0.5"), 9, 10, 5}, s, own, ipp));
  EXPECT_THROW(solve_program({2, 30, 10, 5}, s, own, ipp), Error);
}

TEST(Solver, BranchAndBoundMatchesOracleOnGrid) {
  for (const Scenario& s : {integrative(), research()}) {
    const auto& own = s.agent_prefs;
    const auto& ipp = s.partner_truth();
    const auto space = score_allocations(s, own, ipp);
    const Rational pms_a = possible_max_score(s, own);
    const Rational pms_p = possible_max_score(s, ipp);
    for (int l = 0; l <= 10; ++l) {
      for (int smax = 0; smax <= pms_a.round(); ++smax) {
        const LpParams p = make_lp_params(Rational(l, 10), smax, pms_a, pms_p, EngineConfig{});
        const auto want = oracle_argmax(s, own, ipp, p);
        const auto e = solve_enumerate(p, space);
        const auto b = solve_branch_and_bound(p, s, own, ipp);
        ASSERT_EQ(want.has_value(), e.has_value());
        ASSERT_EQ(want.has_value(), b.has_value());
        if (want) {
          EXPECT_EQ(*want, e->claims) << s.id << " l=" << l << " smax=" << smax;
          EXPECT_EQ(*want, b->claims) << s.id << " l=" << l << " smax=" << smax;
        }
      }
    }
  }
}

TEST(Solver, ScalarizationIsParetoOptimalWithinConstraints) {
  for (const Scenario& s : {integrative(), research()}) {
    const auto space = score_allocations(s, s.agent_prefs, s.partner_truth());
    for (int l = 0; l <= 9; ++l) {
      for (int smax = 10; smax <= 38; ++smax) {
        const LpParams p{Rational(l, 10), smax, 10, 5};
        const auto best = solve_enumerate(p, space);
        if (!best) continue;
        for (const auto& other : space) {
          const ScorePair& o = other.scores;
          if (o.agent < p.s_min_agent || o.agent > p.s_max || o.partner < p.s_min_partner) {
            continue;
          }
          EXPECT_FALSE(dominates(o, best->scores)) << s.id << " l=" << l << " smax=" << smax;
        }
      }
    }
  }
}

TEST(Solver, AgentScoreMonotoneInLambda) {
  for (const Scenario& s : {integrative(), research()}) {
    const auto space = score_allocations(s, s.agent_prefs, s.partner_truth());
    for (int smax = 10; smax <= 38; ++smax) {
      std::optional<Rational> prev;
      for (int l = 0; l <= 10; ++l) {
        const auto best = solve_enumerate({Rational(l, 10), smax, 10, 5}, space);
        if (!best) continue;
        if (prev) EXPECT_GE(best->scores.agent, *prev);
        prev = best->scores.agent;
      }
    }
  }
}

TEST(Sweep, TraceCandidateSet) {
  const Scenario s = integrative();
  EngineConfig c;
  auto cands = sweep_candidates(r("0.3"), 30, s, s.agent_prefs, s.partner_truth(), c);
  ASSERT_EQ(cands.size(), 5u);
  std::vector<Rational> scores;
  for (const auto& cand : cands) scores.push_back(cand.s_a);
  EXPECT_EQ(scores, (std::vector<Rational>{30, 27, 26, 23, 22}));
  EXPECT_EQ(cands[0].claims, (std::vector<int>{3, 3, 1}));
  EXPECT_EQ(cands[2].claims, (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(cands[2].s_p_est, Rational(14));
}

TEST(Sweep, SingleCandidateAndInfeasible) {
  const Scenario s = integrative();
  EngineConfig c;
  c.candidate_count = 1;
  auto one = sweep_candidates(1, 36, s, s.agent_prefs, s.partner_truth(), c);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].claims, (std::vector<int>{3, 3, 2}));
  EXPECT_TRUE(sweep_candidates(r("0.5"), 9, s, s.agent_prefs, s.partner_truth(), c).empty());
}

TEST(Sweep, BranchAndBoundPathAgrees) {
  const Scenario s = research();
  EngineConfig e, b;
  b.solver = SolverKind::kBranchAndBound;
  for (int l = 0; l <= 10; ++l) {
    auto x = sweep_candidates(Rational(l, 10), 32, s, s.agent_prefs, s.partner_truth(), e);
    auto y = sweep_candidates(Rational(l, 10), 32, s, s.agent_prefs, s.partner_truth(), b);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].claims, y[i].claims);
  }
}

TEST(Stage3, SurrogateEvaluation) {
  auto top = virtual_partner_eval(36, Rational(36), 36);
  EXPECT_EQ(top.ts, Rational(1));
  EXPECT_EQ(top.si, Rational(1));
  auto bottom = virtual_partner_eval(0, Rational(36), 36);
  EXPECT_EQ(bottom.ts, Rational(0));
  EXPECT_EQ(bottom.si, Rational(0));
  auto mid = virtual_partner_eval(14, Rational(21), 36);
  EXPECT_EQ(mid.ts, Rational(7, 18));
  EXPECT_EQ(mid.si, Rational(29, 36));
}

TEST(Stage3, PapAndFinalAreExactAffineForms) {
  EXPECT_EQ(compute_pap(r("0.22"), r("0.5"), r("0.75")), r("0.29"));
  EXPECT_EQ(compute_pap(r("0.46"), r("0.6"), r("0.75")), r("0.495"));
  EXPECT_EQ(compute_pap(1, 1, r("0.3")), Rational(1));

  std::vector<CandidateOffer> c(2);
  c[0].pap = r("0.56");
  c[0].sa = 1;
  c[0].s_a = 26;
  c[1].pap = r("0.3");
  c[1].sa = 0;
  c[1].s_a = 30;
  EXPECT_EQ(final_select(c, r("0.35"), r("0.65")), 0u);
  EXPECT_EQ(c[0].final_score, r("0.846"));
  EXPECT_EQ(c[1].final_score, r("0.105"));
  EXPECT_EQ(final_select(c, 1, 0), 0u);
  std::vector<CandidateOffer> empty;
  EXPECT_THROW(final_select(empty, 1, 0), Error);
}

TEST(Stage3, ArgmaxInvariantUnderCommonScaling) {
  std::vector<CandidateOffer> c(5);
  const char* pap[] = {"0.29", "0.495", "0.55", "0.755", "0.63"};
  const char* sa[] = {"0", "0.75", "1", "0.5", "0.25"};
  for (int i = 0; i < 5; ++i) {
    c[i].pap = r(pap[i]);
    c[i].sa = r(sa[i]);
    c[i].s_a = 30 - i;
  }
  const auto base = final_select(c, r("0.35"), r("0.65"));
  for (auto& x : c) {
    x.pap = x.pap * r("0.37");
    x.sa = x.sa * r("0.37");
  }
  EXPECT_EQ(final_select(c, r("0.35"), r("0.65")), base);
}

TEST(Stage3, RcRankingMatchesTraceOrder) {
  std::vector<CandidateOffer> c(5);
  const int scores[] = {30, 27, 26, 23, 22};
  for (int i = 0; i < 5; ++i) {
    c[i].s_a = scores[i];
    c[i].claims = {i};
  }
  RankingInputs in{30, 2, 3, 2};
  EXPECT_EQ(*target_delta(Tactic::kRC, in), Rational(-4));
  auto sa = rank_by_tactic(Tactic::kRC, c, in);
  EXPECT_EQ(sa, (std::vector<Rational>{0, r("0.75"), 1, r("0.5"), r("0.25")}));

  std::vector<CandidateOffer> single(1);
  EXPECT_EQ(rank_by_tactic(Tactic::kMGF, single, in), (std::vector<Rational>{1}));
}

TEST(Stage3, RanksAreEquallySpacedPermutation) {
  std::vector<CandidateOffer> c(7);
  for (int i = 0; i < 7; ++i) {
    c[i].s_a = 20 + (i * 3) % 7;
    c[i].s_p_est = 10 + (i * 5) % 7;
    c[i].claims = {i};
  }
  RankingInputs in{26, 1, 3, 2};
  for (Tactic t : kAllTactics) {
    auto sa = rank_by_tactic(t, c, in);
    std::sort(sa.begin(), sa.end());
    for (int i = 0; i < 7; ++i) EXPECT_EQ(sa[i], Rational(i, 6)) << tactic_code(t);
  }
}

TEST(Tactics, Cascade) {
  const Scenario s = integrative();
  const auto& own = s.agent_prefs;
  const auto& ipp = s.partner_truth();
  EngineConfig c;
  std::vector<Rational> none;
  std::vector<ScorePair> no_offers;
  EXPECT_EQ(select_tactic({}, none, no_offers, own, ipp, c), Tactic::kAEO);

  std::vector<Rational> own1{30};
  std::vector<ScorePair> firm{{17, 21}, {17, 21}};
  EXPECT_EQ(select_tactic({Fairness::kUnfair, Stance::kNeutral}, own1, firm, own, ipp, c),
            Tactic::kNCR);
  std::vector<ScorePair> greedier{{17, 21}, {16, 22}};
  EXPECT_EQ(select_tactic({}, own1, greedier, own, ipp, c), Tactic::kRNC);
  std::vector<ScorePair> conceded{{16, 20}, {22, 18}};
  EXPECT_EQ(select_tactic({}, own1, conceded, own, ipp, c), Tactic::kRC);
  std::vector<ScorePair> extreme{{6, 30}};
  EXPECT_EQ(select_tactic({}, own1, extreme, own, ipp, c), Tactic::kREO);
  std::vector<Rational> big_drop{30, 26};
  std::vector<ScorePair> small{{17, 21}, {17, 20}};
  EXPECT_EQ(select_tactic({}, big_drop, small, own, ipp, c), Tactic::kCSC);
  std::vector<ScorePair> above{{17, 21}};
  EXPECT_EQ(select_tactic({}, own1, above, own, ipp, c), Tactic::kMGF);
  std::vector<ScorePair> below{{20, 16}};
  EXPECT_EQ(select_tactic({}, own1, below, own, ipp, c), Tactic::kLGR);
  EXPECT_EQ(select_tactic({Fairness::kFair, Stance::kNeutral}, own1, below, own, own, c),
            Tactic::kLIC);
}

TEST(Pipeline, ProposalTurnsFollowTrace) {
  const Scenario s = integrative();
  AstraEngine engine{EngineConfig{}};
  const auto& ipp = s.partner_truth();
  std::vector<std::vector<int>> own, partner;
  auto opening = engine.propose(s, ipp, own, partner, 1);
  ASSERT_FALSE(opening.infeasible());
  EXPECT_EQ(opening.tactic, Tactic::kAEO);
  EXPECT_EQ(opening.s_max, Rational(30));
  EXPECT_EQ(opening.lambda, Rational(1));
  EXPECT_EQ(opening.selected_offer()->s_a, Rational(30));

  own.push_back(opening.selected_offer()->claims);
  partner.push_back({2, 1, 1});
  partner.push_back({2, 1, 1});
  auto firm = engine.propose(s, ipp, own, partner, 2);
  EXPECT_EQ(firm.signal.fairness, Fairness::kUnfair);
  EXPECT_EQ(firm.signal.stance, Stance::kNeutral);
  EXPECT_EQ(firm.tactic, Tactic::kNCR);
  EXPECT_LE(firm.selected_offer()->s_a, Rational(30));

  const Json j = stage_trace_to_json(firm, s);
  EXPECT_EQ(j.at("fairness"), "unfair");
  EXPECT_EQ(j.at("tactic"), "NCR");
  EXPECT_EQ(j.at("candidates").size(), firm.candidates.size());
}

// Self-play personas never raise their ask, so the stance comparison is
// checked on the engine directly: same history, partner moving either way.
TEST(Pipeline, GenerousPartnersDrawLargerConcessionsThanGreedy) {
  const Scenario s = integrative();
  AstraEngine engine{EngineConfig{}};
  const auto& ipp = s.partner_truth();
  const std::vector<std::vector<int>> own{{3, 3, 1}};
  const auto agent_score = [&](const StageTrace& t) { return t.selected_offer()->s_a; };
  for (const auto& first : {std::vector<int>{1, 1, 1}, std::vector<int>{2, 1, 0},
                            std::vector<int>{1, 2, 0}}) {
    // Partner frame claims; generous gives one firewood back, greedy takes one more.
    const std::vector<int> start = complement(s, first);
    std::vector<int> gen = first, greedy = first;
    gen[0] = std::max(0, gen[0] - 1);
    greedy[2] = std::min(3, greedy[2] + 1);
    const std::vector<std::vector<int>> generous_hist{start, complement(s, gen)};
    const std::vector<std::vector<int>> greedy_hist{start, complement(s, greedy)};
    const StageTrace g = engine.propose(s, ipp, own, generous_hist, 2);
    const StageTrace h = engine.propose(s, ipp, own, greedy_hist, 2);
    ASSERT_EQ(g.signal.stance, Stance::kGenerous);
    ASSERT_EQ(h.signal.stance, Stance::kGreedy);
    EXPECT_LT(agent_score(g) - 30, agent_score(h) - 30);
  }
}

TEST(Pipeline, RecomputingStoredFieldsReproducesPapAndFinal) {
  const Scenario s = research();
  EngineConfig c;
  AstraEngine engine{c};
  std::vector<std::vector<int>> own{{2, 4, 2, 1}}, partner{complement(s, {4, 3, 0, 1})};
  auto t = engine.propose(s, s.partner_truth(), own, partner, 2);
  ASSERT_FALSE(t.infeasible());
  for (const auto& cand : t.candidates) {
    EXPECT_EQ(cand.pap, c.ts_weight * cand.ts + (Rational(1) - c.ts_weight) * cand.si);
    EXPECT_EQ(cand.final_score, c.alpha * cand.pap + c.beta * cand.sa);
    EXPECT_LE(cand.s_a, t.s_max);
  }
}

}  // namespace
}  // namespace astra
