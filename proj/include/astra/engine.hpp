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

// The three-stage offer pipeline: behavior assessment, the scalarized
// offer program and its sweep, and acceptance/strategy scoring of the
// resulting candidates.

#ifndef ASTRA_ENGINE_HPP_
#define ASTRA_ENGINE_HPP_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "astra/adapter.hpp"
#include "astra/domain.hpp"
#include "astra/json_codec.hpp"
#include "astra/scoring.hpp"

namespace astra {

// ---- Stage 1 -------------------------------------------------------------

// `offer` is the partner's latest offer scored as (agent, partner-under-IPP).
Fairness assess_fairness(const ScorePair& offer, const Rational& partner_pms,
                         const Rational& threshold);

// Partner self-scores in offer order; only the last two matter.
Stance assess_stance(std::span<const Rational> partner_self_scores);

Rational choose_lambda(const BehaviorSignal& signal, const EngineConfig& config);

// `own_offer_scores` are the agent's previous offers in order.
Rational choose_smax(std::span<const Rational> own_offer_scores, const Rational& agent_pms,
                     const EngineConfig& config);

// ---- Stage 2 -------------------------------------------------------------

struct LpParams {
  Rational lambda;
  Rational s_max;
  Rational s_min_agent{10};
  Rational s_min_partner{5};
};

// Floors derived from the configured fractions of each party's PMS.
LpParams make_lp_params(const Rational& lambda, const Rational& s_max, const Rational& agent_pms,
                        const Rational& partner_pms, const EngineConfig& config);

// S_a + (1 - lambda) * S_p
Rational lp_objective(const LpParams& params, const ScorePair& scores);

// Returns nullopt when no allocation satisfies the constraints. Ties prefer
// the higher agent score, then the earlier allocation in enumeration order.
std::optional<ScoredAllocation> solve_enumerate(const LpParams& params,
                                                std::span<const ScoredAllocation> space);
std::optional<ScoredAllocation> solve_branch_and_bound(const LpParams& params,
                                                       const Scenario& scenario,
                                                       const PreferenceProfile& own,
                                                       const PreferenceProfile& ipp);
std::optional<ScoredAllocation> solve_program(const LpParams& params, const Scenario& scenario,
                                              const PreferenceProfile& own,
                                              const PreferenceProfile& ipp,
                                              SolverKind solver = SolverKind::kEnumerate,
                                              std::size_t cap = kDefaultEnumerationCap);

struct CandidateOffer {
  std::vector<int> claims;
  Rational s_a;
  Rational s_p_est;
  Rational ts;
  Rational si;
  Rational pap;
  Rational sa;
  Rational final_score;
};

// Top `config.candidate_count` distinct allocations over the lambda x S_max
// grid, by agent score descending. Empty when every grid point is infeasible.
std::vector<CandidateOffer> sweep_candidates(const Rational& lambda_base,
                                             const Rational& smax_base, const Scenario& scenario,
                                             const PreferenceProfile& own,
                                             const PreferenceProfile& ipp,
                                             const EngineConfig& config);

// ---- Stage 3 -------------------------------------------------------------

struct VpaScores {
  Rational ts;
  Rational si;
};

// Deterministic surrogate. Without a partner offer the partner's ask is
// taken to be their PMS.
VpaScores virtual_partner_eval(const Rational& s_p_est,
                               const std::optional<Rational>& partner_last_self_score,
                               const Rational& partner_pms);

Rational compute_pap(const Rational& ts, const Rational& si, const Rational& w);

Tactic select_tactic(const BehaviorSignal& signal, std::span<const Rational> own_scores,
                     std::span<const ScorePair> partner_offers, const PreferenceProfile& own,
                     const PreferenceProfile& ipp, const EngineConfig& config);

struct RankingInputs {
  Rational reference_score;     // own last offer, or the anchor S_max
  Rational partner_concession;  // latest drop in the partner's self-score, >= 0
  Rational cheap_concession;    // own cost of one unit of the partner's cheapest win
  Rational concession_threshold{2};
};

// Target own-score change for delta-ranked tactics; nullopt for LGR and MGF.
std::optional<Rational> target_delta(Tactic tactic, const RankingInputs& inputs);

// Cost to the agent of one unit of the issue the partner values most
// relative to the agent.
Rational cheapest_concession(const Scenario& scenario, const PreferenceProfile& own,
                             const PreferenceProfile& ipp);

// SA per candidate, in input order: 1 for the best, 0 for the worst.
std::vector<Rational> rank_by_tactic(Tactic tactic, std::span<const CandidateOffer> candidates,
                                     const RankingInputs& inputs);

// Fills final_score on every candidate and returns the index of the winner.
// Throws Error(kInfeasible) on an empty list.
std::size_t final_select(std::span<CandidateOffer> candidates, const Rational& alpha,
                         const Rational& beta);

// ---- Pipeline ------------------------------------------------------------

struct StageTrace {
  int turn = 0;
  BehaviorSignal signal;
  Rational lambda;
  Rational s_max;
  Rational s_min_agent;
  Rational s_min_partner;
  std::vector<CandidateOffer> candidates;
  std::optional<Tactic> tactic;
  std::optional<std::size_t> selected;
  bool vpa_fallback = false;
  bool tactic_fallback = false;
  bool adapter_used = false;

  bool infeasible() const { return !selected.has_value(); }
  const CandidateOffer* selected_offer() const {
    return selected ? &candidates[*selected] : nullptr;
  }
};

Json stage_trace_to_json(const StageTrace& trace, const Scenario& scenario);

class AstraEngine {
 public:
  explicit AstraEngine(EngineConfig config, std::shared_ptr<ModelAdapter> adapter = nullptr);

  const EngineConfig& config() const { return config_; }
  bool has_adapter() const { return adapter_ != nullptr; }

  // One proposal turn. `own_offers` and `partner_offers` are claims in the
  // agent's frame, oldest first. Partner offers are scored under `ipp`.
  StageTrace propose(const Scenario& scenario, const PreferenceProfile& ipp,
                     std::span<const std::vector<int>> own_offers,
                     std::span<const std::vector<int>> partner_offers, int turn) const;

 private:
  VpaScores evaluate(const Scenario& scenario, const CandidateOffer& candidate,
                     const std::optional<Rational>& partner_last, const Rational& partner_pms,
                     bool* fallback) const;
  Tactic choose_tactic(const Scenario& scenario, const BehaviorSignal& signal,
                       std::span<const Rational> own_scores,
                       std::span<const ScorePair> partner_scores, const PreferenceProfile& ipp,
                       bool* fallback) const;

  EngineConfig config_;
  std::shared_ptr<ModelAdapter> adapter_;
};

}  // namespace astra

#endif  // ASTRA_ENGINE_HPP_
