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

#include "astra/engine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "astra/error.hpp"

namespace astra {

Fairness assess_fairness(const ScorePair& offer, const Rational& partner_pms,
                         const Rational& threshold) {
  const Rational gap = (offer.agent - offer.partner).abs();
  if (gap < threshold || offer.partner <= partner_pms / Rational(2)) return Fairness::kFair;
  return Fairness::kUnfair;
}

Stance assess_stance(std::span<const Rational> partner_self_scores) {
  const std::size_t n = partner_self_scores.size();
  if (n == 0) return Stance::kUnknown;
  if (n == 1) return Stance::kNeutral;
  const Rational delta = partner_self_scores[n - 1] - partner_self_scores[n - 2];
  if (delta < Rational(0)) return Stance::kGenerous;
  if (delta > Rational(0)) return Stance::kGreedy;
  return Stance::kNeutral;
}

Rational choose_lambda(const BehaviorSignal& signal, const EngineConfig& config) {
  Rational lambda;
  switch (signal.stance) {
    case Stance::kGreedy:
      lambda = config.lambda_greedy;
      break;
    case Stance::kNeutral:
      lambda = config.lambda_neutral;
      break;
    case Stance::kGenerous:
      lambda = config.lambda_generous;
      break;
    case Stance::kUnknown:
      lambda = config.lambda_unknown;
      break;
  }
  return clamp(lambda, Rational(0), Rational(1));
}

Rational choose_smax(std::span<const Rational> own_offer_scores, const Rational& agent_pms,
                     const EngineConfig& config) {
  if (own_offer_scores.empty()) return Rational((config.anchor_fraction * agent_pms).round());
  return own_offer_scores.back();
}

LpParams make_lp_params(const Rational& lambda, const Rational& s_max, const Rational& agent_pms,
                        const Rational& partner_pms, const EngineConfig& config) {
  return LpParams{lambda, s_max, config.agent_floor_fraction * agent_pms,
                  config.partner_floor_fraction * partner_pms};
}

Rational lp_objective(const LpParams& params, const ScorePair& scores) {
  return scores.agent + (Rational(1) - params.lambda) * scores.partner;
}

namespace {

bool feasible(const LpParams& p, const ScorePair& s) {
  return s.agent >= p.s_min_agent && s.agent <= p.s_max && s.partner >= p.s_min_partner;
}

// Strictly better under (objective, agent score); equal keys keep the
// incumbent, which is earlier in enumeration order.
bool improves(const Rational& obj, const Rational& agent, const Rational& best_obj,
              const Rational& best_agent) {
  return obj > best_obj || (obj == best_obj && agent > best_agent);
}

class BranchAndBound {
 public:
  BranchAndBound(const LpParams& params, const Scenario& scenario, const PreferenceProfile& own,
                 const PreferenceProfile& ipp)
      : params_(params), scenario_(scenario) {
    const std::size_t n = scenario.issues.size();
    agent_.resize(n);
    partner_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const IssueSpec& issue = scenario.issues[i];
      for (int v = issue.lowest_value(); v <= issue.highest_value(); ++v) {
        agent_[i].push_back(issue_score(issue, own, i, v, Side::kProposer));
        partner_[i].push_back(issue_score(issue, ipp, i, v, Side::kCounterpart));
      }
    }
    // Suffix bounds over issues [i, n).
    min_a_.assign(n + 1, Rational());
    max_a_.assign(n + 1, Rational());
    max_p_.assign(n + 1, Rational());
    max_obj_.assign(n + 1, Rational());
    for (std::size_t i = n; i-- > 0;) {
      Rational lo = agent_[i][0], hi = agent_[i][0], hp = partner_[i][0];
      Rational ho = lp_objective(params_, {agent_[i][0], partner_[i][0]});
      for (std::size_t k = 1; k < agent_[i].size(); ++k) {
        lo = min(lo, agent_[i][k]);
        hi = max(hi, agent_[i][k]);
        hp = max(hp, partner_[i][k]);
        ho = max(ho, lp_objective(params_, {agent_[i][k], partner_[i][k]}));
      }
      min_a_[i] = min_a_[i + 1] + lo;
      max_a_[i] = max_a_[i + 1] + hi;
      max_p_[i] = max_p_[i + 1] + hp;
      max_obj_[i] = max_obj_[i + 1] + ho;
    }
    current_.resize(n);
  }

  std::optional<ScoredAllocation> run() {
    search(0, Rational(), Rational());
    return best_;
  }

 private:
  void search(std::size_t i, const Rational& a, const Rational& p) {
    const std::size_t n = scenario_.issues.size();
    if (a + min_a_[i] > params_.s_max) return;
    if (a + max_a_[i] < params_.s_min_agent) return;
    if (p + max_p_[i] < params_.s_min_partner) return;
    if (best_) {
      const Rational bound = lp_objective(params_, {a, p}) + max_obj_[i];
      if (bound < best_obj_) return;
      if (bound == best_obj_ && a + max_a_[i] <= best_->scores.agent) return;
    }
    if (i == n) {
      const ScorePair s{a, p};
      if (!feasible(params_, s)) return;
      const Rational obj = lp_objective(params_, s);
      if (!best_ || improves(obj, a, best_obj_, best_->scores.agent)) {
        best_ = ScoredAllocation{current_, s};
        best_obj_ = obj;
      }
      return;
    }
    const IssueSpec& issue = scenario_.issues[i];
    for (int v = issue.lowest_value(); v <= issue.highest_value(); ++v) {
      const auto k = static_cast<std::size_t>(v - issue.lowest_value());
      current_[i] = v;
      search(i + 1, a + agent_[i][k], p + partner_[i][k]);
    }
  }

  const LpParams& params_;
  const Scenario& scenario_;
  std::vector<std::vector<Rational>> agent_, partner_;
  std::vector<Rational> min_a_, max_a_, max_p_, max_obj_;
  std::vector<int> current_;
  std::optional<ScoredAllocation> best_;
  Rational best_obj_;
};

}  // namespace

std::optional<ScoredAllocation> solve_enumerate(const LpParams& params,
                                                std::span<const ScoredAllocation> space) {
  const ScoredAllocation* best = nullptr;
  Rational best_obj;
  for (const ScoredAllocation& s : space) {
    if (!feasible(params, s.scores)) continue;
    const Rational obj = lp_objective(params, s.scores);
    if (best == nullptr || improves(obj, s.scores.agent, best_obj, best->scores.agent)) {
      best = &s;
      best_obj = obj;
    }
  }
  if (best == nullptr) return std::nullopt;
  return *best;
}

std::optional<ScoredAllocation> solve_branch_and_bound(const LpParams& params,
                                                       const Scenario& scenario,
                                                       const PreferenceProfile& own,
                                                       const PreferenceProfile& ipp) {
  return BranchAndBound(params, scenario, own, ipp).run();
}

std::optional<ScoredAllocation> solve_program(const LpParams& params, const Scenario& scenario,
                                              const PreferenceProfile& own,
                                              const PreferenceProfile& ipp, SolverKind solver,
                                              std::size_t cap) {
  if (params.lambda < Rational(0) || params.lambda > Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda must lie in [0,1]");
  }
  if (params.s_max < params.s_min_agent) return std::nullopt;
  if (solver == SolverKind::kBranchAndBound) {
    return solve_branch_and_bound(params, scenario, own, ipp);
  }
  const auto space = score_allocations(scenario, own, ipp, cap);
  return solve_enumerate(params, space);
}

std::vector<CandidateOffer> sweep_candidates(const Rational& lambda_base,
                                             const Rational& smax_base, const Scenario& scenario,
                                             const PreferenceProfile& own,
                                             const PreferenceProfile& ipp,
                                             const EngineConfig& config) {
  if (lambda_base < Rational(0) || lambda_base > Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument, "lambda_base must lie in [0,1]");
  }
  const Rational agent_pms = possible_max_score(scenario, own);
  const Rational partner_pms = possible_max_score(scenario, ipp);

  std::vector<ScoredAllocation> space;
  if (config.solver == SolverKind::kEnumerate) {
    space = score_allocations(scenario, own, ipp, config.enumeration_cap);
  }

  std::set<Rational> lambdas;
  for (int k = -config.lambda_radius; k <= config.lambda_radius; ++k) {
    lambdas.insert(clamp(lambda_base + config.lambda_step * Rational(k), Rational(0), Rational(1)));
  }

  std::map<std::vector<int>, ScorePair> found;
  for (const Rational& lambda : lambdas) {
    for (int j = 0; j <= config.smax_steps; ++j) {
      LpParams params =
          make_lp_params(lambda, smax_base - Rational(j), agent_pms, partner_pms, config);
      if (params.s_max < params.s_min_agent) continue;
      std::optional<ScoredAllocation> best =
          config.solver == SolverKind::kEnumerate
              ? solve_enumerate(params, space)
              : solve_branch_and_bound(params, scenario, own, ipp);
      if (best) found.emplace(best->claims, best->scores);
    }
  }

  // std::map iterates claims lexicographically, which is enumeration order.
  std::vector<CandidateOffer> out;
  for (const auto& [claims, scores] : found) {
    CandidateOffer c;
    c.claims = claims;
    c.s_a = scores.agent;
    c.s_p_est = scores.partner;
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CandidateOffer& x, const CandidateOffer& y) { return x.s_a > y.s_a; });
  if (out.size() > static_cast<std::size_t>(config.candidate_count)) {
    out.resize(static_cast<std::size_t>(config.candidate_count));
  }
  return out;
}

VpaScores virtual_partner_eval(const Rational& s_p_est,
                               const std::optional<Rational>& partner_last_self_score,
                               const Rational& partner_pms) {
  if (partner_pms <= Rational(0)) {
    throw Error(ErrorCode::kDegenerate, "partner possible max score must be positive");
  }
  const Rational ask = partner_last_self_score.value_or(partner_pms);
  const Rational ts = clamp(s_p_est / partner_pms, Rational(0), Rational(1));
  const Rational si =
      clamp(Rational(1) - (s_p_est - ask).abs() / partner_pms, Rational(0), Rational(1));
  return {ts, si};
}

Rational compute_pap(const Rational& ts, const Rational& si, const Rational& w) {
  return w * ts + (Rational(1) - w) * si;
}

namespace {

std::size_t top_issue(const PreferenceProfile& prefs) {
  return static_cast<std::size_t>(
      std::max_element(prefs.weights.begin(), prefs.weights.end()) - prefs.weights.begin());
}

}  // namespace

Tactic select_tactic(const BehaviorSignal& signal, std::span<const Rational> own_scores,
                     std::span<const ScorePair> partner_offers, const PreferenceProfile& own,
                     const PreferenceProfile& ipp, const EngineConfig& config) {
  if (own_scores.empty()) return Tactic::kAEO;

  const std::size_t np = partner_offers.size();
  std::optional<Rational> partner_delta;
  if (np >= 2) partner_delta = partner_offers[np - 1].partner - partner_offers[np - 2].partner;

  if (np >= 1) {
    const ScorePair& last = partner_offers[np - 1];
    const Rational joint = last.agent + last.partner;
    if (joint > Rational(0) && last.partner / joint > config.extreme_offer_share) {
      return Tactic::kREO;
    }
  }
  if (partner_delta) {
    if (*partner_delta > Rational(0)) return Tactic::kRNC;
    if (partner_delta->is_zero()) return Tactic::kNCR;
    if (-*partner_delta >= config.concession_threshold) return Tactic::kRC;
  }
  const std::size_t no = own_scores.size();
  if (no >= 2 && partner_delta) {
    const Rational own_concession = own_scores[no - 2] - own_scores[no - 1];
    if (own_concession > config.concession_threshold &&
        -*partner_delta < config.concession_threshold) {
      return Tactic::kCSC;
    }
  }
  if (np >= 1 && partner_offers[np - 1].partner > partner_offers[np - 1].agent) {
    return Tactic::kMGF;
  }
  if (top_issue(own) != top_issue(ipp)) return Tactic::kLGR;

  const bool early = no <= 2;
  const bool no_concession_yet =
      std::all_of(own_scores.begin(), own_scores.end(),
                  [&](const Rational& s) { return s >= own_scores.front(); });
  const bool cooperative = signal.stance == Stance::kGenerous || signal.fairness == Fairness::kFair;
  if (early && no_concession_yet && cooperative) return Tactic::kLIC;
  return Tactic::kLGR;
}

std::optional<Rational> target_delta(Tactic tactic, const RankingInputs& inputs) {
  switch (tactic) {
    case Tactic::kRC:
      return Rational(-2) * min(inputs.partner_concession, inputs.concession_threshold);
    case Tactic::kLIC:
      return -inputs.cheap_concession;
    case Tactic::kCSC:
      return Rational(-1);
    case Tactic::kLGR:
    case Tactic::kMGF:
      return std::nullopt;
    case Tactic::kAEO:
    case Tactic::kREO:
    case Tactic::kNCR:
    case Tactic::kRNC:
      return Rational(0);
  }
  return Rational(0);
}

Rational cheapest_concession(const Scenario& scenario, const PreferenceProfile& own,
                             const PreferenceProfile& ipp) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scenario.issues.size(); ++i) {
    const Rational gain = ipp.weights[i] - own.weights[i];
    const Rational best_gain = ipp.weights[best] - own.weights[best];
    if (gain > best_gain || (gain == best_gain && ipp.weights[i] > ipp.weights[best])) best = i;
  }
  return own.weights[best];
}

std::vector<Rational> rank_by_tactic(Tactic tactic, std::span<const CandidateOffer> candidates,
                                     const RankingInputs& inputs) {
  const std::size_t n = candidates.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "rank_by_tactic needs a candidate");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto target = target_delta(tactic, inputs);
  const bool prefer_lower =
      tactic == Tactic::kRC || tactic == Tactic::kLIC || tactic == Tactic::kCSC;

  auto key = [&](const CandidateOffer& c) -> Rational {
    if (tactic == Tactic::kLGR) return -(c.s_a + c.s_p_est);
    if (tactic == Tactic::kMGF) return -c.s_p_est;
    return ((c.s_a - inputs.reference_score) - *target).abs();
  };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const CandidateOffer& a = candidates[x];
    const CandidateOffer& b = candidates[y];
    const Rational ka = key(a), kb = key(b);
    if (ka != kb) return ka < kb;
    if (a.s_a != b.s_a) return prefer_lower ? a.s_a < b.s_a : a.s_a > b.s_a;
    return a.claims < b.claims;
  });

  std::vector<Rational> sa(n, Rational(1));
  if (n == 1) return sa;
  for (std::size_t rank = 0; rank < n; ++rank) {
    sa[order[rank]] = Rational(static_cast<std::int64_t>(n - 1 - rank),
                               static_cast<std::int64_t>(n - 1));
  }
  return sa;
}

std::size_t final_select(std::span<CandidateOffer> candidates, const Rational& alpha,
                         const Rational& beta) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInfeasible, "no candidate offers to select from");
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    CandidateOffer& c = candidates[i];
    c.final_score = alpha * c.pap + beta * c.sa;
    if (i == 0) continue;
    const CandidateOffer& b = candidates[best];
    if (c.final_score > b.final_score ||
        (c.final_score == b.final_score &&
         (c.s_a > b.s_a || (c.s_a == b.s_a && c.claims < b.claims)))) {
      best = i;
    }
  }
  return best;
}

Json stage_trace_to_json(const StageTrace& trace, const Scenario& scenario) {
  Json candidates = Json::array();
  for (const CandidateOffer& c : trace.candidates) {
    candidates.push_back({{"claims", claims_to_json(c.claims, scenario)},
                          {"s_a", exact_json(c.s_a)},
                          {"s_p_est", exact_json(c.s_p_est)},
                          {"ts", exact_json(c.ts)},
                          {"si", exact_json(c.si)},
                          {"pap", exact_json(c.pap)},
                          {"sa", exact_json(c.sa)},
                          {"final", exact_json(c.final_score)}});
  }
  Json j = {{"type", "stage_trace"},
            {"turn", trace.turn},
            {"fairness", fairness_name(trace.signal.fairness)},
            {"stance", stance_name(trace.signal.stance)},
            {"lambda", exact_json(trace.lambda)},
            {"s_max", exact_json(trace.s_max)},
            {"s_min_agent", exact_json(trace.s_min_agent)},
            {"s_min_partner", exact_json(trace.s_min_partner)},
            {"candidates", std::move(candidates)},
            {"infeasible", trace.infeasible()},
            {"vpa_fallback", trace.vpa_fallback},
            {"tactic_fallback", trace.tactic_fallback},
            {"adapter", trace.adapter_used}};
  if (trace.tactic) {
    const TacticDescription& d = describe(*trace.tactic);
    j["tactic"] = tactic_code(*trace.tactic);
    j["tactic_rationale"] = {{"name", d.name}, {"when", d.when}, {"how", d.how}, {"why", d.why}};
  } else {
    j["tactic"] = nullptr;
  }
  j["selected"] = trace.selected ? Json(*trace.selected) : Json(nullptr);
  return j;
}

AstraEngine::AstraEngine(EngineConfig config, std::shared_ptr<ModelAdapter> adapter)
    : config_(std::move(config)), adapter_(std::move(adapter)) {
  config_.validate();
}

namespace {

constexpr int kAdapterSamples = 5;

Rational ten_point(const Json& v) {
  return clamp(rational_from_json(v) / Rational(10), Rational(0), Rational(1));
}

}  // namespace

VpaScores AstraEngine::evaluate(const Scenario& scenario, const CandidateOffer& candidate,
                                const std::optional<Rational>& partner_last,
                                const Rational& partner_pms, bool* fallback) const {
  if (adapter_) {
    try {
      Rational ts_sum, si_sum;
      for (int k = 0; k < kAdapterSamples; ++k) {
        Json req = {{"task", "evaluate_offer"},
                    {"sample", k},
                    {"claims", claims_to_json(candidate.claims, scenario)},
                    {"s_a", exact_json(candidate.s_a)},
                    {"s_p_est", exact_json(candidate.s_p_est)},
                    {"partner_pms", exact_json(partner_pms)}};
        req["partner_last_self_score"] =
            partner_last ? exact_json(*partner_last) : Json(nullptr);
        const Json reply = adapter_->call(req);
        ts_sum += ten_point(reply.at("ts"));
        si_sum += ten_point(reply.at("si"));
      }
      return {ts_sum / Rational(kAdapterSamples), si_sum / Rational(kAdapterSamples)};
    } catch (const std::exception&) {
      *fallback = true;
    }
  }
  return virtual_partner_eval(candidate.s_p_est, partner_last, partner_pms);
}

Tactic AstraEngine::choose_tactic(const Scenario& scenario, const BehaviorSignal& signal,
                                  std::span<const Rational> own_scores,
                                  std::span<const ScorePair> partner_scores,
                                  const PreferenceProfile& ipp, bool* fallback) const {
  const Tactic cascade =
      select_tactic(signal, own_scores, partner_scores, scenario.agent_prefs, ipp, config_);
  if (!adapter_) return cascade;
  try {
    Json own = Json::array();
    for (const Rational& s : own_scores) own.push_back(exact_json(s));
    Json partner = Json::array();
    for (const ScorePair& s : partner_scores) {
      partner.push_back({{"s_a", exact_json(s.agent)}, {"s_p", exact_json(s.partner)}});
    }
    std::map<Tactic, int> votes;
    for (int k = 0; k < kAdapterSamples; ++k) {
      const Json reply = adapter_->call({{"task", "select_tactic"},
                                         {"sample", k},
                                         {"fairness", fairness_name(signal.fairness)},
                                         {"stance", stance_name(signal.stance)},
                                         {"own_scores", own},
                                         {"partner_offers", partner}});
      auto t = parse_tactic(reply.at("tactic").get<std::string>());
      if (!t) throw Error(ErrorCode::kAdapter, "adapter returned an unknown tactic");
      ++votes[*t];
    }
    Tactic best = cascade;
    int best_votes = 0;
    for (Tactic t : kAllTactics) {
      auto it = votes.find(t);
      if (it != votes.end() && it->second > best_votes) {
        best = t;
        best_votes = it->second;
      }
    }
    return best;
  } catch (const std::exception&) {
    *fallback = true;
    return cascade;
  }
}

StageTrace AstraEngine::propose(const Scenario& scenario, const PreferenceProfile& ipp,
                                std::span<const std::vector<int>> own_offers,
                                std::span<const std::vector<int>> partner_offers,
                                int turn) const {
  const PreferenceProfile& own = scenario.agent_prefs;
  const Rational agent_pms = possible_max_score(scenario, own);
  const Rational partner_pms = possible_max_score(scenario, ipp);

  std::vector<Rational> own_scores;
  for (const auto& claims : own_offers) {
    own_scores.push_back(score_claims(scenario, claims, own, Side::kProposer));
  }
  std::vector<ScorePair> partner_scores;
  std::vector<Rational> partner_self;
  for (const auto& claims : partner_offers) {
    ScorePair s{score_claims(scenario, claims, own, Side::kProposer),
                score_claims(scenario, claims, ipp, Side::kCounterpart)};
    partner_scores.push_back(s);
    partner_self.push_back(s.partner);
  }

  StageTrace trace;
  trace.turn = turn;
  trace.adapter_used = adapter_ != nullptr;
  trace.signal.fairness =
      partner_scores.empty()
          ? Fairness::kUnknown
          : assess_fairness(partner_scores.back(), partner_pms, config_.fairness_threshold);
  trace.signal.stance = assess_stance(partner_self);
  trace.lambda = choose_lambda(trace.signal, config_);
  trace.s_max = choose_smax(own_scores, agent_pms, config_);
  const LpParams floors = make_lp_params(trace.lambda, trace.s_max, agent_pms, partner_pms, config_);
  trace.s_min_agent = floors.s_min_agent;
  trace.s_min_partner = floors.s_min_partner;

  trace.candidates = sweep_candidates(trace.lambda, trace.s_max, scenario, own, ipp, config_);
  if (trace.candidates.empty()) return trace;

  std::optional<Rational> partner_last;
  if (!partner_self.empty()) partner_last = partner_self.back();
  for (CandidateOffer& c : trace.candidates) {
    const VpaScores v = evaluate(scenario, c, partner_last, partner_pms, &trace.vpa_fallback);
    c.ts = v.ts;
    c.si = v.si;
    c.pap = compute_pap(c.ts, c.si, config_.ts_weight);
  }

  const Tactic tactic =
      choose_tactic(scenario, trace.signal, own_scores, partner_scores, ipp, &trace.tactic_fallback);
  trace.tactic = tactic;

  RankingInputs inputs;
  inputs.reference_score = own_scores.empty() ? trace.s_max : own_scores.back();
  if (partner_self.size() >= 2) {
    inputs.partner_concession =
        max(Rational(0), partner_self[partner_self.size() - 2] - partner_self.back());
  }
  inputs.cheap_concession = cheapest_concession(scenario, own, ipp);
  inputs.concession_threshold = config_.concession_threshold;
  const auto sa = rank_by_tactic(tactic, trace.candidates, inputs);
  for (std::size_t i = 0; i < sa.size(); ++i) trace.candidates[i].sa = sa[i];

  trace.selected = final_select(trace.candidates, config_.alpha, config_.beta);
  return trace;
}

}  // namespace astra
