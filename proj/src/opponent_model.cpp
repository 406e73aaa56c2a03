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

#include "astra/opponent_model.hpp"

#include <algorithm>
#include <numeric>

#include "astra/error.hpp"
#include "astra/scoring.hpp"

namespace astra {
namespace {

constexpr std::size_t kMaxRankedIssues = 10;

// All distinct assignments of value_set to issues that satisfy every
// statement, in lexicographic order of the weight vector.
std::vector<std::vector<Rational>> consistent_assignments(
    std::span<const PreferenceStatement> statements, std::span<const Rational> value_set) {
  if (value_set.size() > kMaxRankedIssues) {
    throw Error(ErrorCode::kSpaceTooLarge, "too many issues to rank exhaustively");
  }
  std::vector<Rational> weights(value_set.begin(), value_set.end());
  std::sort(weights.begin(), weights.end());
  std::vector<std::vector<Rational>> out;
  do {
    bool ok = true;
    for (const auto& s : statements) {
      if (!satisfies(weights, s)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(weights);
  } while (std::next_permutation(weights.begin(), weights.end()));
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational total;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

// Categorical multipliers are unknown for the partner; mirror our own
// ordering so our favourite option is assumed to be their least favourite.
PreferenceProfile build_profile(const Scenario& scenario, std::vector<Rational> weights,
                                const PreferenceProfile& own) {
  PreferenceProfile p;
  p.weights = std::move(weights);
  p.option_multipliers.assign(scenario.issues.size(), {});
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    if (scenario.issues[i].kind != IssueKind::kSharedCategorical) continue;
    const auto& mine = own.option_multipliers[i];
    std::vector<std::size_t> order(mine.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mine[a] < mine[b]; });
    std::vector<Rational> sorted_desc(mine.begin(), mine.end());
    std::sort(sorted_desc.begin(), sorted_desc.end(), [](auto& a, auto& b) { return b < a; });
    std::vector<Rational> theirs(mine.size());
    for (std::size_t rank = 0; rank < order.size(); ++rank) theirs[order[rank]] = sorted_desc[rank];
    p.option_multipliers[i] = std::move(theirs);
  }
  return p;
}

std::string statement_text(const PreferenceStatement& s, const Scenario& scenario) {
  const std::string& a = scenario.issues.at(s.issue).name;
  switch (s.relation) {
    case Relation::kHighest: return a + " highest";
    case Relation::kLowest: return a + " lowest";
    case Relation::kGreaterThan: return a + " > " + scenario.issues.at(s.other).name;
  }
  return a;
}

[[noreturn]] void throw_contradiction(const Scenario& scenario,
                                      std::span<const PreferenceStatement> statements,
                                      std::span<const Rational> value_set) {
  for (std::size_t i = 0; i < statements.size(); ++i) {
    const PreferenceStatement single[] = {statements[i]};
    if (consistent_assignments(single, value_set).empty()) {
      throw Error(ErrorCode::kContradiction, "statement cannot hold for any ranking",
                  {statement_text(statements[i], scenario)});
    }
  }
  for (std::size_t i = 0; i < statements.size(); ++i) {
    for (std::size_t j = i + 1; j < statements.size(); ++j) {
      const PreferenceStatement pair[] = {statements[i], statements[j]};
      if (consistent_assignments(pair, value_set).empty()) {
        throw Error(ErrorCode::kContradiction, "contradictory preference statements",
                    {statement_text(statements[i], scenario),
                     statement_text(statements[j], scenario)});
      }
    }
  }
  std::vector<std::string> all;
  for (const auto& s : statements) all.push_back(statement_text(s, scenario));
  throw Error(ErrorCode::kContradiction, "contradictory preference statements", std::move(all));
}

void check_issue_refs(const Scenario& scenario, std::span<const PreferenceStatement> statements) {
  for (const auto& s : statements) {
    if (s.issue >= scenario.issues.size() ||
        (s.relation == Relation::kGreaterThan && s.other >= scenario.issues.size())) {
      throw Error(ErrorCode::kValidation, "statement references an unknown issue");
    }
  }
}

// Number of partner offers that score the partner below the agent offer
// they answered.
int regressions(const Scenario& scenario, const PreferenceProfile& profile,
                std::span<const OfferRecord> history) {
  int count = 0;
  const OfferRecord* last_agent = nullptr;
  for (const auto& rec : history) {
    if (rec.by_agent) {
      last_agent = &rec;
      continue;
    }
    if (last_agent) {
      const Rational in_agent = score_claims(scenario, last_agent->claims, profile, Side::kCounterpart);
      const Rational in_partner = score_claims(scenario, rec.claims, profile, Side::kCounterpart);
      if (in_partner < in_agent) ++count;
    }
  }
  return count;
}

IppState choose(const Scenario& scenario, std::span<const PreferenceStatement> statements,
                std::span<const Rational> value_set, const PreferenceProfile& own,
                std::span<const OfferRecord> history, bool use_offers) {
  check_issue_refs(scenario, statements);
  if (value_set.size() != scenario.issues.size()) {
    throw Error(ErrorCode::kInvalidArgument, "value set does not match the issue count");
  }
  auto candidates = consistent_assignments(statements, value_set);
  if (candidates.empty()) throw_contradiction(scenario, statements, value_set);

  const std::vector<Rational>* best = nullptr;
  int best_regressions = 0;
  Rational best_dot;
  for (const auto& weights : candidates) {
    int r = 0;
    if (use_offers) r = regressions(scenario, build_profile(scenario, weights, own), history);
    const Rational d = dot(weights, own.weights);
    // Candidates arrive in lexicographic order, so strict improvement keeps
    // the lexicographically smallest among equals.
    if (!best || r < best_regressions || (r == best_regressions && d < best_dot)) {
      best = &weights;
      best_regressions = r;
      best_dot = d;
    }
  }
  IppState out;
  out.statements.assign(statements.begin(), statements.end());
  out.profile = build_profile(scenario, *best, own);
  out.status = statements.empty() ? IppStatus::kFallbackOpposite : IppStatus::kInferred;
  return out;
}

}  // namespace

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::kHighest: return "highest";
    case Relation::kLowest: return "lowest";
    case Relation::kGreaterThan: return "greater-than";
  }
  return "?";
}

const char* ipp_status_name(IppStatus s) {
  switch (s) {
    case IppStatus::kAbsent: return "absent";
    case IppStatus::kInferred: return "inferred";
    case IppStatus::kFallbackOpposite: return "fallback-opposite";
  }
  return "?";
}

const char* consistency_name(ConsistencyKind k) {
  switch (k) {
    case ConsistencyKind::kConsistent: return "consistent";
    case ConsistencyKind::kScoreRegression: return "score-regression";
    case ConsistencyKind::kStatementContradiction: return "statement-contradiction";
  }
  return "?";
}

Json statement_to_json(const PreferenceStatement& s, const Scenario& scenario) {
  Json out = {{"type", "statement"},
              {"issue", scenario.issues.at(s.issue).name},
              {"relation", relation_name(s.relation)},
              {"turn", s.source_turn}};
  if (s.relation == Relation::kGreaterThan) out["other"] = scenario.issues.at(s.other).name;
  return out;
}

PreferenceStatement statement_from_json(const Json& j, const Scenario& scenario) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "statement must be an object");
  PreferenceStatement s;
  const std::string issue = j.value("issue", std::string());
  auto idx = scenario.issue_index(issue);
  if (!idx) throw Error(ErrorCode::kValidation, "statement names unknown issue '" + issue + "'");
  s.issue = *idx;
  const std::string rel = j.value("relation", std::string());
  if (rel == "highest") {
    s.relation = Relation::kHighest;
  } else if (rel == "lowest") {
    s.relation = Relation::kLowest;
  } else if (rel == "greater-than" || rel == "greater_than" || rel == ">") {
    s.relation = Relation::kGreaterThan;
    const std::string other = j.value("other", std::string());
    auto oidx = scenario.issue_index(other);
    if (!oidx) {
      throw Error(ErrorCode::kValidation, "statement compares against unknown issue '" + other + "'");
    }
    s.other = *oidx;
  } else {
    throw Error(ErrorCode::kValidation, "unknown statement relation '" + rel + "'");
  }
  s.source_turn = j.value("turn", 0);
  return s;
}

bool satisfies(std::span<const Rational> weights, const PreferenceStatement& s) {
  const Rational& w = weights[s.issue];
  switch (s.relation) {
    case Relation::kHighest:
      return std::all_of(weights.begin(), weights.end(), [&](const Rational& x) { return x <= w; });
    case Relation::kLowest:
      return std::all_of(weights.begin(), weights.end(), [&](const Rational& x) { return w <= x; });
    case Relation::kGreaterThan:
      return s.issue != s.other && weights[s.other] < w;
  }
  return false;
}

Json question_to_json(const Question& q, const Scenario& scenario) {
  Json out = {{"kind", q.kind == QuestionKind::kHighest  ? "highest"
                       : q.kind == QuestionKind::kLowest ? "lowest"
                                                         : "compare"},
              {"text", question_text(q, scenario)}};
  if (q.issue) out["issue"] = scenario.issues.at(*q.issue).name;
  if (q.other) out["other"] = scenario.issues.at(*q.other).name;
  return out;
}

std::string question_text(const Question& q, const Scenario& scenario) {
  switch (q.kind) {
    case QuestionKind::kHighest:
      return "Could you tell me what your highest priority item is?";
    case QuestionKind::kLowest:
      if (q.issue) {
        return "Is " + scenario.issues.at(*q.issue).name + " your least preferred item?";
      }
      return "Which item matters least to you?";
    case QuestionKind::kCompare:
      return "Do you value " + scenario.issues.at(q.issue.value_or(0)).name + " more than " +
             scenario.issues.at(q.other.value_or(0)).name + "?";
  }
  return {};
}

std::vector<Rational> partner_value_set(const Scenario& scenario) {
  const PreferenceProfile& basis = scenario.partner_prefs ? *scenario.partner_prefs
                                                          : scenario.agent_prefs;
  return basis.weights;
}

std::optional<Question> next_question(const Scenario& scenario,
                                      std::span<const PreferenceStatement> statements,
                                      const PreferenceProfile& own) {
  const auto value_set = partner_value_set(scenario);
  check_issue_refs(scenario, statements);
  const auto candidates = consistent_assignments(statements, value_set);
  if (candidates.size() <= 1) return std::nullopt;

  const bool has_highest = std::any_of(statements.begin(), statements.end(),
                                       [](auto& s) { return s.relation == Relation::kHighest; });
  const bool has_lowest = std::any_of(statements.begin(), statements.end(),
                                      [](auto& s) { return s.relation == Relation::kLowest; });
  if (!has_highest) return Question{QuestionKind::kHighest, std::nullopt, std::nullopt};
  if (!has_lowest) {
    const IppState guess = choose(scenario, statements, value_set, own, {}, false);
    const auto& w = guess.profile->weights;
    const auto lowest = static_cast<std::size_t>(std::min_element(w.begin(), w.end()) - w.begin());
    return Question{QuestionKind::kLowest, lowest, std::nullopt};
  }
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    for (std::size_t j = i + 1; j < scenario.issues.size(); ++j) {
      bool above = false;
      bool below = false;
      for (const auto& c : candidates) {
        above = above || c[j] < c[i];
        below = below || c[i] < c[j];
      }
      if (above && below) return Question{QuestionKind::kCompare, i, j};
    }
  }
  return std::nullopt;
}

IppState infer_profile(const Scenario& scenario, std::span<const PreferenceStatement> statements,
                       std::span<const Rational> value_set, const PreferenceProfile& own) {
  return choose(scenario, statements, value_set, own, {}, false);
}

ConsistencyReport check_consistency(const Scenario& scenario, const IppState& ipp,
                                    std::span<const OfferRecord> history,
                                    std::span<const PreferenceStatement> statements) {
  ConsistencyReport report;
  if (!ipp.profile) return report;
  const auto& weights = ipp.profile->weights;
  for (const auto& s : statements) {
    if (!satisfies(weights, s)) {
      report.kind = ConsistencyKind::kStatementContradiction;
      report.detail = "statement '" + statement_text(s, scenario) + "' contradicts the IPP";
      return report;
    }
  }
  std::ptrdiff_t partner_idx = -1;
  for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(history.size()) - 1; i >= 0; --i) {
    if (!history[static_cast<std::size_t>(i)].by_agent) {
      partner_idx = i;
      break;
    }
  }
  if (partner_idx < 0) return report;
  const OfferRecord* agent_prev = nullptr;
  for (std::ptrdiff_t i = partner_idx - 1; i >= 0; --i) {
    if (history[static_cast<std::size_t>(i)].by_agent) {
      agent_prev = &history[static_cast<std::size_t>(i)];
      break;
    }
  }
  if (!agent_prev) return report;
  const auto& partner_offer = history[static_cast<std::size_t>(partner_idx)];
  const Rational in_agent =
      score_claims(scenario, agent_prev->claims, *ipp.profile, Side::kCounterpart);
  const Rational in_partner =
      score_claims(scenario, partner_offer.claims, *ipp.profile, Side::kCounterpart);
  if (in_partner < in_agent) {
    report.kind = ConsistencyKind::kScoreRegression;
    report.partner_score_in_agent_offer = in_agent;
    report.partner_score_in_partner_offer = in_partner;
    report.detail = "partner score in agent offer (" + in_agent.to_string() +
                    ") > partner score in partner offer (" + in_partner.to_string() + ")";
  }
  return report;
}

IppState update_ipp(const Scenario& scenario, const IppState& /*previous*/,
                    std::span<const PreferenceStatement> statements,
                    std::span<const OfferRecord> history, const PreferenceProfile& own) {
  const auto value_set = partner_value_set(scenario);
  return choose(scenario, statements, value_set, own, history, !statements.empty());
}

}  // namespace astra
