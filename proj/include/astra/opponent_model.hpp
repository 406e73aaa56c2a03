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

// Inferred partner preferences (IPP): priority questions, ranking inference
// from structured statements, consistency checks against observed offers,
// and re-inference after an inconsistency.

#ifndef ASTRA_OPPONENT_MODEL_HPP_
#define ASTRA_OPPONENT_MODEL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "astra/domain.hpp"
#include "astra/json_codec.hpp"

namespace astra {

enum class Relation { kHighest, kLowest, kGreaterThan };

const char* relation_name(Relation r);

struct PreferenceStatement {
  std::size_t issue = 0;
  Relation relation = Relation::kHighest;
  std::size_t other = 0;  // only for kGreaterThan
  int source_turn = 0;

  friend bool operator==(const PreferenceStatement&, const PreferenceStatement&) = default;
};

// `{type:"statement", issue, relation, other?, turn}`
Json statement_to_json(const PreferenceStatement& s, const Scenario& scenario);
PreferenceStatement statement_from_json(const Json& j, const Scenario& scenario);

// Does the weight vector honour the statement?
bool satisfies(std::span<const Rational> weights, const PreferenceStatement& s);

enum class IppStatus { kAbsent, kInferred, kFallbackOpposite };

const char* ipp_status_name(IppStatus s);

struct IppState {
  std::optional<PreferenceProfile> profile;
  std::vector<PreferenceStatement> statements;
  IppStatus status = IppStatus::kAbsent;
};

enum class QuestionKind { kHighest, kLowest, kCompare };

struct Question {
  QuestionKind kind = QuestionKind::kHighest;
  // For kLowest: the issue we currently expect to be lowest.
  // For kCompare: the pair being compared.
  std::optional<std::size_t> issue;
  std::optional<std::size_t> other;
};

Json question_to_json(const Question& q, const Scenario& scenario);
std::string question_text(const Question& q, const Scenario& scenario);

// Multiset of weights the partner's profile is a permutation of.
std::vector<Rational> partner_value_set(const Scenario& scenario);

// Next priority question, or nullopt when the statements already pin a
// unique ranking.
std::optional<Question> next_question(const Scenario& scenario,
                                      std::span<const PreferenceStatement> statements,
                                      const PreferenceProfile& own);

// Assign `value_set` to issues. A unique ranking consistent with the
// statements is used as is; unresolved positions are filled so the result is
// as opposite to `own` as possible (smallest dot product), ties broken by the
// lexicographically smallest weight vector. Throws Error(kContradiction)
// naming the conflicting statements when no ranking satisfies them all.
IppState infer_profile(const Scenario& scenario, std::span<const PreferenceStatement> statements,
                       std::span<const Rational> value_set, const PreferenceProfile& own);

// One offer in negotiation order, in the agent's frame.
struct OfferRecord {
  bool by_agent = false;
  std::vector<int> claims;
};

enum class ConsistencyKind { kConsistent, kScoreRegression, kStatementContradiction };

struct ConsistencyReport {
  ConsistencyKind kind = ConsistencyKind::kConsistent;
  std::string detail;
  // Populated for kScoreRegression.
  Rational partner_score_in_agent_offer;
  Rational partner_score_in_partner_offer;

  bool consistent() const { return kind == ConsistencyKind::kConsistent; }
};

const char* consistency_name(ConsistencyKind k);

// Statement contradictions are checked first, then whether the partner's
// latest offer scores them (under the IPP) below what the agent's preceding
// offer gave them.
ConsistencyReport check_consistency(const Scenario& scenario, const IppState& ipp,
                                    std::span<const OfferRecord> history,
                                    std::span<const PreferenceStatement> statements);

// Re-infer from the full statement set. When statements leave the ranking
// open, prefer the permutation under which the fewest partner offers score
// below the agent offer they answered; without statements the fallback
// profile is kept.
IppState update_ipp(const Scenario& scenario, const IppState& ipp,
                    std::span<const PreferenceStatement> statements,
                    std::span<const OfferRecord> history, const PreferenceProfile& own);

}  // namespace astra

#endif  // ASTRA_OPPONENT_MODEL_HPP_
