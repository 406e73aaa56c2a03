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

#include "astra/scoring.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>

#include "astra/error.hpp"

namespace astra {

bool dominates(const ScorePair& a, const ScorePair& b) {
  return a.agent >= b.agent && a.partner >= b.partner &&
         (a.agent > b.agent || a.partner > b.partner);
}

Rational issue_score(const IssueSpec& issue, const PreferenceProfile& prefs, std::size_t index,
                     int value, Side side) {
  const Rational& weight = prefs.weights[index];
  switch (issue.kind) {
    case IssueKind::kAllocatedInteger:
      if (side == Side::kCounterpart) value = issue.complement(value);
      return weight * Rational(value);
    case IssueKind::kSharedCategorical:
      return weight * prefs.option_multipliers[index][static_cast<std::size_t>(value)];
    case IssueKind::kSharedBinary:
      return value ? weight : Rational();
  }
  return Rational();
}

Rational score_claims(const Scenario& scenario, std::span<const int> claims,
                      const PreferenceProfile& prefs, Side side) {
  Rational total;
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    total += issue_score(scenario.issues[i], prefs, i, claims[i], side);
  }
  return total;
}

Rational score(const Scenario& scenario, const Offer& offer, const PreferenceProfile& prefs,
               Side side) {
  require_valid(offer, scenario);
  return score_claims(scenario, offer.claims, prefs, side);
}

Rational possible_max_score(const Scenario& scenario, const PreferenceProfile& prefs) {
  Rational total;
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    const IssueSpec& issue = scenario.issues[i];
    const Rational& weight = prefs.weights[i];
    switch (issue.kind) {
      case IssueKind::kAllocatedInteger:
        total += weight * Rational(issue.max_units);
        break;
      case IssueKind::kSharedCategorical: {
        const auto& mult = prefs.option_multipliers[i];
        total += weight * *std::max_element(mult.begin(), mult.end());
        break;
      }
      case IssueKind::kSharedBinary:
        total += weight;
        break;
    }
  }
  return total;
}

std::size_t allocation_space_size(const Scenario& scenario) {
  std::size_t size = 1;
  for (const IssueSpec& issue : scenario.issues) {
    const auto d = static_cast<std::size_t>(std::max(issue.domain_size(), 0));
    if (d != 0 && size > std::numeric_limits<std::size_t>::max() / d) {
      return std::numeric_limits<std::size_t>::max();
    }
    size *= d;
  }
  return size;
}

std::vector<std::vector<int>> enumerate_allocations(const Scenario& scenario, std::size_t cap) {
  const std::size_t size = allocation_space_size(scenario);
  if (size > cap) {
    throw Error(ErrorCode::kSpaceTooLarge,
                "allocation space too large: " +
                    (size == std::numeric_limits<std::size_t>::max() ? std::string("overflow")
                                                                      : std::to_string(size)) +
                    " exceeds cap " + std::to_string(cap));
  }
  std::vector<std::vector<int>> out;
  out.reserve(size);
  const std::size_t n = scenario.issues.size();
  std::vector<int> current(n);
  for (std::size_t i = 0; i < n; ++i) current[i] = scenario.issues[i].lowest_value();
  if (size == 0) return out;
  while (true) {
    out.push_back(current);
    // Odometer increment, last issue fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (current[pos] < scenario.issues[pos].highest_value()) {
        ++current[pos];
        break;
      }
      current[pos] = scenario.issues[pos].lowest_value();
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

std::vector<ScoredAllocation> score_allocations(const Scenario& scenario,
                                                const PreferenceProfile& agent_prefs,
                                                const PreferenceProfile& partner_prefs,
                                                std::size_t cap) {
  auto allocations = enumerate_allocations(scenario, cap);
  std::vector<ScoredAllocation> out;
  out.reserve(allocations.size());
  for (auto& claims : allocations) {
    ScorePair scores{score_claims(scenario, claims, agent_prefs, Side::kProposer),
                     score_claims(scenario, claims, partner_prefs, Side::kCounterpart)};
    out.push_back({std::move(claims), scores});
  }
  return out;
}

bool ParetoSet::contains_scores(const ScorePair& p) const {
  return std::any_of(members.begin(), members.end(),
                     [&](const ScoredAllocation& m) { return m.scores == p; });
}

Rational ParetoSet::distance(const ScorePair& p) const {
  if (members.empty()) throw Error(ErrorCode::kInvalidArgument, "empty frontier");
  Rational best;
  bool first = true;
  for (const auto& m : members) {
    Rational d = max((m.scores.agent - p.agent).abs(), (m.scores.partner - p.partner).abs());
    if (first || d < best) {
      best = d;
      first = false;
    }
  }
  return best;
}

ParetoSet pareto_filter(const std::vector<ScoredAllocation>& all) {
  // Sort by agent score descending, partner descending; a point survives when
  // its partner score beats everything seen with a strictly higher agent
  // score, and ties exactly the best partner score within its own agent level.
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& sa = all[a].scores;
    const auto& sb = all[b].scores;
    if (sa.agent != sb.agent) return sa.agent > sb.agent;
    return sa.partner > sb.partner;
  });

  std::vector<bool> keep(all.size(), false);
  bool have_best = false;
  Rational best_partner_above;  // best partner score among strictly higher agent scores
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const Rational level = all[order[i]].scores.agent;
    while (j < order.size() && all[order[j]].scores.agent == level) ++j;
    const Rational level_best = all[order[i]].scores.partner;
    if (!have_best || level_best > best_partner_above) {
      for (std::size_t k = i; k < j && all[order[k]].scores.partner == level_best; ++k) {
        keep[order[k]] = true;
      }
      best_partner_above = level_best;
      have_best = true;
    }
    i = j;
  }

  ParetoSet set;
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (keep[k]) set.members.push_back(all[k]);
  }
  return set;
}

ParetoSet pareto_frontier(const Scenario& scenario, const PreferenceProfile& agent_prefs,
                          const PreferenceProfile& partner_prefs, std::size_t cap) {
  return pareto_filter(score_allocations(scenario, agent_prefs, partner_prefs, cap));
}

void write_frontier_csv(std::ostream& os, const Scenario& scenario, std::size_t cap) {
  require_valid(scenario);
  const auto all = score_allocations(scenario, scenario.agent_prefs, scenario.partner_truth(), cap);
  const ParetoSet frontier = pareto_filter(all);
  os << "allocation,agent_score,partner_score,member\n";
  for (const auto& a : all) {
    const bool member = frontier.contains_scores(a.scores);
    os << '"' << describe_claims(scenario, a.claims) << "\"," << a.scores.agent.to_string() << ','
       << a.scores.partner.to_string() << ',' << (member ? 1 : 0) << '\n';
  }
}

}  // namespace astra
