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

#include "astra/domain.hpp"

#include <set>
#include <sstream>

#include "astra/error.hpp"

namespace astra {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kInfeasible: return "infeasible";
    case ErrorCode::kSpaceTooLarge: return "space_too_large";
    case ErrorCode::kContradiction: return "contradiction";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kAdapter: return "adapter";
  }
  return "unknown";
}

const char* issue_kind_name(IssueKind kind) {
  switch (kind) {
    case IssueKind::kAllocatedInteger: return "integer";
    case IssueKind::kSharedCategorical: return "categorical";
    case IssueKind::kSharedBinary: return "binary";
  }
  return "?";
}

IssueSpec IssueSpec::allocated(std::string name, int min_units, int max_units) {
  IssueSpec s;
  s.name = std::move(name);
  s.kind = IssueKind::kAllocatedInteger;
  s.min_units = min_units;
  s.max_units = max_units;
  return s;
}

IssueSpec IssueSpec::categorical(std::string name, std::vector<std::string> options) {
  IssueSpec s;
  s.name = std::move(name);
  s.kind = IssueKind::kSharedCategorical;
  s.options = std::move(options);
  return s;
}

IssueSpec IssueSpec::binary(std::string name) {
  IssueSpec s;
  s.name = std::move(name);
  s.kind = IssueKind::kSharedBinary;
  return s;
}

int IssueSpec::lowest_value() const {
  return kind == IssueKind::kAllocatedInteger ? min_units : 0;
}

int IssueSpec::highest_value() const {
  switch (kind) {
    case IssueKind::kAllocatedInteger: return max_units;
    case IssueKind::kSharedCategorical: return static_cast<int>(options.size()) - 1;
    case IssueKind::kSharedBinary: return 1;
  }
  return 0;
}

int IssueSpec::complement(int value) const {
  return kind == IssueKind::kAllocatedInteger ? min_units + max_units - value : value;
}

std::optional<std::size_t> Scenario::issue_index(std::string_view name) const {
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (issues[i].name == name) return i;
  }
  return std::nullopt;
}

const PreferenceProfile& Scenario::partner_truth() const {
  if (!partner_prefs) {
    throw Error(ErrorCode::kInvalidArgument,
                "scenario '" + id + "' has no partner preferences");
  }
  return *partner_prefs;
}

namespace {

void profile_violations(const Scenario& s, const PreferenceProfile& p, const std::string& label,
                        std::vector<std::string>& out) {
  if (p.weights.size() != s.issues.size()) {
    out.push_back(label + ": expected " + std::to_string(s.issues.size()) + " weights, got " +
                  std::to_string(p.weights.size()));
    return;
  }
  if (p.option_multipliers.size() != s.issues.size()) {
    out.push_back(label + ": option multiplier table does not cover every issue");
    return;
  }
  for (std::size_t i = 0; i < s.issues.size(); ++i) {
    const IssueSpec& issue = s.issues[i];
    if (p.weights[i] < Rational(0)) out.push_back(label + ": negative weight for " + issue.name);
    const auto& mult = p.option_multipliers[i];
    if (issue.kind == IssueKind::kSharedCategorical) {
      if (mult.size() != issue.options.size()) {
        out.push_back(label + ": " + issue.name + " needs one multiplier per option");
        continue;
      }
      for (std::size_t k = 0; k < mult.size(); ++k) {
        if (mult[k] < Rational(0) || Rational(1) < mult[k]) {
          out.push_back(label + ": multiplier for " + issue.name + "/" + issue.options[k] +
                        " outside [0,1]");
        }
      }
    } else if (!mult.empty()) {
      out.push_back(label + ": " + issue.name + " is not categorical but has multipliers");
    }
  }
}

}  // namespace

std::vector<std::string> scenario_violations(const Scenario& s) {
  std::vector<std::string> out;
  if (s.issues.empty()) out.push_back("scenario has no issues");
  if (s.max_turns < 0) out.push_back("max_turns must be non-negative");
  std::set<std::string> names;
  for (const IssueSpec& issue : s.issues) {
    if (issue.name.empty()) out.push_back("issue with empty name");
    if (!names.insert(issue.name).second) out.push_back("duplicate issue " + issue.name);
    switch (issue.kind) {
      case IssueKind::kAllocatedInteger:
        if (issue.min_units < 0 || issue.max_units < issue.min_units) {
          out.push_back(issue.name + ": requires max >= min >= 0");
        }
        break;
      case IssueKind::kSharedCategorical: {
        std::set<std::string> opts(issue.options.begin(), issue.options.end());
        if (issue.options.size() < 2 || opts.size() != issue.options.size()) {
          out.push_back(issue.name + ": needs at least two distinct options");
        }
        break;
      }
      case IssueKind::kSharedBinary:
        break;
    }
  }
  profile_violations(s, s.agent_prefs, "agent_prefs", out);
  if (s.partner_prefs) profile_violations(s, *s.partner_prefs, "partner_prefs", out);
  return out;
}

void require_valid(const Scenario& scenario) {
  auto violations = scenario_violations(scenario);
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidation, "invalid scenario", std::move(violations));
  }
}

std::vector<std::string> validate_offer(const Offer& offer, const Scenario& scenario) {
  std::vector<std::string> out;
  const auto& issues = scenario.issues;
  if (offer.claims.size() != issues.size()) {
    out.push_back("offer covers " + std::to_string(offer.claims.size()) + " issues, scenario has " +
                  std::to_string(issues.size()));
    return out;
  }
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const IssueSpec& issue = issues[i];
    const int v = offer.claims[i];
    if (!issue.contains(v)) {
      switch (issue.kind) {
        case IssueKind::kAllocatedInteger:
          out.push_back(issue.name + " claim " + std::to_string(v) + " outside [" +
                        std::to_string(issue.min_units) + "," + std::to_string(issue.max_units) +
                        "]");
          break;
        case IssueKind::kSharedCategorical:
          out.push_back(issue.name + " option index " + std::to_string(v) + " not in option list");
          break;
        case IssueKind::kSharedBinary:
          out.push_back(issue.name + " must be true or false");
          break;
      }
    }
  }
  if (offer.counterpart) {
    const auto& other = *offer.counterpart;
    if (other.size() != issues.size()) {
      out.push_back("counterpart side covers " + std::to_string(other.size()) + " issues");
      return out;
    }
    for (std::size_t i = 0; i < issues.size(); ++i) {
      const IssueSpec& issue = issues[i];
      if (issue.kind == IssueKind::kAllocatedInteger) {
        const int pool = issue.min_units + issue.max_units;
        const int total = offer.claims[i] + other[i];
        if (total > pool) {
          out.push_back(issue.name + " over-allocated (" + std::to_string(total) + " of " +
                        std::to_string(pool) + ")");
        } else if (total < pool) {
          out.push_back(issue.name + " under-allocated (" + std::to_string(total) + " of " +
                        std::to_string(pool) + ")");
        }
      } else if (other[i] != offer.claims[i]) {
        out.push_back(issue.name + " is shared but the two sides name different values");
      }
    }
  }
  return out;
}

void require_valid(const Offer& offer, const Scenario& scenario) {
  auto violations = validate_offer(offer, scenario);
  if (!violations.empty()) {
    throw Error(ErrorCode::kValidation, "invalid offer", std::move(violations));
  }
}

std::vector<int> complement(const Scenario& scenario, const std::vector<int>& claims) {
  std::vector<int> out(claims.size());
  for (std::size_t i = 0; i < claims.size(); ++i) out[i] = scenario.issues[i].complement(claims[i]);
  return out;
}

std::string describe_claims(const Scenario& scenario, const std::vector<int>& claims) {
  std::ostringstream os;
  for (std::size_t i = 0; i < claims.size() && i < scenario.issues.size(); ++i) {
    const IssueSpec& issue = scenario.issues[i];
    if (i) os << ' ';
    os << issue.name << '=';
    switch (issue.kind) {
      case IssueKind::kAllocatedInteger: os << claims[i]; break;
      case IssueKind::kSharedCategorical:
        if (issue.contains(claims[i])) {
          os << issue.options[static_cast<std::size_t>(claims[i])];
        } else {
          os << '#' << claims[i];
        }
        break;
      case IssueKind::kSharedBinary: os << (claims[i] ? "true" : "false"); break;
    }
  }
  return os.str();
}

const char* fairness_name(Fairness f) {
  switch (f) {
    case Fairness::kFair: return "fair";
    case Fairness::kUnfair: return "unfair";
    case Fairness::kUnknown: return "unknown";
  }
  return "?";
}

const char* stance_name(Stance s) {
  switch (s) {
    case Stance::kGenerous: return "generous";
    case Stance::kNeutral: return "neutral";
    case Stance::kGreedy: return "greedy";
    case Stance::kUnknown: return "unknown";
  }
  return "?";
}

const char* tactic_code(Tactic t) {
  switch (t) {
    case Tactic::kLIC: return "LIC";
    case Tactic::kCSC: return "CSC";
    case Tactic::kRC: return "RC";
    case Tactic::kLGR: return "LGR";
    case Tactic::kMGF: return "MGF";
    case Tactic::kAEO: return "AEO";
    case Tactic::kREO: return "REO";
    case Tactic::kNCR: return "NCR";
    case Tactic::kRNC: return "RNC";
  }
  return "?";
}

std::optional<Tactic> parse_tactic(std::string_view code) {
  // Older traces label the opening anchor "AIO".
  if (code == "AIO") return Tactic::kAEO;
  for (Tactic t : kAllTactics) {
    if (code == tactic_code(t)) return t;
  }
  return std::nullopt;
}

bool is_competitive(Tactic t) {
  return t == Tactic::kAEO || t == Tactic::kREO || t == Tactic::kNCR || t == Tactic::kRNC;
}

const TacticDescription& describe(Tactic t) {
  static const TacticDescription kLic{"Initial Concession",
                                      "Early phase, no concession made yet by us.",
                                      "Concede something the partner values highly.",
                                      "Opens the door to reciprocal concessions."};
  static const TacticDescription kCsc{"Continued Smaller Concessions",
                                      "Our last concession was large and the reply was small.",
                                      "Concede again, by a smaller step.",
                                      "Keeps cooperation going without overpaying."};
  static const TacticDescription kRc{"Reciprocal Concessions",
                                     "Partner just made a significant concession.",
                                     "Answer with a concession of our own.",
                                     "Rewards cooperation and keeps the exchange even."};
  static const TacticDescription kLgr{"Logrolling", "Any point in the negotiation.",
                                      "Trade away what we value less for what we value more.",
                                      "Raises the joint value of the deal."};
  static const TacticDescription kMgf{"Mutual Gain Focus",
                                      "Partner's latest offer scores them above us.",
                                      "Shift toward offers that improve both sides.",
                                      "Builds a cooperative climate."};
  static const TacticDescription kAeo{"Aggressive Early Offers",
                                      "Start of the negotiation, few offers exchanged.",
                                      "Propose a strongly self-favorable offer.",
                                      "Anchors high and leaves room to concede later."};
  static const TacticDescription kReo{"Response to Extreme Offer",
                                      "Partner's offer claims an extreme share.",
                                      "Counter with a strongly self-favorable offer.",
                                      "Discourages extreme demands."};
  static const TacticDescription kNcr{"No Concession Response",
                                      "Partner made no concession in their last two offers.",
                                      "Hold the current position.",
                                      "Avoids being exploited."};
  static const TacticDescription kRnc{"Reject Negative Concession",
                                      "Partner's last offer raised their own score.",
                                      "Hold the position, concede nothing.",
                                      "Signals that backtracking is not rewarded."};
  switch (t) {
    case Tactic::kLIC: return kLic;
    case Tactic::kCSC: return kCsc;
    case Tactic::kRC: return kRc;
    case Tactic::kLGR: return kLgr;
    case Tactic::kMGF: return kMgf;
    case Tactic::kAEO: return kAeo;
    case Tactic::kREO: return kReo;
    case Tactic::kNCR: return kNcr;
    case Tactic::kRNC: return kRnc;
  }
  return kLgr;
}

void EngineConfig::validate() const {
  std::vector<std::string> out;
  const Rational zero(0);
  const Rational one(1);
  auto unit = [&](const Rational& v, const char* name) {
    if (v < zero || one < v) out.push_back(std::string(name) + " must lie in [0,1]");
  };
  unit(ts_weight, "w");
  unit(alpha, "alpha");
  unit(beta, "beta");
  unit(anchor_fraction, "anchor_fraction");
  unit(lambda_greedy, "lambda.greedy");
  unit(lambda_neutral, "lambda.neutral");
  unit(lambda_generous, "lambda.generous");
  unit(lambda_unknown, "lambda.unknown");
  unit(agent_floor_fraction, "agent_floor_fraction");
  unit(partner_floor_fraction, "partner_floor_fraction");
  unit(extreme_offer_share, "extreme_offer_share");
  if (alpha + beta != one) out.push_back("alpha + beta must equal 1");
  if (fairness_threshold < zero) out.push_back("theta_f must be non-negative");
  if (concession_threshold < zero) out.push_back("theta_c must be non-negative");
  if (candidate_count < 1) out.push_back("N must be at least 1");
  if (lambda_step < zero) out.push_back("lambda_step must be non-negative");
  if (lambda_radius < 0 || smax_steps < 0) out.push_back("sweep extents must be non-negative");
  if (max_preference_questions < 0) out.push_back("max_preference_questions must be non-negative");
  if (!out.empty()) throw Error(ErrorCode::kValidation, "invalid engine config", std::move(out));
}

}  // namespace astra
