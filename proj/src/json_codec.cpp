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

#include "astra/json_codec.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "astra/error.hpp"

namespace astra {
namespace {

[[noreturn]] void fail(const std::string& message, std::vector<std::string> details = {}) {
  throw Error(ErrorCode::kValidation, message, std::move(details));
}

IssueKind parse_kind(const std::string& kind) {
  if (kind == "integer" || kind == "allocated-integer" || kind == "allocated") {
    return IssueKind::kAllocatedInteger;
  }
  if (kind == "categorical" || kind == "shared-categorical") return IssueKind::kSharedCategorical;
  if (kind == "binary" || kind == "shared-binary") return IssueKind::kSharedBinary;
  fail("unknown issue kind '" + kind + "'");
}

PreferenceProfile profile_from_json(const Json& j, const std::vector<IssueSpec>& issues,
                                    const std::string& label, std::vector<std::string>& errors) {
  PreferenceProfile p;
  p.weights.assign(issues.size(), Rational(0));
  p.option_multipliers.assign(issues.size(), {});
  if (!j.is_object() || !j.contains("weights") || !j["weights"].is_object()) {
    errors.push_back(label + ": missing weights object");
    return p;
  }
  const Json& weights = j["weights"];
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (!weights.contains(issues[i].name)) {
      errors.push_back(label + ": no weight for issue " + issues[i].name);
      continue;
    }
    try {
      p.weights[i] = rational_from_json(weights[issues[i].name]);
    } catch (const std::exception& e) {
      errors.push_back(label + ": weight for " + issues[i].name + ": " + e.what());
    }
  }
  for (const auto& [name, _] : weights.items()) {
    bool known = false;
    for (const auto& issue : issues) known = known || issue.name == name;
    if (!known) errors.push_back(label + ": weight for unknown issue " + name);
  }

  const Json* mult = j.contains("option_multipliers") ? &j["option_multipliers"] : nullptr;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    const IssueSpec& issue = issues[i];
    if (issue.kind != IssueKind::kSharedCategorical) continue;
    if (!mult || !mult->contains(issue.name) || !(*mult)[issue.name].is_object()) {
      errors.push_back(label + ": no option multipliers for " + issue.name);
      continue;
    }
    const Json& table = (*mult)[issue.name];
    auto& out = p.option_multipliers[i];
    for (const std::string& option : issue.options) {
      if (!table.contains(option)) {
        errors.push_back(label + ": no multiplier for " + issue.name + "/" + option);
        out.push_back(Rational(0));
        continue;
      }
      try {
        out.push_back(rational_from_json(table[option]));
      } catch (const std::exception& e) {
        errors.push_back(label + ": multiplier for " + issue.name + "/" + option + ": " + e.what());
        out.push_back(Rational(0));
      }
    }
  }
  return p;
}

Json profile_to_json(const PreferenceProfile& p, const std::vector<IssueSpec>& issues) {
  Json weights = Json::object();
  Json mult = Json::object();
  for (std::size_t i = 0; i < issues.size(); ++i) {
    weights[issues[i].name] = rational_to_json(p.weights[i]);
    if (issues[i].kind == IssueKind::kSharedCategorical) {
      Json table = Json::object();
      for (std::size_t k = 0; k < issues[i].options.size(); ++k) {
        table[issues[i].options[k]] = rational_to_json(p.option_multipliers[i][k]);
      }
      mult[issues[i].name] = table;
    }
  }
  Json out = {{"weights", weights}};
  if (!mult.empty()) out["option_multipliers"] = mult;
  return out;
}

Json claim_value_json(const IssueSpec& issue, int v) {
  switch (issue.kind) {
    case IssueKind::kAllocatedInteger: return v;
    case IssueKind::kSharedCategorical:
      if (issue.contains(v)) return issue.options[static_cast<std::size_t>(v)];
      return v;
    case IssueKind::kSharedBinary: return v != 0;
  }
  return v;
}

std::vector<int> claims_from_json(const Json& j, const Scenario& scenario,
                                  const std::string& label) {
  if (!j.is_object()) fail(label + " must be an object");
  std::vector<std::string> errors;
  std::vector<int> claims(scenario.issues.size(), 0);
  for (std::size_t i = 0; i < scenario.issues.size(); ++i) {
    const IssueSpec& issue = scenario.issues[i];
    if (!j.contains(issue.name)) {
      errors.push_back(label + ": missing " + issue.name);
      continue;
    }
    const Json& v = j[issue.name];
    switch (issue.kind) {
      case IssueKind::kAllocatedInteger:
        if (v.is_number_integer()) {
          claims[i] = v.get<int>();
        } else if (v.is_number() && v.get<double>() == static_cast<int>(v.get<double>())) {
          claims[i] = static_cast<int>(v.get<double>());
        } else {
          errors.push_back(label + ": " + issue.name + " must be an integer unit count");
        }
        break;
      case IssueKind::kSharedCategorical: {
        if (v.is_string()) {
          const auto& opts = issue.options;
          auto it = std::find(opts.begin(), opts.end(), v.get<std::string>());
          if (it == opts.end()) {
            errors.push_back(label + ": " + issue.name + " has no option '" +
                             v.get<std::string>() + "'");
          } else {
            claims[i] = static_cast<int>(it - opts.begin());
          }
        } else if (v.is_number_integer()) {
          claims[i] = v.get<int>();
        } else {
          errors.push_back(label + ": " + issue.name + " must name an option");
        }
        break;
      }
      case IssueKind::kSharedBinary:
        if (v.is_boolean()) {
          claims[i] = v.get<bool>() ? 1 : 0;
        } else if (v.is_number_integer()) {
          claims[i] = v.get<int>();
        } else {
          errors.push_back(label + ": " + issue.name + " must be true or false");
        }
        break;
    }
  }
  for (const auto& [name, _] : j.items()) {
    if (!scenario.issue_index(name)) errors.push_back(label + ": unknown issue " + name);
  }
  if (!errors.empty()) fail("malformed offer", std::move(errors));
  return claims;
}

}  // namespace

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return Rational::from_double(j.get<double>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  throw std::invalid_argument("expected a number");
}

Json rational_to_json(const Rational& r) {
  if (r.is_integer()) return r.num();
  const std::string text = r.to_string();
  if (text.find('/') == std::string::npos) {
    const double d = r.to_double();
    if (Rational::from_double(d) == r) return d;
  }
  return text;
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object()) fail("scenario must be a JSON object");
  Scenario s;
  std::vector<std::string> errors;
  s.id = j.value("id", std::string("scenario"));
  if (j.contains("max_turns")) {
    if (j["max_turns"].is_number_integer()) {
      s.max_turns = j["max_turns"].get<int>();
    } else {
      errors.push_back("max_turns must be an integer");
    }
  }
  if (!j.contains("issues") || !j["issues"].is_array()) fail("scenario needs an issues array");
  for (const Json& ij : j["issues"]) {
    IssueSpec issue;
    issue.name = ij.value("name", std::string());
    try {
      issue.kind = parse_kind(ij.value("kind", std::string("integer")));
    } catch (const Error& e) {
      errors.push_back(issue.name + ": " + e.what());
    }
    issue.description = ij.value("description", std::string());
    if (issue.kind == IssueKind::kAllocatedInteger) {
      issue.min_units = ij.value("min", 0);
      if (!ij.contains("max") || !ij["max"].is_number_integer()) {
        errors.push_back(issue.name + ": integer issue needs an integer max");
      } else {
        issue.max_units = ij["max"].get<int>();
      }
    } else if (issue.kind == IssueKind::kSharedCategorical) {
      if (ij.contains("options") && ij["options"].is_array()) {
        for (const Json& o : ij["options"]) {
          if (o.is_string()) issue.options.push_back(o.get<std::string>());
        }
      }
    }
    s.issues.push_back(std::move(issue));
  }
  if (!j.contains("agent_prefs")) {
    errors.push_back("missing agent_prefs");
  } else {
    s.agent_prefs = profile_from_json(j["agent_prefs"], s.issues, "agent_prefs", errors);
  }
  if (j.contains("partner_prefs") && !j["partner_prefs"].is_null()) {
    s.partner_prefs = profile_from_json(j["partner_prefs"], s.issues, "partner_prefs", errors);
  }
  if (errors.empty()) {
    for (auto& v : scenario_violations(s)) errors.push_back(std::move(v));
  }
  if (!errors.empty()) fail("invalid scenario", std::move(errors));
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json issues = Json::array();
  for (const IssueSpec& issue : s.issues) {
    Json ij = {{"name", issue.name}, {"kind", issue_kind_name(issue.kind)}};
    if (issue.kind == IssueKind::kAllocatedInteger) {
      ij["min"] = issue.min_units;
      ij["max"] = issue.max_units;
    } else if (issue.kind == IssueKind::kSharedCategorical) {
      ij["options"] = issue.options;
    }
    if (!issue.description.empty()) ij["description"] = issue.description;
    issues.push_back(ij);
  }
  Json out = {{"id", s.id},
              {"max_turns", s.max_turns},
              {"issues", issues},
              {"agent_prefs", profile_to_json(s.agent_prefs, s.issues)}};
  if (s.partner_prefs) out["partner_prefs"] = profile_to_json(*s.partner_prefs, s.issues);
  return out;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kValidation, "scenario file " + path + " is not valid JSON",
                {e.what()});
  }
  return scenario_from_json(j);
}

Offer offer_from_json(const Json& j, const Scenario& scenario) {
  if (!j.is_object() || !j.contains("claims")) fail("offer needs a claims object");
  Offer offer;
  offer.claims = claims_from_json(j["claims"], scenario, "claims");
  if (j.contains("counterpart") && !j["counterpart"].is_null()) {
    offer.counterpart = claims_from_json(j["counterpart"], scenario, "counterpart");
  }
  return offer;
}

Json claims_to_json(const std::vector<int>& claims, const Scenario& scenario) {
  Json out = Json::object();
  for (std::size_t i = 0; i < scenario.issues.size() && i < claims.size(); ++i) {
    out[scenario.issues[i].name] = claim_value_json(scenario.issues[i], claims[i]);
  }
  return out;
}

Json offer_to_json(const Offer& offer, const Scenario& scenario) {
  Json out = {{"claims", claims_to_json(offer.claims, scenario)}};
  if (offer.counterpart) out["counterpart"] = claims_to_json(*offer.counterpart, scenario);
  return out;
}

EngineConfig config_from_json(const Json& j, EngineConfig c) {
  if (j.is_null()) return c;
  if (!j.is_object()) fail("config must be an object");
  std::vector<std::string> errors;
  auto read = [&](const char* key, Rational& field) {
    if (!j.contains(key)) return;
    try {
      field = rational_from_json(j[key]);
    } catch (const std::exception& e) {
      errors.push_back(std::string(key) + ": " + e.what());
    }
  };
  auto read_int = [&](const char* key, int& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer()) {
      errors.push_back(std::string(key) + " must be an integer");
      return;
    }
    field = j[key].get<int>();
  };
  read("theta_f", c.fairness_threshold);
  read("w", c.ts_weight);
  const bool has_alpha = j.contains("alpha");
  const bool has_beta = j.contains("beta");
  read("alpha", c.alpha);
  read("beta", c.beta);
  if (has_alpha && !has_beta) c.beta = Rational(1) - c.alpha;
  if (has_beta && !has_alpha) c.alpha = Rational(1) - c.beta;
  read_int("N", c.candidate_count);
  read("batna", c.batna);
  read("anchor_fraction", c.anchor_fraction);
  read("theta_c", c.concession_threshold);
  read("agent_floor_fraction", c.agent_floor_fraction);
  read("partner_floor_fraction", c.partner_floor_fraction);
  read("lambda_step", c.lambda_step);
  read_int("lambda_radius", c.lambda_radius);
  read_int("smax_steps", c.smax_steps);
  read("extreme_offer_share", c.extreme_offer_share);
  read_int("max_preference_questions", c.max_preference_questions);
  if (j.contains("lambda")) {
    const Json& l = j["lambda"];
    if (!l.is_object()) {
      errors.push_back("lambda must be an object keyed by stance");
    } else {
      auto read_l = [&](const char* key, Rational& field) {
        if (!l.contains(key)) return;
        try {
          field = rational_from_json(l[key]);
        } catch (const std::exception& e) {
          errors.push_back(std::string("lambda.") + key + ": " + e.what());
        }
      };
      read_l("greedy", c.lambda_greedy);
      read_l("neutral", c.lambda_neutral);
      read_l("generous", c.lambda_generous);
      read_l("unknown", c.lambda_unknown);
    }
  }
  if (j.contains("solver")) {
    const std::string solver = j["solver"].is_string() ? j["solver"].get<std::string>() : "";
    if (solver == "enumerate") {
      c.solver = SolverKind::kEnumerate;
    } else if (solver == "branch-and-bound") {
      c.solver = SolverKind::kBranchAndBound;
    } else {
      errors.push_back("solver must be 'enumerate' or 'branch-and-bound'");
    }
  }
  if (j.contains("enumeration_cap")) {
    if (j["enumeration_cap"].is_number_unsigned()) {
      c.enumeration_cap = j["enumeration_cap"].get<std::size_t>();
    } else {
      errors.push_back("enumeration_cap must be a positive integer");
    }
  }
  if (!errors.empty()) fail("invalid engine config", std::move(errors));
  c.validate();
  return c;
}

Json config_to_json(const EngineConfig& c) {
  return {{"theta_f", exact_json(c.fairness_threshold)},
          {"w", exact_json(c.ts_weight)},
          {"alpha", exact_json(c.alpha)},
          {"beta", exact_json(c.beta)},
          {"N", c.candidate_count},
          {"batna", exact_json(c.batna)},
          {"anchor_fraction", exact_json(c.anchor_fraction)},
          {"lambda",
           {{"greedy", exact_json(c.lambda_greedy)},
            {"neutral", exact_json(c.lambda_neutral)},
            {"generous", exact_json(c.lambda_generous)},
            {"unknown", exact_json(c.lambda_unknown)}}},
          {"theta_c", exact_json(c.concession_threshold)},
          {"agent_floor_fraction", exact_json(c.agent_floor_fraction)},
          {"partner_floor_fraction", exact_json(c.partner_floor_fraction)},
          {"lambda_step", exact_json(c.lambda_step)},
          {"lambda_radius", c.lambda_radius},
          {"smax_steps", c.smax_steps},
          {"extreme_offer_share", exact_json(c.extreme_offer_share)},
          {"max_preference_questions", c.max_preference_questions},
          {"solver", c.solver == SolverKind::kEnumerate ? "enumerate" : "branch-and-bound"},
          {"enumeration_cap", c.enumeration_cap}};
}

}  // namespace astra
