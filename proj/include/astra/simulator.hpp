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

// Self-play batches against scripted personas, the metrics computed from
// their transcripts, and the paired t-test.

#ifndef ASTRA_SIMULATOR_HPP_
#define ASTRA_SIMULATOR_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "astra/persona.hpp"

namespace astra {

enum class MixKind {
  kFixed,  // the scenario as given
  kPermuted,  // random agent ranking; partner opposed or identical, 50/50
  kAuto,   // kPermuted when every issue is allocated, else kFixed
};

const char* mix_name(MixKind m);
std::optional<MixKind> parse_mix(std::string_view name);

enum class PartnerChoice { kBase, kGreedy, kFair, kMix };

const char* partner_choice_name(PartnerChoice p);
std::optional<PartnerChoice> parse_partner_choice(std::string_view name);
PersonaKind persona_for_session(PartnerChoice p, std::size_t index);

// Draws the scenario for one session. Throws Error(kInvalidArgument) when
// kPermuted is requested for a scenario with shared issues.
Scenario sample_scenario(const Scenario& base, MixKind mix, std::uint64_t seed,
                         std::string* kind_out);

// Per-session seed derived from the master seed by a splitmix64 counter.
std::uint64_t session_seed(std::uint64_t master, std::size_t index);

struct SessionRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::string persona;
  std::string scenario_kind;
  Scenario scenario;
  std::vector<Json> events;  // session log, in order
  bool adapter_fallback = false;
};

struct SimulationOptions {
  EngineConfig engine;
  PartnerChoice partner = PartnerChoice::kBase;
  MixKind mix = MixKind::kAuto;
  std::optional<PersonaConfig> persona_override;  // kind is taken from `partner`
  std::shared_ptr<ModelAdapter> adapter;
  int threads = 1;
};

SessionRecord run_session(const Scenario& base, const SimulationOptions& options,
                          std::uint64_t master_seed, std::size_t index);

std::vector<SessionRecord> run_sessions(const Scenario& base, const SimulationOptions& options,
                                        std::size_t n, std::uint64_t master_seed);

// One JSON object per line: a header per session followed by its events,
// each tagged with the session index.
void write_transcripts(std::ostream& os, std::span<const SessionRecord> records);
std::vector<SessionRecord> read_transcripts(std::istream& is);

struct TTestResult {
  double t = 0;
  double p = 1;
  int df = 0;
  double mean_diff = 0;
  double sd_diff = 0;
  bool degenerate = false;
};

// Paired, two-sided. Throws Error(kInvalidArgument) for unequal or too
// short samples; zero variance of the differences is reported as degenerate.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

struct CellStats {
  int turns = 0;
  Rational lambda_sum;
  std::map<std::string, int> tactics;
  int deltas = 0;
  Rational delta_sum;
  std::optional<Rational> delta_min;
  std::optional<Rational> delta_max;
};

struct ParetoStats {
  int agent_offers = 0;
  int agent_members = 0;
  int partner_offers = 0;
  int partner_members = 0;
  int agreements = 0;
  int agreement_members = 0;
  std::vector<Rational> agent_distances;
  std::vector<Rational> partner_distances;
};

struct BatchMetrics {
  std::size_t n = 0;
  std::size_t agreements = 0;
  std::size_t walk_aways = 0;
  std::size_t forced = 0;
  Rational agent_sum_all, partner_sum_all;
  Rational agent_sum_agreement, partner_sum_agreement;
  std::map<std::string, CellStats> cells;  // key "stance/fairness"
  ParetoStats pareto;
  int non_escalation_violations = 0;
  int conservation_violations = 0;
  int adapter_fallbacks = 0;
  std::optional<TTestResult> t_all;
  std::optional<TTestResult> t_agreement;

  Rational avg_agent_all() const;
  Rational avg_partner_all() const;
  Rational avg_agent_agreement() const;
  Rational avg_partner_agreement() const;
  Rational walk_away_rate() const;
};

BatchMetrics compute_metrics(std::span<const SessionRecord> records);

// Long-format CSV: metric,stance,fairness,value.
void write_metrics_csv(std::ostream& os, const BatchMetrics& m);
Json metrics_to_json(const BatchMetrics& m);

struct OfferDistance {
  std::size_t session = 0;
  int turn = 0;
  std::string by;
  ScorePair scores;
  bool member = false;
  Rational distance;
};

struct ParetoReport {
  ParetoStats stats;
  std::vector<OfferDistance> offers;
};

// Frontier membership and Chebyshev distance of every offer, scored with
// the true profiles of each session's scenario.
ParetoReport pareto_report(std::span<const SessionRecord> records);
void write_pareto_csv(std::ostream& os, const ParetoReport& report);

struct AblationRow {
  Rational alpha;
  Rational beta;
  BatchMetrics metrics;
};

std::vector<AblationRow> run_ablation(const Scenario& base, const SimulationOptions& options,
                                      std::span<const Rational> alphas, std::size_t n,
                                      std::uint64_t master_seed);
void write_ablation_csv(std::ostream& os, std::span<const AblationRow> rows);

// Decimal rendering used by every CSV writer.
std::string fixed6(const Rational& r);

}  // namespace astra

#endif  // ASTRA_SIMULATOR_HPP_
