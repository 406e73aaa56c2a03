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

#include "astra/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "astra/error.hpp"

namespace astra {

const char* mix_name(MixKind m) {
  switch (m) {
    case MixKind::kFixed:
      return "fixed";
    case MixKind::kPermuted:
      return "permuted";
    case MixKind::kAuto:
      return "auto";
  }
  return "?";
}

std::optional<MixKind> parse_mix(std::string_view name) {
  for (MixKind m : {MixKind::kFixed, MixKind::kPermuted, MixKind::kAuto}) {
    if (name == mix_name(m)) return m;
  }
  return std::nullopt;
}

const char* partner_choice_name(PartnerChoice p) {
  switch (p) {
    case PartnerChoice::kBase:
      return "base";
    case PartnerChoice::kGreedy:
      return "greedy";
    case PartnerChoice::kFair:
      return "fair";
    case PartnerChoice::kMix:
      return "mix";
  }
  return "?";
}

std::optional<PartnerChoice> parse_partner_choice(std::string_view name) {
  for (PartnerChoice p :
       {PartnerChoice::kBase, PartnerChoice::kGreedy, PartnerChoice::kFair, PartnerChoice::kMix}) {
    if (name == partner_choice_name(p)) return p;
  }
  return std::nullopt;
}

PersonaKind persona_for_session(PartnerChoice p, std::size_t index) {
  switch (p) {
    case PartnerChoice::kBase:
      return PersonaKind::kBase;
    case PartnerChoice::kGreedy:
      return PersonaKind::kGreedy;
    case PartnerChoice::kFair:
      return PersonaKind::kFair;
    case PartnerChoice::kMix:
      break;
  }
  static constexpr PersonaKind kCycle[] = {PersonaKind::kBase, PersonaKind::kGreedy,
                                           PersonaKind::kFair};
  return kCycle[index % 3];
}

std::uint64_t session_seed(std::uint64_t master, std::size_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Scenario sample_scenario(const Scenario& base, MixKind mix, std::uint64_t seed,
                         std::string* kind_out) {
  const bool all_allocated =
      std::all_of(base.issues.begin(), base.issues.end(),
                  [](const IssueSpec& i) { return i.kind == IssueKind::kAllocatedInteger; });
  if (mix == MixKind::kAuto) mix = all_allocated ? MixKind::kPermuted : MixKind::kFixed;
  if (mix == MixKind::kFixed) {
    if (kind_out) *kind_out = "fixed";
    return base;
  }
  if (!all_allocated) {
    throw Error(ErrorCode::kInvalidArgument,
                "the permuted mix reassigns weights and needs every issue to be allocated");
  }
  std::mt19937_64 rng(seed);
  const std::size_t n = base.issues.size();
  std::vector<Rational> own = base.agent_prefs.weights;
  std::vector<Rational> theirs = partner_value_set(base);
  std::sort(own.begin(), own.end(), [](auto& a, auto& b) { return b < a; });
  std::sort(theirs.begin(), theirs.end(), [](auto& a, auto& b) { return b < a; });

  // rank[i] is issue i's position in the agent's ranking.
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::shuffle(rank.begin(), rank.end(), rng);
  const bool integrative = std::bernoulli_distribution(0.5)(rng);

  Scenario s = base;
  s.partner_prefs = base.partner_prefs.value_or(base.agent_prefs);
  for (std::size_t i = 0; i < n; ++i) {
    s.agent_prefs.weights[i] = own[rank[i]];
    s.partner_prefs->weights[i] = theirs[integrative ? n - 1 - rank[i] : rank[i]];
  }
  const std::string kind = integrative ? "integrative" : "distributive";
  s.id = base.id + "/" + kind;
  if (kind_out) *kind_out = kind;
  return s;
}

SessionRecord run_session(const Scenario& base, const SimulationOptions& options,
                          std::uint64_t master_seed, std::size_t index) {
  SessionRecord rec;
  rec.index = index;
  rec.seed = session_seed(master_seed, index);
  rec.scenario = sample_scenario(base, options.mix, rec.seed, &rec.scenario_kind);
  const Scenario& s = rec.scenario;
  if (!s.partner_prefs) {
    throw Error(ErrorCode::kInvalidArgument, "simulation needs the partner's true preferences");
  }

  const PersonaKind kind = persona_for_session(options.partner, index);
  PersonaConfig persona = options.persona_override.value_or(PersonaConfig::for_kind(kind));
  persona.kind = kind;
  persona.rng_seed = rec.seed;
  rec.persona = persona_name(kind);

  const AstraEngine engine(options.engine, options.adapter);
  auto respond = [&](const SessionState& st) {
    if (options.adapter) {
      return adapter_persona_respond(*options.adapter, persona, s, st, &rec.adapter_fallback);
    }
    return persona_respond(persona, s, st);
  };

  SessionState st;
  PartnerEvent event = respond(st);
  while (true) {
    st = ingest(s, options.engine, std::move(st), event);
    if (st.closed()) break;
    const Decision d = recommend(s, engine, st);
    st = apply_move(s, options.engine, std::move(st), d.move, d.trace);
    if (st.closed()) break;
    event = respond(st);
  }
  rec.events = std::move(st.log);
  return rec;
}

std::vector<SessionRecord> run_sessions(const Scenario& base, const SimulationOptions& options,
                                        std::size_t n, std::uint64_t master_seed) {
  require_valid(base);
  options.engine.validate();
  std::vector<SessionRecord> out(n);
  const int threads = std::max(1, options.threads);
  if (threads == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = run_session(base, options, master_seed, i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) {
          out[i] = run_session(base, options, master_seed, i);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

void write_transcripts(std::ostream& os, std::span<const SessionRecord> records) {
  for (const SessionRecord& r : records) {
    Json header = {{"type", "session"},
                   {"session", r.index},
                   {"seed", r.seed},
                   {"persona", r.persona},
                   {"scenario_kind", r.scenario_kind},
                   {"adapter_fallback", r.adapter_fallback},
                   {"scenario", scenario_to_json(r.scenario)}};
    os << header.dump() << '\n';
    for (const Json& e : r.events) {
      Json tagged = e;
      tagged["session"] = r.index;
      os << tagged.dump() << '\n';
    }
  }
}

std::vector<SessionRecord> read_transcripts(std::istream& is) {
  std::vector<SessionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorCode::kValidation,
                  "transcript line " + std::to_string(line_no) + ": " + e.what());
    }
    if (j.value("type", std::string()) == "session") {
      SessionRecord r;
      r.index = j.at("session").get<std::size_t>();
      r.seed = j.value("seed", std::uint64_t{0});
      r.persona = j.value("persona", std::string());
      r.scenario_kind = j.value("scenario_kind", std::string());
      r.adapter_fallback = j.value("adapter_fallback", false);
      r.scenario = scenario_from_json(j.at("scenario"));
      out.push_back(std::move(r));
      continue;
    }
    if (out.empty() || j.value("session", std::size_t{0}) != out.back().index) {
      throw Error(ErrorCode::kValidation, "transcript line " + std::to_string(line_no) +
                                              " precedes its session header");
    }
    j.erase("session");
    out.back().events.push_back(std::move(j));
  }
  return out;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kInvalidArgument, "samples differ in length");
  if (a.size() < 2) throw Error(ErrorCode::kInvalidArgument, "paired t-test needs two pairs");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(n);
  double ss = 0;
  for (double x : d) ss += (x - mean) * (x - mean);
  TTestResult r;
  r.df = static_cast<int>(n) - 1;
  r.mean_diff = mean;
  r.sd_diff = std::sqrt(ss / static_cast<double>(n - 1));
  if (r.sd_diff == 0) {
    r.degenerate = true;
    r.t = mean == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p = std::numeric_limits<double>::quiet_NaN();
    return r;
  }
  r.t = mean / (r.sd_diff / std::sqrt(static_cast<double>(n)));
  const boost::math::students_t dist(static_cast<double>(r.df));
  r.p = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
  return r;
}

Rational BatchMetrics::avg_agent_all() const { return n ? agent_sum_all / Rational(static_cast<std::int64_t>(n)) : Rational(); }
Rational BatchMetrics::avg_partner_all() const { return n ? partner_sum_all / Rational(static_cast<std::int64_t>(n)) : Rational(); }
Rational BatchMetrics::avg_agent_agreement() const {
  return agreements ? agent_sum_agreement / Rational(static_cast<std::int64_t>(agreements)) : Rational();
}
Rational BatchMetrics::avg_partner_agreement() const {
  return agreements ? partner_sum_agreement / Rational(static_cast<std::int64_t>(agreements)) : Rational();
}
Rational BatchMetrics::walk_away_rate() const {
  return n ? Rational(static_cast<std::int64_t>(walk_aways), static_cast<std::int64_t>(n)) : Rational();
}

namespace {

std::vector<int> claims_from_json(const Json& j, const Scenario& s) {
  return offer_from_json({{"claims", j}}, s).claims;
}

class FrontierCache {
 public:
  const ParetoSet& get(const Scenario& s) {
    const std::string key = scenario_to_json(s).dump();
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, pareto_frontier(s, s.agent_prefs, s.partner_truth())).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, ParetoSet> cache_;
};

void add_offer(ParetoStats& p, const ParetoSet& frontier, bool by_agent, const ScorePair& sc) {
  const bool member = frontier.contains_scores(sc);
  const Rational dist = frontier.distance(sc);
  if (by_agent) {
    ++p.agent_offers;
    p.agent_members += member;
    p.agent_distances.push_back(dist);
  } else {
    ++p.partner_offers;
    p.partner_members += member;
    p.partner_distances.push_back(dist);
  }
}

std::optional<TTestResult> try_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2) return std::nullopt;
  return paired_t_test(a, b);
}

}  // namespace

BatchMetrics compute_metrics(std::span<const SessionRecord> records) {
  BatchMetrics m;
  FrontierCache frontiers;
  std::vector<double> all_a, all_p, agr_a, agr_p;
  for (const SessionRecord& r : records) {
    ++m.n;
    m.adapter_fallbacks += r.adapter_fallback;
    const Scenario& s = r.scenario;
    const ParetoSet& frontier = frontiers.get(s);
    std::optional<Rational> last_own;
    const Json* outcome = nullptr;
    for (const Json& e : r.events) {
      const std::string type = e.value("type", std::string());
      if (type == "stage_trace") {
        CellStats& cell = m.cells[e.at("stance").get<std::string>() + "/" +
                                  e.at("fairness").get<std::string>()];
        ++cell.turns;
        cell.lambda_sum += rational_from_json(e.at("lambda"));
        if (!e.at("tactic").is_null()) ++cell.tactics[e.at("tactic").get<std::string>()];
        if (!e.at("selected").is_null() && last_own) {
          const Json& sel = e.at("candidates").at(e.at("selected").get<std::size_t>());
          const Rational delta = rational_from_json(sel.at("s_a")) - *last_own;
          ++cell.deltas;
          cell.delta_sum += delta;
          cell.delta_min = cell.delta_min ? min(*cell.delta_min, delta) : delta;
          cell.delta_max = cell.delta_max ? max(*cell.delta_max, delta) : delta;
        }
      } else if (type == "offer") {
        const bool by_agent = e.at("by") == "agent";
        const ScorePair sc{rational_from_json(e.at("agent_score")),
                           rational_from_json(e.at("partner_score"))};
        add_offer(m.pareto, frontier, by_agent, sc);
        if (by_agent) {
          if (last_own && sc.agent > *last_own) ++m.non_escalation_violations;
          last_own = sc.agent;
        }
      } else if (type == "outcome") {
        outcome = &e;
      }
    }
    ScorePair final_scores;
    bool agreement = false;
    if (outcome) {
      agreement = outcome->at("result") == "agreement";
      m.forced += outcome->value("forced", false);
      final_scores = {rational_from_json(outcome->at("agent_score")),
                      rational_from_json(outcome->at("partner_score"))};
      if (agreement) {
        const auto claims = claims_from_json(outcome->at("claims"), s);
        const ScorePair check{score_claims(s, claims, s.agent_prefs, Side::kProposer),
                              score_claims(s, claims, s.partner_truth(), Side::kCounterpart)};
        if (!(check == final_scores)) ++m.conservation_violations;
        ++m.pareto.agreements;
        m.pareto.agreement_members += frontier.contains_scores(final_scores);
      } else if (!final_scores.agent.is_zero() || !final_scores.partner.is_zero()) {
        ++m.conservation_violations;
      }
    }
    if (agreement) {
      ++m.agreements;
      m.agent_sum_agreement += final_scores.agent;
      m.partner_sum_agreement += final_scores.partner;
      agr_a.push_back(final_scores.agent.to_double());
      agr_p.push_back(final_scores.partner.to_double());
    } else {
      ++m.walk_aways;
    }
    m.agent_sum_all += final_scores.agent;
    m.partner_sum_all += final_scores.partner;
    all_a.push_back(final_scores.agent.to_double());
    all_p.push_back(final_scores.partner.to_double());
  }
  m.t_all = try_t(all_a, all_p);
  m.t_agreement = try_t(agr_a, agr_p);
  return m;
}

std::string fixed6(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
  return buf;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

Rational ratio(int a, int b) { return b ? Rational(a, b) : Rational(); }

}  // namespace

void write_metrics_csv(std::ostream& os, const BatchMetrics& m) {
  os << "metric,stance,fairness,value\n";
  auto row = [&](const std::string& metric, const std::string& value, const std::string& stance = "",
                 const std::string& fairness = "") {
    os << metric << ',' << stance << ',' << fairness << ',' << value << '\n';
  };
  row("sessions", std::to_string(m.n));
  row("agreements", std::to_string(m.agreements));
  row("walk_aways", std::to_string(m.walk_aways));
  row("forced_walk_aways", std::to_string(m.forced));
  row("walk_away_rate", fixed6(m.walk_away_rate()));
  row("avg_agent_score_all", fixed6(m.avg_agent_all()));
  row("avg_partner_score_all", fixed6(m.avg_partner_all()));
  row("avg_agent_score_agreement", fixed6(m.avg_agent_agreement()));
  row("avg_partner_score_agreement", fixed6(m.avg_partner_agreement()));
  row("pareto_rate_agent_offers", fixed6(ratio(m.pareto.agent_members, m.pareto.agent_offers)));
  row("pareto_rate_partner_offers",
      fixed6(ratio(m.pareto.partner_members, m.pareto.partner_offers)));
  row("pareto_rate_agreements", fixed6(ratio(m.pareto.agreement_members, m.pareto.agreements)));
  row("non_escalation_violations", std::to_string(m.non_escalation_violations));
  row("conservation_violations", std::to_string(m.conservation_violations));
  row("adapter_fallbacks", std::to_string(m.adapter_fallbacks));
  if (m.t_all) {
    row("t_all", num(m.t_all->t));
    row("p_all", num(m.t_all->p));
  }
  if (m.t_agreement) {
    row("t_agreement", num(m.t_agreement->t));
    row("p_agreement", num(m.t_agreement->p));
  }
  for (const auto& [key, cell] : m.cells) {
    const auto slash = key.find('/');
    const std::string stance = key.substr(0, slash), fairness = key.substr(slash + 1);
    row("turns", std::to_string(cell.turns), stance, fairness);
    row("lambda_mean", fixed6(cell.lambda_sum / Rational(cell.turns)), stance, fairness);
    for (const auto& [code, count] : cell.tactics) {
      row("tactic_" + code, std::to_string(count), stance, fairness);
    }
    if (cell.deltas) {
      row("offer_delta_mean", fixed6(cell.delta_sum / Rational(cell.deltas)), stance, fairness);
      row("offer_delta_min", fixed6(*cell.delta_min), stance, fairness);
      row("offer_delta_max", fixed6(*cell.delta_max), stance, fairness);
    }
  }
}

Json metrics_to_json(const BatchMetrics& m) {
  Json cells = Json::object();
  for (const auto& [key, cell] : m.cells) {
    Json c = {{"turns", cell.turns},
              {"lambda_mean", exact_json(cell.lambda_sum / Rational(cell.turns))},
              {"tactics", cell.tactics}};
    if (cell.deltas) {
      c["offer_delta_mean"] = exact_json(cell.delta_sum / Rational(cell.deltas));
      c["offer_delta_min"] = exact_json(*cell.delta_min);
      c["offer_delta_max"] = exact_json(*cell.delta_max);
    }
    cells[key] = c;
  }
  auto t_json = [](const std::optional<TTestResult>& t) -> Json {
    if (!t) return nullptr;
    return {{"t", num(t->t)}, {"p", num(t->p)}, {"df", t->df}, {"degenerate", t->degenerate}};
  };
  return {{"sessions", m.n},
          {"agreements", m.agreements},
          {"walk_aways", m.walk_aways},
          {"forced_walk_aways", m.forced},
          {"walk_away_rate", fixed6(m.walk_away_rate())},
          {"avg_agent_score_all", fixed6(m.avg_agent_all())},
          {"avg_partner_score_all", fixed6(m.avg_partner_all())},
          {"avg_agent_score_agreement", fixed6(m.avg_agent_agreement())},
          {"avg_partner_score_agreement", fixed6(m.avg_partner_agreement())},
          {"pareto_rate_agent_offers", fixed6(ratio(m.pareto.agent_members, m.pareto.agent_offers))},
          {"pareto_rate_partner_offers",
           fixed6(ratio(m.pareto.partner_members, m.pareto.partner_offers))},
          {"non_escalation_violations", m.non_escalation_violations},
          {"conservation_violations", m.conservation_violations},
          {"t_all", t_json(m.t_all)},
          {"t_agreement", t_json(m.t_agreement)},
          {"cells", cells}};
}

ParetoReport pareto_report(std::span<const SessionRecord> records) {
  ParetoReport report;
  FrontierCache frontiers;
  for (const SessionRecord& r : records) {
    const ParetoSet& frontier = frontiers.get(r.scenario);
    for (const Json& e : r.events) {
      if (e.value("type", std::string()) != "offer") continue;
      OfferDistance d;
      d.session = r.index;
      d.turn = e.value("turn", 0);
      d.by = e.at("by").get<std::string>();
      d.scores = {rational_from_json(e.at("agent_score")),
                  rational_from_json(e.at("partner_score"))};
      d.member = frontier.contains_scores(d.scores);
      d.distance = frontier.distance(d.scores);
      add_offer(report.stats, frontier, d.by == "agent", d.scores);
      report.offers.push_back(std::move(d));
    }
  }
  return report;
}

void write_pareto_csv(std::ostream& os, const ParetoReport& report) {
  os << "session,turn,by,agent_score,partner_score,member,distance\n";
  for (const OfferDistance& d : report.offers) {
    os << d.session << ',' << d.turn << ',' << d.by << ',' << d.scores.agent.to_string() << ','
       << d.scores.partner.to_string() << ',' << (d.member ? 1 : 0) << ','
       << d.distance.to_string() << '\n';
  }
}

std::vector<AblationRow> run_ablation(const Scenario& base, const SimulationOptions& options,
                                      std::span<const Rational> alphas, std::size_t n,
                                      std::uint64_t master_seed) {
  std::vector<AblationRow> rows;
  for (const Rational& alpha : alphas) {
    if (alpha < Rational(0) || alpha > Rational(1)) {
      throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0,1]");
    }
    SimulationOptions o = options;
    o.engine.alpha = alpha;
    o.engine.beta = Rational(1) - alpha;
    const auto records = run_sessions(base, o, n, master_seed);
    rows.push_back({alpha, o.engine.beta, compute_metrics(records)});
  }
  return rows;
}

void write_ablation_csv(std::ostream& os, std::span<const AblationRow> rows) {
  os << "alpha,beta,avg_agent_all,avg_partner_all,avg_agent_agreement,avg_partner_agreement,"
        "walk_away_rate\n";
  for (const AblationRow& r : rows) {
    os << r.alpha.to_string() << ',' << r.beta.to_string() << ','
       << fixed6(r.metrics.avg_agent_all()) << ',' << fixed6(r.metrics.avg_partner_all()) << ','
       << fixed6(r.metrics.avg_agent_agreement()) << ','
       << fixed6(r.metrics.avg_partner_agreement()) << ',' << fixed6(r.metrics.walk_away_rate())
       << '\n';
  }
}

}  // namespace astra
