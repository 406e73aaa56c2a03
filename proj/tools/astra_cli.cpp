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

// Command-line front end. Talks to the engine only through astra.h.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "astra/astra.h"

namespace {

using Json = nlohmann::json;

struct Failure {
  int code;
};

void check(astra_status s, const std::string& what) {
  if (s == ASTRA_OK) return;
  std::cerr << "astra: " << what << ": " << astra_status_name(s) << ": " << astra_last_error()
            << "\n";
  throw Failure{s == ASTRA_E_IO ? 3 : 2};
}

struct CString {
  char* p = nullptr;
  ~CString() { astra_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct ScenarioHandle {
  astra_scenario* p = nullptr;
  ~ScenarioHandle() { astra_scenario_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "astra: cannot read " << path << "\n";
    throw Failure{3};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "astra: cannot write " << path << "\n";
    throw Failure{3};
  }
}

void load(ScenarioHandle& h, const std::string& path) {
  check(astra_scenario_load(path.c_str(), &h.p), "loading " + path);
}

struct BatchFlags {
  std::string scenario;
  std::string partner = "base";
  std::string mix = "auto";
  std::size_t n = 100;
  std::uint64_t seed = 7;
  int threads = 1;
  std::string alpha, beta, config, adapter_url;

  void add(CLI::App* app) {
    app->add_option("--scenario", scenario, "Scenario JSON file")->required();
    app->add_option("--partner", partner, "base, greedy, fair or mix")
        ->check(CLI::IsMember({"base", "greedy", "fair", "mix"}));
    app->add_option("--mix", mix, "auto, permuted or fixed")
        ->check(CLI::IsMember({"auto", "permuted", "fixed"}));
    app->add_option("--n", n, "Sessions");
    app->add_option("--seed", seed, "Master seed");
    app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app->add_option("--alpha", alpha, "PAP weight (exact decimal)");
    app->add_option("--beta", beta, "SA weight (exact decimal)");
    app->add_option("--config", config, "Engine config JSON file");
    app->add_option("--adapter-url", adapter_url, "External model endpoint");
  }

  Json to_json() const {
    Json cfg = config.empty() ? Json::object() : Json::parse(read_file(config));
    if (!alpha.empty()) cfg["alpha"] = alpha;
    if (!beta.empty()) cfg["beta"] = beta;
    Json j = {{"partner", partner}, {"mix", mix},       {"n", n},
              {"seed", seed},       {"threads", threads}, {"config", cfg}};
    if (!adapter_url.empty()) j["adapter_url"] = adapter_url;
    return j;
  }
};

int run_serve(const std::string& host, int port, const std::string& journal,
              const std::string& adapter_url) {
  Json opts = Json::object();
  if (!journal.empty()) opts["journal_dir"] = journal;
  if (!adapter_url.empty()) opts["adapter_url"] = adapter_url;
  astra_coach* coach = nullptr;
  check(astra_coach_create(opts.dump().c_str(), &coach), "starting coach service");
  std::unique_ptr<astra_coach, void (*)(astra_coach*)> coach_guard(coach, astra_coach_free);

  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  astra_server* server = nullptr;
  int bound = 0;
  check(astra_server_create(coach, host.c_str(), port, &server, &bound), "binding");
  std::unique_ptr<astra_server, void (*)(astra_server*)> server_guard(server, astra_server_free);
  std::cerr << "astra: serving on http://" << host << ":" << bound << "\n";

  astra_status listen_status = ASTRA_OK;
  std::thread listener([&] { listen_status = astra_server_listen(server); });
  int sig = 0;
  sigwait(&set, &sig);
  astra_server_stop(server);
  listener.join();
  check(listen_status, "serving");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-issue negotiation engine, simulator and coaching service"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(astra_version()));

  std::string scenario_path, out_path;
  auto* pareto = app.add_subcommand("pareto", "Enumerate allocations with frontier membership");
  pareto->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  pareto->add_option("--out", out_path, "CSV output (default stdout)");

  BatchFlags sim_flags;
  std::string metrics_path;
  auto* simulate = app.add_subcommand("simulate", "Run self-play sessions against a persona");
  sim_flags.add(simulate);
  simulate->add_option("--out", out_path, "Transcript JSONL (default stdout)");
  simulate->add_option("--metrics", metrics_path, "Also write metrics JSON here");

  std::string in_path, analyze_json, analyze_pareto;
  auto* analyze = app.add_subcommand("analyze", "Metrics from a transcript");
  analyze->add_option("--in", in_path, "Transcript JSONL")->required();
  analyze->add_option("--out", out_path, "Metrics CSV (default stdout)");
  analyze->add_option("--json", analyze_json, "Also write metrics JSON here");
  analyze->add_option("--pareto", analyze_pareto, "Also write per-offer frontier CSV here");

  BatchFlags ab_flags;
  ab_flags.partner = "mix";
  ab_flags.n = 200;
  std::vector<std::string> grid = {"0", "0.15", "0.35", "0.5", "0.75", "1"};
  auto* ablate = app.add_subcommand("ablate", "Sweep alpha with beta = 1 - alpha");
  ab_flags.add(ablate);
  ablate->add_option("--alpha-grid", grid, "Comma-separated alphas")->delimiter(',');
  ablate->add_option("--out", out_path, "CSV output (default stdout)");

  std::string host = "127.0.0.1", journal, serve_adapter;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Run the coaching HTTP service");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--journal", journal, "Directory for append-only session journals");
  serve->add_option("--adapter-url", serve_adapter, "External model endpoint");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pareto) {
      ScenarioHandle s;
      load(s, scenario_path);
      CString csv;
      check(astra_pareto_csv(s.p, &csv.p), "pareto");
      emit(out_path, csv.str());
    } else if (*simulate) {
      ScenarioHandle s;
      load(s, sim_flags.scenario);
      CString jsonl, metrics;
      check(astra_simulate(s.p, sim_flags.to_json().dump().c_str(), &jsonl.p,
                           metrics_path.empty() ? nullptr : &metrics.p),
            "simulate");
      emit(out_path, jsonl.str());
      if (!metrics_path.empty()) emit(metrics_path, metrics.str() + "\n");
    } else if (*analyze) {
      const std::string text = read_file(in_path);
      CString csv, json;
      check(astra_analyze(text.c_str(), &csv.p, analyze_json.empty() ? nullptr : &json.p),
            "analyze");
      emit(out_path, csv.str());
      if (!analyze_json.empty()) emit(analyze_json, json.str() + "\n");
      if (!analyze_pareto.empty()) {
        CString pcsv;
        check(astra_pareto_report(text.c_str(), &pcsv.p), "pareto report");
        emit(analyze_pareto, pcsv.str());
      }
    } else if (*ablate) {
      ScenarioHandle s;
      load(s, ab_flags.scenario);
      Json opts = ab_flags.to_json();
      opts["alphas"] = grid;
      CString csv;
      check(astra_ablate(s.p, opts.dump().c_str(), &csv.p), "ablate");
      emit(out_path, csv.str());
    } else if (*serve) {
      return run_serve(host, port, journal, serve_adapter);
    }
  } catch (const Failure& f) {
    return f.code;
  } catch (const Json::exception& e) {
    std::cerr << "astra: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
