/*
 * Copyright 2026 The ASTRA Negotiation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the negotiation engine, simulator and coaching service.
 *
 * Every function returns an astra_status. On failure the message of the
 * calling thread's last error is available from astra_last_error() until the
 * next call on that thread. Strings returned through char** out-parameters
 * are owned by the caller and released with astra_string_free().
 */

#ifndef ASTRA_ASTRA_H_
#define ASTRA_ASTRA_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(ASTRA_BUILDING_SHARED)
#define ASTRA_API __attribute__((visibility("default")))
#else
#define ASTRA_API
#endif

typedef enum astra_status {
  ASTRA_OK = 0,
  ASTRA_E_INVALID_ARGUMENT = 1,
  ASTRA_E_VALIDATION = 2,
  ASTRA_E_NOT_FOUND = 3,
  ASTRA_E_CONFLICT = 4,
  ASTRA_E_INFEASIBLE = 5,
  ASTRA_E_SPACE_TOO_LARGE = 6,
  ASTRA_E_CONTRADICTION = 7,
  ASTRA_E_DEGENERATE = 8,
  ASTRA_E_IO = 9,
  ASTRA_E_ADAPTER = 10,
  ASTRA_E_INTERNAL = 11
} astra_status;

typedef struct astra_scenario astra_scenario;
typedef struct astra_coach astra_coach;
typedef struct astra_server astra_server;

ASTRA_API const char* astra_version(void);
ASTRA_API const char* astra_status_name(astra_status status);
ASTRA_API const char* astra_last_error(void);
ASTRA_API void astra_string_free(char* s);

ASTRA_API astra_status astra_scenario_load(const char* path, astra_scenario** out);
ASTRA_API astra_status astra_scenario_parse(const char* json, astra_scenario** out);
ASTRA_API void astra_scenario_free(astra_scenario* scenario);
/* Normalized scenario JSON. */
ASTRA_API astra_status astra_scenario_json(const astra_scenario* scenario, char** out);

/* Every allocation with both scores and a frontier membership flag. */
ASTRA_API astra_status astra_pareto_csv(const astra_scenario* scenario, char** out_csv);

/*
 * options_json (all keys optional):
 *   {"partner": "base|greedy|fair|mix", "n": 100, "seed": 7,
 *    "mix": "auto|permuted|fixed", "threads": 1, "config": {...engine config...},
 *    "persona": {...persona parameters...}, "adapter_url": "http://host:port/path"}
 * out_jsonl receives the transcript, out_metrics_json the batch metrics.
 * Either out-parameter may be NULL.
 */
ASTRA_API astra_status astra_simulate(const astra_scenario* scenario, const char* options_json,
                                      char** out_jsonl, char** out_metrics_json);

/* Metrics of a transcript as long-format CSV and as JSON. */
ASTRA_API astra_status astra_analyze(const char* jsonl, char** out_metrics_csv,
                                     char** out_metrics_json);

/* Frontier membership and distance of every offer in a transcript. */
ASTRA_API astra_status astra_pareto_report(const char* jsonl, char** out_csv);

/*
 * options_json as for astra_simulate plus "alphas": [0, 0.35, 1] (numbers or
 * exact decimal strings). beta is 1 - alpha for every row.
 */
ASTRA_API astra_status astra_ablate(const astra_scenario* scenario, const char* options_json,
                                    char** out_csv);

/* options_json: {"journal_dir": "...", "adapter_url": "..."}, may be NULL. */
ASTRA_API astra_status astra_coach_create(const char* options_json, astra_coach** out);
ASTRA_API void astra_coach_free(astra_coach* coach);

/*
 * Runs one API request in-process. http_status receives the HTTP status the
 * server would send and out_body the JSON response body. Returns ASTRA_OK
 * whenever a response was produced, including error responses.
 */
ASTRA_API astra_status astra_coach_request(astra_coach* coach, const char* method,
                                           const char* path, const char* body, int* http_status,
                                           char** out_body);

/* port 0 picks a free port; bound_port receives the port actually used. */
ASTRA_API astra_status astra_server_create(astra_coach* coach, const char* host, int port,
                                           astra_server** out, int* bound_port);
/* Blocks until astra_server_stop is called from another thread. */
ASTRA_API astra_status astra_server_listen(astra_server* server);
ASTRA_API void astra_server_stop(astra_server* server);
ASTRA_API void astra_server_free(astra_server* server);

#ifdef __cplusplus
}
#endif

#endif /* ASTRA_ASTRA_H_ */
