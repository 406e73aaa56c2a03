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

// Interactive coaching sessions: advise previews a move without touching
// committed state, commit records what was actually played.

#ifndef ASTRA_COACH_HPP_
#define ASTRA_COACH_HPP_

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "astra/error.hpp"
#include "astra/session.hpp"

namespace astra {

struct CoachOptions {
  std::optional<std::string> journal_dir;  // one append-only JSONL file per session
  std::shared_ptr<ModelAdapter> adapter;
};

struct ApiResponse {
  int status = 200;
  Json body;
};

int http_status(ErrorCode code);
Json error_envelope(ErrorCode code, const std::string& message,
                    const std::vector<std::string>& details = {});

class CoachService {
 public:
  // Restores every session found in the journal directory.
  explicit CoachService(CoachOptions options = {});
  ~CoachService();

  CoachService(const CoachService&) = delete;
  CoachService& operator=(const CoachService&) = delete;

  // Body: {scenario, config?}. Returns {session_id, config, scenario_id}.
  Json create_session(const Json& body);
  // Body: a partner event, possibly empty.
  Json advise(const std::string& id, const Json& body) const;
  // Body: {partner_event?, offer?: {claims} | mode?}.
  Json commit(const std::string& id, const Json& body);
  Json report(const std::string& id) const;

  // Live state and the state obtained by replaying the recorded commands.
  Json state(const std::string& id) const;
  Json rebuild_state(const std::string& id) const;

  std::vector<std::string> session_ids() const;

  // Dispatches an HTTP request. Never throws.
  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body);

 private:
  struct Entry;
  std::shared_ptr<Entry> find(const std::string& id) const;
  void restore_journals();

  CoachOptions options_;
  mutable std::shared_mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  unsigned long next_id_ = 1;
};

// HTTP front end over a CoachService.
class CoachServer {
 public:
  explicit CoachServer(CoachService& service);
  ~CoachServer();

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace astra

#endif  // ASTRA_COACH_HPP_
