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


#include <chrono>
#include <mutex>
#include <thread>

#include "httplib.h"

#include "astra/coach.hpp"

namespace astra {

struct CoachServer::Impl {
  CoachService& service;
  httplib::Server server;
  std::mutex mu;
  bool stopped = false;
  bool listening = false;

  explicit Impl(CoachService& s) : service(s) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
      const ApiResponse r = service.handle(req.method, req.path, req.body);
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Get(R"(/.*)", forward);
    server.Post(R"(/.*)", forward);
    server.Put(R"(/.*)", forward);
    server.Delete(R"(/.*)", forward);
  }
};

CoachServer::CoachServer(CoachService& service) : impl_(std::make_unique<Impl>(service)) {}

CoachServer::~CoachServer() { stop(); }

int CoachServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool CoachServer::listen() {
  {
    std::lock_guard lock(impl_->mu);
    if (impl_->stopped) return true;
    impl_->listening = true;
  }
  const bool ok = impl_->server.listen_after_bind();
  std::lock_guard lock(impl_->mu);
  impl_->listening = false;
  return ok;
}

// A stop may arrive before the listener thread is running; keep nudging
// until listen() has returned.
void CoachServer::stop() {
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopped = true;
  }
  for (;;) {
    {
      std::lock_guard lock(impl_->mu);
      if (!impl_->listening) return;
    }
    if (impl_->server.is_running()) impl_->server.stop();
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
}

}  // namespace astra
