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

#include "astra/adapter.hpp"

#include "astra/error.hpp"
#include "httplib.h"

namespace astra {

HttpAdapterConfig parse_adapter_url(const std::string& url) {
  const std::string scheme = "http://";
  if (url.rfind(scheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "adapter URL must start with http://");
  }
  std::string rest = url.substr(scheme.size());
  HttpAdapterConfig c;
  auto slash = rest.find('/');
  if (slash != std::string::npos) {
    c.path = rest.substr(slash);
    rest = rest.substr(0, slash);
  }
  auto colon = rest.rfind(':');
  if (colon == std::string::npos) {
    c.host = rest;
    c.port = 80;
  } else {
    c.host = rest.substr(0, colon);
    try {
      c.port = std::stoi(rest.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in adapter URL " + url);
    }
  }
  if (c.host.empty()) throw Error(ErrorCode::kInvalidArgument, "adapter URL has no host");
  return c;
}

Json HttpModelAdapter::call(const Json& request) {
  httplib::Client client(config_.host, config_.port);
  const auto timeout_s = config_.timeout_ms / 1000;
  const auto timeout_us = (config_.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(timeout_s, timeout_us);
  client.set_read_timeout(timeout_s, timeout_us);
  client.set_write_timeout(timeout_s, timeout_us);

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= config_.retries; ++attempt) {
    auto res = client.Post(config_.path, request.dump(), "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    try {
      Json reply = Json::parse(res->body);
      if (!reply.is_object()) throw Error(ErrorCode::kAdapter, "adapter reply is not an object");
      return reply;
    } catch (const Json::parse_error& e) {
      last_error = std::string("malformed reply: ") + e.what();
    }
  }
  throw Error(ErrorCode::kAdapter, "model adapter call failed: " + last_error);
}

}  // namespace astra
