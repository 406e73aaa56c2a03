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

// Port to an external language-model service. The engine never needs one;
// when configured it replaces the deterministic virtual-partner surrogate,
// the tactic cascade and the scripted persona policy.

#ifndef ASTRA_ADAPTER_HPP_
#define ASTRA_ADAPTER_HPP_

#include <string>

#include "astra/json_codec.hpp"

namespace astra {

class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  // One structured request/response exchange. Throws Error(kAdapter) on
  // transport failure or a malformed reply.
  virtual Json call(const Json& request) = 0;
};

struct HttpAdapterConfig {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string path = "/v1/negotiation";
  int timeout_ms = 5000;
  int retries = 2;
};

// Parses "http://host:port/path"; throws Error(kInvalidArgument).
HttpAdapterConfig parse_adapter_url(const std::string& url);

// POSTs the request as JSON and expects a JSON object back.
class HttpModelAdapter : public ModelAdapter {
 public:
  explicit HttpModelAdapter(HttpAdapterConfig config) : config_(std::move(config)) {}
  Json call(const Json& request) override;

  const HttpAdapterConfig& config() const { return config_; }

 private:
  HttpAdapterConfig config_;
};

}  // namespace astra

#endif  // ASTRA_ADAPTER_HPP_
