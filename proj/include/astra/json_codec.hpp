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

#ifndef ASTRA_JSON_CODEC_HPP_
#define ASTRA_JSON_CODEC_HPP_

#include <string>

#include "astra/domain.hpp"
#include "json.hpp"

namespace astra {

using Json = nlohmann::json;

// Accepts a JSON number or a string such as "12.4" or "7/18".
Rational rational_from_json(const Json& j);
// JSON number when the value survives a double round trip, else a string.
Json rational_to_json(const Rational& r);
// Always a string; used for scores on the wire.
inline Json exact_json(const Rational& r) { return r.to_string(); }

// Throws Error(kValidation) listing every schema or invariant violation.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& scenario);
Scenario load_scenario_file(const std::string& path);

// `{claims:{issue:number|string|bool}, counterpart?:{...}}`. Missing or
// mistyped claims throw Error(kValidation); range problems are left for
// validate_offer so they are reported uniformly.
Offer offer_from_json(const Json& j, const Scenario& scenario);
Json offer_to_json(const Offer& offer, const Scenario& scenario);
Json claims_to_json(const std::vector<int>& claims, const Scenario& scenario);

EngineConfig config_from_json(const Json& j, EngineConfig base = {});
Json config_to_json(const EngineConfig& config);

}  // namespace astra

#endif  // ASTRA_JSON_CODEC_HPP_
