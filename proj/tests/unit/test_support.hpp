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

#ifndef ASTRA_TESTS_TEST_SUPPORT_HPP_
#define ASTRA_TESTS_TEST_SUPPORT_HPP_

#include <string>

#include "astra/json_codec.hpp"

namespace astra::testing {

inline Scenario load(const std::string& name) {
  return load_scenario_file(std::string(ASTRA_SCENARIO_DIR) + "/" + name + ".json");
}

inline Scenario integrative() { return load("casino_integrative"); }
inline Scenario distributive() { return load("casino_distributive"); }
inline Scenario research() { return load("research_allocation"); }

inline Rational r(const char* text) { return Rational::parse(text); }

}  // namespace astra::testing

#endif  // ASTRA_TESTS_TEST_SUPPORT_HPP_
