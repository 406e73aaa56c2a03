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

#ifndef ASTRA_ERROR_HPP_
#define ASTRA_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace astra {

enum class ErrorCode {
  kInvalidArgument,
  kValidation,
  kNotFound,
  kConflict,
  kInfeasible,
  kSpaceTooLarge,
  kContradiction,
  kDegenerate,
  kIo,
  kAdapter,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the library. `details` carries item-level
// messages such as the individual violations of a rejected offer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::vector<std::string> details = {})
      : std::runtime_error(std::move(message)), code_(code), details_(std::move(details)) {}

  ErrorCode code() const { return code_; }
  const std::vector<std::string>& details() const { return details_; }

 private:
  ErrorCode code_;
  std::vector<std::string> details_;
};

}  // namespace astra

#endif  // ASTRA_ERROR_HPP_
