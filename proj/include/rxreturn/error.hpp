// Copyright 2026 The rxreturn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RXRETURN_ERROR_HPP_
#define RXRETURN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rxreturn {

enum class ErrorCode {
  MissingFile,
  MissingColumn,
  UnknownId,
  NegativeValue,
  UnitMismatch,
  DuplicateId,
  InvalidValue,
  MalformedModel,
  TooManySites,
  NumericalBreakdown,
  DualUnavailable,
  NodeLimitExceeded,
  Infeasible,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingFile: return "MissingFile";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::UnknownId: return "UnknownId";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::MalformedModel: return "MalformedModel";
    case ErrorCode::TooManySites: return "TooManySites";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::DualUnavailable: return "DualUnavailable";
    case ErrorCode::NodeLimitExceeded: return "NodeLimitExceeded";
    case ErrorCode::Infeasible: return "Infeasible";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace rxreturn

#endif  // RXRETURN_ERROR_HPP_
