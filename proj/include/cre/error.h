// Copyright 2026 The CRE Simulator Authors
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

#ifndef CRE_ERROR_H_
#define CRE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cre {

enum class ErrorCode {
  kNonPositiveParameter,
  kInvalidFraction,
  kDegenerateTopology,
  kUnknownKey,
  kParse,
  kEmptyParticipation,
  kZeroRate,
  kDegenerateStep,
  kStepSizeTooLarge,
  kDomainError,
  kInfeasibleLatency,
  kInfeasiblePower,
  kInfeasible,
  kInvalidDegree,
  kTooManyClients,
  kNonFiniteLoss,
  kIo,
  kUsage,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every recoverable failure in the library is reported as a cre::Error
// carrying a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cre

#endif  // CRE_ERROR_H_
