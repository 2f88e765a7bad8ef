// Copyright 2026 The vertattack Authors
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

#ifndef VERTATTACK_ERROR_H_
#define VERTATTACK_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vertattack {

// Every failure the library reports carries one of these codes. The CLI maps
// them onto exit codes; tests match on them.
enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kOversizeInput,
  kSpecOutOfRange,
  kDuplicateIndex,
  kMalformedGrid,
  kWordNotInSentence,
  kWrongCardinality,
  kKTooLarge,
  kClientError,
  kAuthError,
  kRateLimited,
  kTimeout,
  kMalformedResponse,
  kCassetteMiss,
  kNetworkDisabled,
  kSchemaMismatch,
  kBadLabel,
  kEmptyFile,
  kInsufficientLabel,
  kEmptyRun,
  kSupersetViolation,
  kCellAborted,
  kArtifactInvalid,
  kUnsupportedTokenizer,
  kFileNotFound,
  kConfigError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const { return code_; }
  // The message without the code prefix.
  const std::string& detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace vertattack

#endif  // VERTATTACK_ERROR_H_
