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

#include "vertattack/error.h"

namespace vertattack {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kOversizeInput: return "OversizeInput";
    case ErrorCode::kSpecOutOfRange: return "SpecOutOfRange";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kMalformedGrid: return "MalformedGrid";
    case ErrorCode::kWordNotInSentence: return "WordNotInSentence";
    case ErrorCode::kWrongCardinality: return "WrongCardinality";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kClientError: return "ClientError";
    case ErrorCode::kAuthError: return "AuthError";
    case ErrorCode::kRateLimited: return "RateLimited";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kCassetteMiss: return "CassetteMiss";
    case ErrorCode::kNetworkDisabled: return "NetworkDisabled";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kInsufficientLabel: return "InsufficientLabel";
    case ErrorCode::kEmptyRun: return "EmptyRun";
    case ErrorCode::kSupersetViolation: return "SupersetViolation";
    case ErrorCode::kCellAborted: return "CellAborted";
    case ErrorCode::kArtifactInvalid: return "ArtifactInvalid";
    case ErrorCode::kUnsupportedTokenizer: return "UnsupportedTokenizer";
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace vertattack
