//
// Copyright 2026 The joinrisk Authors
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
//

#ifndef JOINRISK_ERROR_HPP_
#define JOINRISK_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace joinrisk {

// Machine-readable failure codes. The HTTP layer maps them onto status codes
// and echoes the name in the response body.
enum class ErrorCode {
  kInvalidAttributeName,
  kParseError,
  kCapExceeded,
  kEmptyTable,
  kNetworkError,
  kMalformedResponse,
  kZeroVector,
  kDegenerateInput,
  kInsufficientClusters,
  kNoPrivacyAttributes,
  kEmptyVulnerableSet,
  kInvalidCounts,
  kNoSharedAttributes,
  kInvalidKey,
  kEmptyKey,
  kNoFiniteValues,
  kTooFewMatches,
  kCancelled,
  kInvalidArgument,
  kNotFound,
  kStale,
  kIoError,
};

constexpr std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidAttributeName: return "InvalidAttributeName";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kEmptyTable: return "EmptyTable";
    case ErrorCode::kNetworkError: return "NetworkError";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kInsufficientClusters: return "InsufficientClusters";
    case ErrorCode::kNoPrivacyAttributes: return "NoPrivacyAttributes";
    case ErrorCode::kEmptyVulnerableSet: return "EmptyVulnerableSet";
    case ErrorCode::kInvalidCounts: return "InvalidCounts";
    case ErrorCode::kNoSharedAttributes: return "NoSharedAttributes";
    case ErrorCode::kInvalidKey: return "InvalidKey";
    case ErrorCode::kEmptyKey: return "EmptyKey";
    case ErrorCode::kNoFiniteValues: return "NoFiniteValues";
    case ErrorCode::kTooFewMatches: return "TooFewMatches";
    case ErrorCode::kCancelled: return "Cancelled";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kStale: return "Stale";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace joinrisk

#endif  // JOINRISK_ERROR_HPP_
