// Copyright 2026 The kitsfuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KITSFUSE_ERROR_HPP_
#define KITSFUSE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace kitsfuse {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidGeometry,
  kGeometryMismatch,
  kInvalidLabel,
  kNonFiniteValue,
  // File format errors.
  kMalformedHeader,
  kBigEndian,
  kUnsupportedDatatype,
  kTruncatedPayload,
  kLabelOutOfRange,
  kMissingKey,
  kSizeMismatch,
  kIo,
  // Statistics.
  kNoForeground,
  kDegenerateStats,
  kEmptyInput,
  kConfig,
};

/// Stable machine-readable name, e.g. "malformed_header".
std::string_view error_code_name(ErrorCode code);

/// The single exception type thrown by the library. Callers dispatch on
/// code(); what() carries a human-readable description.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kitsfuse

#endif  // KITSFUSE_ERROR_HPP_
