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

#include "kitsfuse/error.hpp"

namespace kitsfuse {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInvalidGeometry: return "invalid_geometry";
    case ErrorCode::kGeometryMismatch: return "geometry_mismatch";
    case ErrorCode::kInvalidLabel: return "invalid_label";
    case ErrorCode::kNonFiniteValue: return "non_finite_value";
    case ErrorCode::kMalformedHeader: return "malformed_header";
    case ErrorCode::kBigEndian: return "big_endian";
    case ErrorCode::kUnsupportedDatatype: return "unsupported_datatype";
    case ErrorCode::kTruncatedPayload: return "truncated_payload";
    case ErrorCode::kLabelOutOfRange: return "label_out_of_range";
    case ErrorCode::kMissingKey: return "missing_key";
    case ErrorCode::kSizeMismatch: return "size_mismatch";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kNoForeground: return "no_foreground";
    case ErrorCode::kDegenerateStats: return "degenerate_stats";
    case ErrorCode::kEmptyInput: return "empty_input";
    case ErrorCode::kConfig: return "config";
  }
  return "unknown";
}

}  // namespace kitsfuse
