// Copyright 2026 The RGAE Authors
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

#include "rgae/error.h"

namespace rgae {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNonSymmetric: return "NonSymmetric";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kSingleView: return "SingleView";
    case ErrorCode::kFileError: return "FileError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyView: return "EmptyView";
    case ErrorCode::kNonScalarRoot: return "NonScalarRoot";
    case ErrorCode::kNumericalOverflow: return "NumericalOverflow";
    case ErrorCode::kDegenerateWeights: return "DegenerateWeights";
    case ErrorCode::kInvalidGamma: return "InvalidGamma";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kInsufficientNodes: return "InsufficientNodes";
  }
  return "Unknown";
}

}  // namespace rgae
