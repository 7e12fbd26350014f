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

#ifndef RGAE_ERROR_H_
#define RGAE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace rgae {

enum class ErrorCode {
  kShapeMismatch,
  kNonSymmetric,
  kIndexOutOfRange,
  kSingleView,
  kFileError,
  kParseError,
  kEmptyView,
  kNonScalarRoot,
  kNumericalOverflow,
  kDegenerateWeights,
  kInvalidGamma,
  kConfigError,
  kLengthMismatch,
  kInsufficientNodes,
};

// Machine-parsable category name, e.g. "ShapeMismatch".
std::string_view ErrorCodeName(ErrorCode code);

// All failures in the library are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rgae

#endif  // RGAE_ERROR_H_
