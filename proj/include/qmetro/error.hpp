// Copyright 2026 The qmetro Authors
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

#ifndef QMETRO_ERROR_HPP
#define QMETRO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmetro {

enum class ErrorCode {
    NonHermitianInput,
    DimensionMismatch,
    SingularMatrix,
    DimensionOverflow,
    BasisUnsupported,
    NoStructure,
    UnbalancedSpectrum,
    NegativeTarget,
    NonIntegerTargets,
    InvalidPartition,
    InvalidP,
    InvalidArgs,
    ZeroInformation,
    NotOrthogonal,
    SingularTransformedFisher,
    FlatLikelihood,
    ParseError,
};

std::string_view error_code_name(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure class.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace qmetro

#endif
