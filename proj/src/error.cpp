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

#include "qmetro/error.hpp"

namespace qmetro {

std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::NonHermitianInput:
            return "NonHermitianInput";
        case ErrorCode::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorCode::SingularMatrix:
            return "SingularMatrix";
        case ErrorCode::DimensionOverflow:
            return "DimensionOverflow";
        case ErrorCode::BasisUnsupported:
            return "BasisUnsupported";
        case ErrorCode::NoStructure:
            return "NoStructure";
        case ErrorCode::UnbalancedSpectrum:
            return "UnbalancedSpectrum";
        case ErrorCode::NegativeTarget:
            return "NegativeTarget";
        case ErrorCode::NonIntegerTargets:
            return "NonIntegerTargets";
        case ErrorCode::InvalidPartition:
            return "InvalidPartition";
        case ErrorCode::InvalidP:
            return "InvalidP";
        case ErrorCode::InvalidArgs:
            return "InvalidArgs";
        case ErrorCode::ZeroInformation:
            return "ZeroInformation";
        case ErrorCode::NotOrthogonal:
            return "NotOrthogonal";
        case ErrorCode::SingularTransformedFisher:
            return "SingularTransformedFisher";
        case ErrorCode::FlatLikelihood:
            return "FlatLikelihood";
        case ErrorCode::ParseError:
            return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {
}

}  // namespace qmetro
