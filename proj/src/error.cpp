// Copyright 2026 The nscorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nscorr/error.hpp"

namespace nscorr {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::kModelNotPositiveDefinite: return "ModelNotPositiveDefinite";
    case ErrorCode::kNonSymmetricInput: return "NonSymmetricInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::kBothRootsDiverged: return "BothRootsDiverged";
    case ErrorCode::kMaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::kBranchSelectionAmbiguous: return "BranchSelectionAmbiguous";
    case ErrorCode::kDisjointSupports: return "DisjointSupports";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace nscorr
