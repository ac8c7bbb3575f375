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

#ifndef NSCORR_ERROR_HPP
#define NSCORR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace nscorr {

// Values are mirrored one-to-one by nscorr_status in nscorr.h.
enum class ErrorCode {
  kOk = 0,
  kParameterOutOfRange = 1,
  kModelNotPositiveDefinite = 2,
  kNonSymmetricInput = 3,
  kDimensionMismatch = 4,
  kConvergenceFailure = 5,
  kEmptyInput = 6,
  kDegenerateDenominator = 7,
  kBothRootsDiverged = 8,
  kMaxIterationsExceeded = 9,
  kBranchSelectionAmbiguous = 10,
  kDisjointSupports = 11,
  kConfigInvalid = 12,
  kIoError = 13,
  kInternal = 14,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when an assembled correlation matrix fails the strict
/// positive-definiteness requirement. Carries the offending eigenvalue.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(const std::string& what, double min_eigenvalue)
      : Error(ErrorCode::kModelNotPositiveDefinite, what),
        min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace nscorr

#endif  // NSCORR_ERROR_HPP
