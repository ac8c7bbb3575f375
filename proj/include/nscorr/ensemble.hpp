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

// Monte Carlo realizations of C = A B^t B A^t / T^2.
//
// Every realization is addressed by (seed, stream_index). The stream owns a
// private engine seeded from both numbers, so a realization does not depend
// on which thread produced it or in what order.

#ifndef NSCORR_ENSEMBLE_HPP
#define NSCORR_ENSEMBLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nscorr/corr_models.hpp"

namespace nscorr {

struct EnsembleConfig {
  int n = 0;
  int m = 0;
  int t = 0;
  int n_samples = 1;
  std::uint64_t seed = 0;

  double kappa_n() const { return static_cast<double>(n) / t; }
  double kappa_m() const { return static_cast<double>(m) / t; }

  // n, m, t, n_samples positive; m >= n; t >= m.
  void validate() const;
};

struct RawBlocks {
  Matrix a;  // n x t
  Matrix b;  // m x t
};

struct DecorrelatedBlocks {
  Matrix a;  // xi_aa^{-1/2} times raw a
  Matrix b;  // xi_bb^{-1/2} times raw b
};

struct RealizationPair {
  Matrix c;                // n x n
  std::optional<Matrix> d;  // m x m, on request
};

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream_index);

class EnsembleSampler {
 public:
  EnsembleSampler(PartitionedCorrelation corr, EnsembleConfig cfg);

  const PartitionedCorrelation& correlation() const { return corr_; }
  const EnsembleConfig& config() const { return cfg_; }
  const Matrix& xi_sqrt() const { return xi_sqrt_; }

  /// Colored blocks of xi^{1/2} W with W standard normal (n+m) x t.
  RawBlocks sample_colored(std::uint64_t stream_index) const;

  /// A B^t / T computed by decorrelating the raw cross product
  /// xi_aa^{-1/2} (raw_a raw_b^t) xi_bb^{-1/2} / T.
  Matrix decorrelated_cross(std::uint64_t stream_index) const;

  RealizationPair realization(std::uint64_t stream_index, bool with_d) const;

  /// Ascending eigenvalues of C for one stream.
  std::vector<double> spectrum(std::uint64_t stream_index) const;

  /// Spectra for streams 0 .. n_samples-1, indexed by stream.
  std::vector<std::vector<double>> spectra(int threads = 0) const;

 private:
  PartitionedCorrelation corr_;
  EnsembleConfig cfg_;
  Matrix xi_sqrt_;
};

RawBlocks sample_colored(const PartitionedCorrelation& corr,
                         const EnsembleConfig& cfg,
                         std::uint64_t stream_index);

DecorrelatedBlocks decorrelate(const PartitionedCorrelation& corr,
                               const Matrix& raw_a, const Matrix& raw_b);

/// C = A B^t B A^t / t^2 (and D = B A^t A B^t / t^2), symmetrized.
RealizationPair build_c(const Matrix& a, const Matrix& b, int t, bool with_d);

/// Same as build_c from the already scaled cross matrix X = A B^t / t.
RealizationPair build_c_from_cross(const Matrix& cross, bool with_d);

// Binary-correlation averages over A (n x t) and B (m x t) with unit
// within-block covariance and cross covariance eta. <H>_k = tr(H)/k.
enum class Identity {
  kTraceAA,        // <A Phi A^t Psi>_n / t       = <Phi>_t <Psi>_n
  kTransposedAA,   // <A Phi A Psi>_n             = <Phi^t Psi>_n
  kSplitTraceAAt,  // <A Phi>_n <Psi A^t>_n       = <Psi Phi>_n / n
  kSplitTraceAA,   // <A Phi>_n <A Psi>_n         = <Psi^t Phi>_n / n
  kCrossAB,        // <A Phi B^t Psi>_n / t       = <Phi>_t <eta Psi>_n
  kCrossBA,        // <B Phi A^t Psi>_m / t       = <Phi>_t <eta^t Psi>_m
};

const char* identity_name(Identity which) noexcept;

struct MatrixShape {
  int rows = 0;
  int cols = 0;
};

MatrixShape identity_phi_shape(Identity which, int n, int m, int t);
MatrixShape identity_psi_shape(Identity which, int n, int m, int t);

struct IdentityCheck {
  double lhs = 0.0;  // Monte Carlo mean of the left side
  double rhs = 0.0;  // exact right side
  double standard_error = 0.0;
  double z_score = 0.0;  // |lhs - rhs| / standard_error
  int samples = 0;
};

IdentityCheck mc_identity_check(Identity which, const Matrix& phi,
                                const Matrix& psi,
                                const PartitionedCorrelation& corr,
                                const EnsembleConfig& cfg, int threads = 0);

/// Thread count: a positive request wins, then NSCORR_THREADS, then the
/// hardware concurrency.
int resolve_thread_count(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Exceptions
/// from the body are rethrown on the calling thread.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

/// One row per realization, eigenvalues ascending, comma separated.
void write_spectra_csv(const std::string& path,
                       const std::vector<std::vector<double>>& spectra);

/// Little-endian: uint64 rows, uint64 cols, then rows*cols float64 values.
void write_spectra_binary(const std::string& path,
                          const std::vector<std::vector<double>>& spectra);

}  // namespace nscorr

#endif  // NSCORR_ENSEMBLE_HPP
