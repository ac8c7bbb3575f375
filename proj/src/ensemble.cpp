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

#include "nscorr/ensemble.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "nscorr/error.hpp"
#include "nscorr/format.hpp"
#include "nscorr/linalg.hpp"
#include "nscorr/spectra.hpp"

namespace nscorr {

namespace {

void require_shape(const Matrix& x, int rows, int cols, const char* what) {
  if (x.rows() != rows || x.cols() != cols) {
    std::ostringstream msg;
    msg << what << " is " << x.rows() << "x" << x.cols() << ", expected "
        << rows << "x" << cols;
    fail(ErrorCode::kDimensionMismatch, msg.str());
  }
}

double trace_of_product(const Matrix& x, const Matrix& y) {
  // tr(X Y) without forming the product.
  return (x.array() * y.transpose().array()).sum();
}

}  // namespace

void EnsembleConfig::validate() const {
  if (n < 1 || m < 1 || t < 1) {
    fail(ErrorCode::kParameterOutOfRange, "n, m and t must be positive");
  }
  if (n_samples < 1) {
    fail(ErrorCode::kParameterOutOfRange, "n_samples must be positive");
  }
  if (m < n) {
    fail(ErrorCode::kParameterOutOfRange, "ensemble requires m >= n");
  }
  if (t < m) {
    fail(ErrorCode::kParameterOutOfRange, "ensemble requires t >= m");
  }
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32),
                    0x6e73636fu};
  return std::mt19937_64(seq);
}

EnsembleSampler::EnsembleSampler(PartitionedCorrelation corr,
                                 EnsembleConfig cfg)
    : corr_(std::move(corr)), cfg_(cfg) {
  cfg_.validate();
  if (corr_.n() != cfg_.n || corr_.m() != cfg_.m) {
    fail(ErrorCode::kDimensionMismatch,
         "correlation model dimensions do not match the ensemble config");
  }
  xi_sqrt_ = symmetric_power(corr_.assemble(), 0.5);
}

RawBlocks EnsembleSampler::sample_colored(std::uint64_t stream_index) const {
  const int rows = cfg_.n + cfg_.m;
  auto engine = stream_engine(cfg_.seed, stream_index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix white(rows, cfg_.t);
  double* data = white.data();
  for (Eigen::Index i = 0; i < white.size(); ++i) data[i] = normal(engine);
  Matrix colored = xi_sqrt_ * white;
  return {colored.topRows(cfg_.n), colored.bottomRows(cfg_.m)};
}

Matrix EnsembleSampler::decorrelated_cross(std::uint64_t stream_index) const {
  const RawBlocks raw = sample_colored(stream_index);
  const Matrix raw_cross = raw.a * raw.b.transpose();
  return corr_.xi_aa_inv_sqrt() * raw_cross * corr_.xi_bb_inv_sqrt() /
         static_cast<double>(cfg_.t);
}

RealizationPair EnsembleSampler::realization(std::uint64_t stream_index,
                                             bool with_d) const {
  return build_c_from_cross(decorrelated_cross(stream_index), with_d);
}

std::vector<double> EnsembleSampler::spectrum(std::uint64_t stream_index) const {
  return eigenvalues_sym(realization(stream_index, false).c);
}

std::vector<std::vector<double>> EnsembleSampler::spectra(int threads) const {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(cfg_.n_samples));
  parallel_for(out.size(), threads,
               [&](std::size_t i) { out[i] = spectrum(i); });
  return out;
}

RawBlocks sample_colored(const PartitionedCorrelation& corr,
                         const EnsembleConfig& cfg,
                         std::uint64_t stream_index) {
  return EnsembleSampler(corr, cfg).sample_colored(stream_index);
}

DecorrelatedBlocks decorrelate(const PartitionedCorrelation& corr,
                               const Matrix& raw_a, const Matrix& raw_b) {
  if (raw_a.cols() != raw_b.cols()) {
    fail(ErrorCode::kDimensionMismatch, "raw blocks differ in length t");
  }
  require_shape(raw_a, corr.n(), static_cast<int>(raw_a.cols()), "raw A block");
  require_shape(raw_b, corr.m(), static_cast<int>(raw_b.cols()), "raw B block");
  return {corr.xi_aa_inv_sqrt() * raw_a, corr.xi_bb_inv_sqrt() * raw_b};
}

RealizationPair build_c(const Matrix& a, const Matrix& b, int t, bool with_d) {
  if (t < 1 || a.cols() != t || b.cols() != t) {
    fail(ErrorCode::kDimensionMismatch, "A and B must both have t columns");
  }
  return build_c_from_cross(a * b.transpose() / static_cast<double>(t), with_d);
}

RealizationPair build_c_from_cross(const Matrix& cross, bool with_d) {
  RealizationPair out;
  out.c = symmetrized(cross * cross.transpose());
  if (with_d) out.d = symmetrized(cross.transpose() * cross);
  return out;
}

const char* identity_name(Identity which) noexcept {
  switch (which) {
    case Identity::kTraceAA: return "TraceAA";
    case Identity::kTransposedAA: return "TransposedAA";
    case Identity::kSplitTraceAAt: return "SplitTraceAAt";
    case Identity::kSplitTraceAA: return "SplitTraceAA";
    case Identity::kCrossAB: return "CrossAB";
    case Identity::kCrossBA: return "CrossBA";
  }
  return "?";
}

MatrixShape identity_phi_shape(Identity which, int n, int m, int t) {
  (void)m;
  switch (which) {
    case Identity::kTraceAA:
    case Identity::kCrossAB:
    case Identity::kCrossBA:
      return {t, t};
    case Identity::kTransposedAA:
    case Identity::kSplitTraceAAt:
    case Identity::kSplitTraceAA:
      return {t, n};
  }
  return {};
}

MatrixShape identity_psi_shape(Identity which, int n, int m, int t) {
  switch (which) {
    case Identity::kTraceAA: return {n, n};
    case Identity::kTransposedAA: return {t, n};
    case Identity::kSplitTraceAAt: return {n, t};
    case Identity::kSplitTraceAA: return {t, n};
    case Identity::kCrossAB: return {m, n};
    case Identity::kCrossBA: return {n, m};
  }
  return {};
}

IdentityCheck mc_identity_check(Identity which, const Matrix& phi,
                                const Matrix& psi,
                                const PartitionedCorrelation& corr,
                                const EnsembleConfig& cfg, int threads) {
  const int n = cfg.n;
  const int m = cfg.m;
  const int t = cfg.t;
  const auto phi_shape = identity_phi_shape(which, n, m, t);
  const auto psi_shape = identity_psi_shape(which, n, m, t);
  require_shape(phi, phi_shape.rows, phi_shape.cols, "phi");
  require_shape(psi, psi_shape.rows, psi_shape.cols, "psi");

  const EnsembleSampler sampler(corr, cfg);
  const Matrix& eta = corr.eta();
  const double dn = n, dm = m, dt = t;

  double rhs = 0.0;
  switch (which) {
    case Identity::kTraceAA:
      rhs = phi.trace() / dt * psi.trace() / dn;
      break;
    case Identity::kTransposedAA:
      rhs = trace_of_product(phi.transpose(), psi) / dn;
      break;
    case Identity::kSplitTraceAAt:
      rhs = trace_of_product(psi, phi) / dn / dn;
      break;
    case Identity::kSplitTraceAA:
      rhs = trace_of_product(psi.transpose(), phi) / dn / dn;
      break;
    case Identity::kCrossAB:
      rhs = phi.trace() / dt * trace_of_product(eta, psi) / dn;
      break;
    case Identity::kCrossBA:
      rhs = phi.trace() / dt * trace_of_product(eta.transpose(), psi) / dm;
      break;
  }

  std::vector<double> values(static_cast<std::size_t>(cfg.n_samples));
  parallel_for(values.size(), threads, [&](std::size_t s) {
    const RawBlocks raw = sampler.sample_colored(s);
    const DecorrelatedBlocks blk = decorrelate(corr, raw.a, raw.b);
    const Matrix& a = blk.a;
    const Matrix& b = blk.b;
    double q = 0.0;
    switch (which) {
      case Identity::kTraceAA:
        q = trace_of_product(a * phi * a.transpose(), psi) / (dt * dn);
        break;
      case Identity::kTransposedAA:
        q = trace_of_product(a * phi * a, psi) / dn;
        break;
      case Identity::kSplitTraceAAt:
        q = trace_of_product(a, phi) / dn * trace_of_product(psi, a.transpose()) / dn;
        break;
      case Identity::kSplitTraceAA:
        q = trace_of_product(a, phi) / dn * trace_of_product(a, psi) / dn;
        break;
      case Identity::kCrossAB:
        q = trace_of_product(a * phi * b.transpose(), psi) / (dt * dn);
        break;
      case Identity::kCrossBA:
        q = trace_of_product(b * phi * a.transpose(), psi) / (dt * dm);
        break;
    }
    values[s] = q;
  });

  IdentityCheck out;
  out.samples = cfg.n_samples;
  out.rhs = rhs;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.lhs = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - out.lhs) * (v - out.lhs);
  const double var = values.size() > 1 ? ss / (values.size() - 1) : 0.0;
  out.standard_error = std::sqrt(var / values.size());
  const double diff = std::abs(out.lhs - out.rhs);
  if (out.standard_error > 0.0) {
    out.z_score = diff / out.standard_error;
  } else {
    out.z_score = diff <= 1e-14 * std::max(1.0, std::abs(rhs))
                      ? 0.0
                      : std::numeric_limits<double>::infinity();
  }
  return out;
}

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("NSCORR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(resolve_thread_count(threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

void write_spectra_csv(const std::string& path,
                       const std::vector<std::vector<double>>& spectra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot open " + path);
  for (const auto& row : spectra) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path);
}

void write_spectra_binary(const std::string& path,
                          const std::vector<std::vector<double>>& spectra) {
  static_assert(std::endian::native == std::endian::little,
                "binary spectra dump assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot open " + path);
  const std::uint64_t rows = spectra.size();
  const std::uint64_t cols = spectra.empty() ? 0 : spectra.front().size();
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (const auto& row : spectra) {
    if (row.size() != cols) {
      fail(ErrorCode::kDimensionMismatch, "ragged spectra cannot be dumped");
    }
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) fail(ErrorCode::kIoError, "failed writing " + path);
}

}  // namespace nscorr
