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

// Self-consistent resolvent of C in the large-N limit.
//
// With u = 1 + kn (zG - 1) the unknowns are tied together by
//   Y  = km + (u - 1)(u + km)
//   Y2 = Y / (1 - kn g)
//   Y1 = u^2 / (1 - kn G u / (1 - kn g))
//   g  = ((z - Y2) G - 1) / u
//   G  = sum_k w_k / (z - v_k Y1 - Y2)
// where (v_k, w_k) are the distinct zeta eigenvalues and their weights.
// The density follows from rho(lambda) = -Im G(lambda + i eps) / pi.

#ifndef NSCORR_PASTUR_HPP
#define NSCORR_PASTUR_HPP

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nscorr/error.hpp"
#include "nscorr/spectra.hpp"

namespace nscorr {

using Complex = std::complex<double>;

/// Zeta spectrum collapsed to distinct values with N-normalized weights.
struct PasturModel {
  std::vector<double> values;
  std::vector<double> weights;  // sum to 1
  double kn = 0.0;
  double km = 0.0;

  /// Groups eigenvalues closer than 1e-13. Requires zeta in [0,1),
  /// 0 <= kn <= km and km > 0.
  static PasturModel from_eigs(const std::vector<double>& zeta_eigs, double kn,
                               double km);
  double zeta_mean() const;
  double zeta_max() const;
  /// Generous upper bound on the spectrum of C.
  double spectral_bound() const;
  bool null_model() const { return zeta_max() == 0.0; }
};

struct SolverSettings {
  double epsilon = 1e-3;
  double damping = 0.5;
  double tol = 1e-10;
  int max_iter = 10000;
  std::vector<double> grid;  // empty: built from the detected support
  int grid_points = 600;     // lower bound for automatic grids
  double max_clipped_mass = 1e-4;
  bool newton_fallback = true;
  int picard_budget = 400;   // Picard steps before switching to Newton
  double detect_epsilon = 1e-10;
  double detect_threshold = 1e-6;
  int detect_points = 3000;
  double tail_threshold = 1e-8;

  /// Throws kParameterOutOfRange for out-of-range fields.
  void validate() const;
};

struct ResolventState {
  Complex z;
  Complex G;
  Complex g;
  Complex Y;
  Complex Y1;
  Complex Y2;
  double residual = 0.0;  // |rhs(G) - G| / max(1, |G|)
  int iterations = 0;
  bool used_newton = false;
};

/// Carries the best state reached before the iteration budget ran out.
class SolverNotConverged : public Error {
 public:
  SolverNotConverged(const std::string& what, ResolventState best)
      : Error(ErrorCode::kMaxIterationsExceeded, what), best_(best) {}
  const ResolventState& best() const noexcept { return best_; }

 private:
  ResolventState best_;
};

Complex eval_Y(Complex z, Complex G, double kn, double km);

/// Root of kn u g^2 - (2u - 1) g + (zG - 1 - Y G) = 0 closest to g_prev.
Complex solve_g(Complex z, Complex G, double kn, double km, Complex g_prev);

/// (Y1, Y2) for given (z, G, g).
std::pair<Complex, Complex> eval_Y1_Y2(Complex z, Complex G, Complex g,
                                       double kn, double km);

/// sum_k w_k / (z - v_k Y1 - Y2).
Complex pastur_rhs(const PasturModel& model, Complex z, Complex Y1, Complex Y2);

/// Complete state (g, Y, Y1, Y2, residual) for a given G.
ResolventState evaluate_state(const PasturModel& model, Complex z, Complex G,
                              Complex g_prev);

/// Damped Picard on G with the quadratic closure for g, falling back to a
/// Newton iteration when Picard has not converged within picard_budget
/// steps. Im z may be negative; the iterate then stays in the upper half
/// plane.
ResolventState fixed_point_G(const PasturModel& model, Complex z,
                             const SolverSettings& settings,
                             const std::optional<ResolventState>& warm_start = {});

ResolventState fixed_point_G(const std::vector<double>& zeta_eigs, double kn,
                             double km, Complex z, const SolverSettings& settings,
                             const std::optional<ResolventState>& warm_start = {});

/// All three roots G = (1 + s)/z of the zeta = 0 cubic
///   kn^2 s^3 + (kn^2 + kn(1 + km)) s^2 + (km + kn(1 + km) - z) s + km = 0
/// with s = zG - 1. For kn = 0 the single root of the linear remainder is
/// repeated.
std::array<Complex, 3> cubic_roots_zeta0(Complex z, double kn, double km);

/// Physical root: Im G opposite to Im z, Im(zG) of the same sign as Im G and
/// |G| <= 1/|Im z|. Ties go to the root nearest `previous` (or 1/z).
Complex cubic_G_zeta0(Complex z, double kn, double km,
                      std::optional<Complex> previous = {});

struct SupportInterval {
  double lo = 0.0;
  double hi = 0.0;
  double mass = 0.0;
};

struct SupportInfo {
  std::vector<SupportInterval> intervals;  // ascending
  std::size_t bulk_index = 0;              // interval with the largest mass
  double scan_upper = 0.0;
  double scan_step = 0.0;

  const SupportInterval& bulk() const { return intervals.at(bulk_index); }
  double lower() const { return intervals.front().lo; }
  double upper() const { return intervals.back().hi; }
  /// Midpoint between the bulk and the next interval above it, or the bulk
  /// upper edge when nothing lies above.
  double separation_threshold() const;
  bool has_island_above() const { return bulk_index + 1 < intervals.size(); }
};

/// Scans rho at detect_epsilon on [0, scan_upper] from the top down and
/// returns the intervals where rho exceeds detect_threshold, edges refined
/// by bisection.
SupportInfo detect_support(const PasturModel& model,
                           const SolverSettings& settings);

struct SweepDiagnostics {
  double epsilon = 0.0;
  double core_spacing = 0.0;
  std::size_t points = 0;
  std::size_t newton_points = 0;
  int max_iterations = 0;
  double max_residual = 0.0;
  double clipped_mass = 0.0;
  bool herglotz_ok = true;
  double integral = 0.0;
  double first_moment = 0.0;
  std::optional<SupportInfo> support;
};

struct SweepResult {
  DensityCurve curve;
  std::vector<ResolventState> states;  // aligned with curve.grid
  SweepDiagnostics diagnostics;

  bool clipped_mass_ok(const SolverSettings& settings) const {
    return diagnostics.clipped_mass <= settings.max_clipped_mass;
  }
};

/// Theory density by downward continuation from the largest grid point.
/// Without an explicit grid: uniform spacing at most epsilon/2 over the
/// detected support plus margins, then geometric tails on both sides until
/// rho drops below tail_threshold. The working epsilon is
/// max(settings.epsilon, 2 * spacing).
SweepResult sweep_density(const PasturModel& model, const SolverSettings& settings);

SweepResult sweep_density(const std::vector<double>& zeta_eigs, double kn,
                          double km, const SolverSettings& settings);

struct HerglotzReport {
  bool sign_ok = true;          // Im G < 0 at every point
  double max_conjugate_defect = 0.0;  // max |G(l - i eps) - conj G(l + i eps)|
  std::size_t points = 0;
};

/// Re-solves every grid point below the real axis and compares.
HerglotzReport check_herglotz(const PasturModel& model, const SweepResult& sweep,
                              const SolverSettings& settings);

/// Resolvent of D from that of C: 1/z + (kn/km)(G - 1/z).
Complex resolvent_D_from_C(Complex G, Complex z, double kn, double km);

struct DSpectrum {
  DensityCurve curve;  // continuous part of rho_D on the C grid
  double zero_mode_mass = 0.0;           // -delta Im G_D(i delta)
  double expected_zero_mode_mass = 0.0;  // 1 - kn/km
  double mass_deficit = 0.0;             // 1 - integral of curve
};

DSpectrum density_D(const PasturModel& model, const SweepResult& sweep,
                    const SolverSettings& settings);

nlohmann::json to_json(const SweepDiagnostics& diag);
nlohmann::json to_json(const SupportInfo& support);

}  // namespace nscorr

#endif  // NSCORR_PASTUR_HPP
