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

#include "nscorr/pastur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace nscorr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRootSanityRadius = 1e12;
constexpr double kTailGrowth = 1.15;
constexpr int kMaxHalvings = 4;
constexpr int kMaxNewtonSteps = 200;
constexpr int kBisectionSteps = 30;

bool finite(Complex x) { return std::isfinite(x.real()) && std::isfinite(x.imag()); }

std::string at_lambda(const char* what, Complex z) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << " at z = " << z.real() << (z.imag() < 0 ? " - " : " + ")
      << std::abs(z.imag()) << "i";
  return msg.str();
}

// Iterate and its right-hand side for a candidate G.
struct Evaluation {
  ResolventState state;
  Complex rhs;
};

Evaluation evaluate(const PasturModel& model, Complex z, Complex G,
                    Complex g_prev) {
  Evaluation ev;
  ResolventState& st = ev.state;
  st.z = z;
  st.G = G;
  st.g = solve_g(z, G, model.kn, model.km, g_prev);
  st.Y = eval_Y(z, G, model.kn, model.km);
  std::tie(st.Y1, st.Y2) = eval_Y1_Y2(z, G, st.g, model.kn, model.km);
  ev.rhs = pastur_rhs(model, z, st.Y1, st.Y2);
  if (!finite(ev.rhs)) {
    fail(ErrorCode::kDegenerateDenominator,
         at_lambda("pole of the spectral average", z));
  }
  st.residual = std::abs(ev.rhs - G) / std::max(1.0, std::abs(G));
  return ev;
}

// Physical half plane: Im G has the sign opposite to Im z.
bool herglotz(Complex z, Complex G) {
  return z.imag() > 0 ? G.imag() < 0.0 : G.imag() > 0.0;
}

void check_z(Complex z) {
  if (!finite(z) || z.imag() == 0.0) {
    fail(ErrorCode::kParameterOutOfRange,
         "resolvent needs a finite z off the real axis");
  }
}

std::optional<ResolventState> newton(const PasturModel& model, Complex z,
                                     ResolventState start, double tol,
                                     int budget, int* used) {
  ResolventState cur = start;
  Evaluation ev = evaluate(model, z, cur.G, cur.g);
  for (int k = 0; k < budget; ++k) {
    ++*used;
    if (ev.state.residual < tol) return ev.state;
    const Complex G = ev.state.G;
    const Complex F = ev.rhs - G;
    const double h = 1e-7 * std::max(std::abs(G), 1e-3);
    Complex dF;
    try {
      const Evaluation shifted = evaluate(model, z, G + h, ev.state.g);
      dF = (shifted.rhs - (G + h) - F) / h;
    } catch (const Error&) {
      return std::nullopt;
    }
    if (!finite(dF) || dF == Complex(0.0)) return std::nullopt;
    Complex step = -F / dF;
    bool accepted = false;
    for (int j = 0; j < 40 && !accepted; ++j, step *= 0.5) {
      const Complex trial = G + step;
      if (!herglotz(z, trial)) continue;
      try {
        Evaluation next = evaluate(model, z, trial, ev.state.g);
        if (std::abs(next.rhs - trial) < std::abs(F)) {
          ev = next;
          accepted = true;
        }
      } catch (const Error&) {
      }
    }
    if (!accepted) return std::nullopt;
  }
  if (ev.state.residual < tol) return ev.state;
  return std::nullopt;
}

}  // namespace

PasturModel PasturModel::from_eigs(const std::vector<double>& zeta_eigs,
                                   double kn, double km) {
  if (zeta_eigs.empty()) fail(ErrorCode::kEmptyInput, "empty zeta spectrum");
  if (!(km > 0.0) || !(kn >= 0.0) || kn > km || !std::isfinite(km)) {
    fail(ErrorCode::kParameterOutOfRange, "need 0 <= kappa_n <= kappa_m, kappa_m > 0");
  }
  std::vector<double> sorted = zeta_eigs;
  for (double v : sorted) {
    if (!(v >= 0.0 && v < 1.0)) {
      fail(ErrorCode::kParameterOutOfRange, "zeta eigenvalues must lie in [0,1)");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  PasturModel model;
  model.kn = kn;
  model.km = km;
  const double unit = 1.0 / static_cast<double>(sorted.size());
  double group_start = sorted.front();
  double group_sum = 0.0;
  int group_count = 0;
  auto flush = [&] {
    model.values.push_back(group_sum / group_count);
    model.weights.push_back(group_count * unit);
  };
  for (double v : sorted) {
    if (group_count && v - group_start > 1e-13) {
      flush();
      group_start = v;
      group_sum = 0.0;
      group_count = 0;
    }
    group_sum += v;
    ++group_count;
  }
  flush();
  // Tiny eigenvalues are round-off from the SVD of a singular eta.
  if (model.values.front() < 1e-13) model.values.front() = 0.0;
  return model;
}

double PasturModel::zeta_mean() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) sum += weights[k] * values[k];
  return sum;
}

double PasturModel::zeta_max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

void SolverSettings::validate() const {
  auto bad = [](const char* what) { fail(ErrorCode::kParameterOutOfRange, what); };
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) bad("epsilon must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) bad("damping must lie in (0,1]");
  if (!(tol > 0.0)) bad("tol must be positive");
  if (max_iter < 1) bad("max_iter must be positive");
  if (grid_points < 2) bad("grid_points must be at least 2");
  if (!(max_clipped_mass >= 0.0)) bad("max_clipped_mass must be nonnegative");
  if (picard_budget < 1) bad("picard_budget must be positive");
  if (!(detect_epsilon > 0.0)) bad("detect_epsilon must be positive");
  if (!(detect_threshold > 0.0)) bad("detect_threshold must be positive");
  if (detect_points < 10) bad("detect_points must be at least 10");
  if (!(tail_threshold > 0.0)) bad("tail_threshold must be positive");
  if (!grid.empty()) {
    if (grid.size() < 2) bad("an explicit grid needs at least two points");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (!std::isfinite(grid[i])) bad("grid values must be finite");
      if (i && !(grid[i] > grid[i - 1])) bad("grid must be strictly increasing");
    }
  }
}

Complex eval_Y(Complex z, Complex G, double kn, double km) {
  const Complex f = kn * (z * G - 1.0);
  return km + f * (1.0 + km + f);
}

Complex solve_g(Complex z, Complex G, double kn, double km, Complex g_prev) {
  const Complex u = 1.0 + kn * (z * G - 1.0);
  if (!(std::abs(u) > 1e-14)) {
    fail(ErrorCode::kDegenerateDenominator, at_lambda("1 + kn(zG - 1) vanishes", z));
  }
  const Complex Y = eval_Y(z, G, kn, km);
  const Complex a2 = kn * u;
  const Complex a1 = -(2.0 * u - 1.0);
  const Complex a0 = z * G - 1.0 - Y * G;
  if (a2 == Complex(0.0)) return a0 / (2.0 * u - 1.0);

  const Complex disc = a1 * a1 - 4.0 * a2 * a0;
  const double scale = std::norm(a1) + std::abs(4.0 * a2 * a0);
  if (std::abs(disc) < 1e-14 * scale) {
    // Near-double root: iterate g = ((z - Y/(1 - kn g)) G - 1)/u directly.
    Complex g = g_prev;
    for (int it = 0; it < 500; ++it) {
      const Complex next = ((z - Y / (1.0 - kn * g)) * G - 1.0) / u;
      const Complex damped = 0.5 * (g + next);
      if (std::abs(damped - g) < 1e-15 * std::max(1.0, std::abs(g))) return damped;
      g = damped;
    }
    return -a1 / (2.0 * a2);
  }
  Complex sq = std::sqrt(disc);
  if ((std::conj(a1) * sq).real() < 0.0) sq = -sq;
  const Complex q = -0.5 * (a1 + sq);
  std::array<Complex, 2> roots{q / a2, a0 / q};
  Complex best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Complex& r : roots) {
    if (!finite(r) || std::abs(r) > kRootSanityRadius) continue;
    const double d = std::abs(r - g_prev);
    if (d < best_dist) {
      best_dist = d;
      best = r;
    }
  }
  if (!std::isfinite(best_dist)) {
    fail(ErrorCode::kBothRootsDiverged, at_lambda("both roots for g diverged", z));
  }
  return best;
}

std::pair<Complex, Complex> eval_Y1_Y2(Complex z, Complex G, Complex g,
                                       double kn, double km) {
  const Complex u = 1.0 + kn * (z * G - 1.0);
  const Complex outer = 1.0 - kn * g;
  if (!(std::abs(outer) > 1e-14)) {
    fail(ErrorCode::kDegenerateDenominator, at_lambda("1 - kn g vanishes", z));
  }
  const Complex nested = 1.0 - kn * G * u / outer;
  if (!(std::abs(nested) > 1e-14)) {
    fail(ErrorCode::kDegenerateDenominator,
         at_lambda("nested denominator of Y1 vanishes", z));
  }
  const Complex Y = eval_Y(z, G, kn, km);
  return {u * u / nested, Y / outer};
}

Complex pastur_rhs(const PasturModel& model, Complex z, Complex Y1, Complex Y2) {
  Complex sum = 0.0;
  for (std::size_t k = 0; k < model.values.size(); ++k) {
    sum += model.weights[k] / (z - model.values[k] * Y1 - Y2);
  }
  return sum;
}

ResolventState evaluate_state(const PasturModel& model, Complex z, Complex G,
                              Complex g_prev) {
  return evaluate(model, z, G, g_prev).state;
}

namespace {

// One solve from a given starting point, without any physicality check.
ResolventState iterate_from(const PasturModel& model, Complex z,
                            const SolverSettings& settings, Complex G, Complex g,
                            int* used) {
  ResolventState best;
  best.residual = std::numeric_limits<double>::infinity();
  const int start_used = *used;

  auto picard = [&](int budget) -> bool {
    double alpha = settings.damping;
    int halvings = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < budget; ++it) {
      ++*used;
      const Evaluation ev = evaluate(model, z, G, g);
      if (ev.state.residual < best.residual) best = ev.state;
      if (ev.state.residual < settings.tol) return true;
      if (ev.state.residual > prev && halvings < kMaxHalvings) {
        alpha *= 0.5;
        ++halvings;
      }
      prev = ev.state.residual;
      g = ev.state.g;
      G = (1.0 - alpha) * G + alpha * ev.rhs;
    }
    return false;
  };

  auto remaining = [&] { return settings.max_iter - (*used - start_used); };
  bool done = false;
  if (settings.newton_fallback) {
    try {
      done = picard(std::min(settings.max_iter, settings.picard_budget));
    } catch (const Error&) {
      if (!std::isfinite(best.residual)) throw;
    }
    if (!done && remaining() > 0) {
      const int budget = std::min(kMaxNewtonSteps, remaining());
      if (auto st = newton(model, z, best, settings.tol, budget, used)) {
        best = *st;
        best.used_newton = true;
        done = true;
      } else if (remaining() > 0) {
        G = best.G;
        g = best.g;
        done = picard(remaining());
      }
    }
  } else {
    done = picard(settings.max_iter);
  }
  best.iterations = *used - start_used;
  if (!done) {
    std::ostringstream msg;
    msg << at_lambda("fixed point not converged", z) << " (residual "
        << best.residual << " after " << best.iterations << " iterations)";
    throw SolverNotConverged(msg.str(), best);
  }
  return best;
}

// Converged states must look like the resolvent of a probability measure
// supported in [0, L]: Im G has the right sign, |G| <= 1/|Im z| and
// |Im G| >= |Im z| / (|z| + L)^2. The last bound rules out the spurious
// fixed point G -> 0, g -> 1/kn.
bool physical(const PasturModel& model, const ResolventState& st) {
  if (!finite(st.G) || !herglotz(st.z, st.G)) return false;
  const double eta = std::abs(st.z.imag());
  if (std::abs(st.G) > (1.0 + 1e-9) / eta) return false;
  const double reach = std::abs(st.z) + model.spectral_bound();
  return std::abs(st.G.imag()) >= 0.5 * eta / (reach * reach);
}

constexpr int kMaxContinuationDepth = 12;

ResolventState continue_from(const PasturModel& model, Complex z,
                             const SolverSettings& settings,
                             const ResolventState& warm, int depth, int* used) {
  std::optional<SolverNotConverged> failure;
  try {
    ResolventState st = iterate_from(model, z, settings, warm.G, warm.g, used);
    if (physical(model, st)) return st;
    failure.emplace(at_lambda("fixed point left the physical branch", z), st);
  } catch (const SolverNotConverged& e) {
    failure.emplace(e);
  } catch (const Error& e) {
    failure.emplace(e.what(), warm);
  }
  if (depth >= kMaxContinuationDepth) throw *failure;
  // Split the continuation step.
  const Complex mid = 0.5 * (warm.z + z);
  const ResolventState half =
      continue_from(model, mid, settings, warm, depth + 1, used);
  return continue_from(model, z, settings, half, depth + 1, used);
}

}  // namespace

double PasturModel::spectral_bound() const {
  const double edge = (1.0 + std::sqrt(kn)) * (1.0 + std::sqrt(km));
  return 1.25 * edge * edge * (1.0 + zeta_max());
}

ResolventState fixed_point_G(const PasturModel& model, Complex z,
                             const SolverSettings& settings,
                             const std::optional<ResolventState>& warm_start) {
  check_z(z);
  int used = 0;
  std::optional<Error> failure;
  if (warm_start && finite(warm_start->G) && herglotz(z, warm_start->G)) {
    ResolventState warm = *warm_start;
    const bool same_half = finite(warm.z) && warm.z.imag() * z.imag() > 0.0;
    if (!same_half) warm.z = z;
    try {
      ResolventState st = continue_from(model, z, settings, warm,
                                        same_half ? 0 : kMaxContinuationDepth, &used);
      st.iterations = used;
      return st;
    } catch (const Error& e) {
      failure.emplace(e);
    }
  }
  ResolventState cold;
  cold.z = z;
  cold.G = 1.0 / z;
  ResolventState st = iterate_from(model, z, settings, cold.G, cold.g, &used);
  st.iterations = used;
  if (!physical(model, st)) {
    throw SolverNotConverged(
        failure ? std::string(failure->what())
                : at_lambda("fixed point left the physical branch", z),
        st);
  }
  return st;
}

ResolventState fixed_point_G(const std::vector<double>& zeta_eigs, double kn,
                             double km, Complex z, const SolverSettings& settings,
                             const std::optional<ResolventState>& warm_start) {
  return fixed_point_G(PasturModel::from_eigs(zeta_eigs, kn, km), z, settings,
                       warm_start);
}

std::array<Complex, 3> cubic_roots_zeta0(Complex z, double kn, double km) {
  const double c3 = kn * kn;
  const double c2 = kn * kn + kn * (1.0 + km);
  const Complex c1 = km + kn * (1.0 + km) - z;
  const double c0 = km;
  if (c3 == 0.0) {
    const Complex s = -c0 / c1;
    const Complex G = (1.0 + s) / z;
    return {G, G, G};
  }
  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = -c0 / c3;
  companion(1, 2) = -c1 / c3;
  companion(2, 2) = -c2 / c3;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    fail(ErrorCode::kConvergenceFailure, "cubic companion eigensolver failed");
  }
  std::array<Complex, 3> out;
  for (int k = 0; k < 3; ++k) {
    Complex s = solver.eigenvalues()(k);
    for (int it = 0; it < 3; ++it) {
      const Complex p = ((c3 * s + c2) * s + c1) * s + c0;
      const Complex dp = (3.0 * c3 * s + 2.0 * c2) * s + c1;
      if (dp == Complex(0.0)) break;
      const Complex next = s - p / dp;
      if (!finite(next)) break;
      s = next;
    }
    out[k] = (1.0 + s) / z;
  }
  return out;
}

Complex cubic_G_zeta0(Complex z, double kn, double km,
                      std::optional<Complex> previous) {
  check_z(z);
  if (z.imag() < 0.0) {
    std::optional<Complex> prev_conj;
    if (previous) prev_conj = std::conj(*previous);
    return std::conj(cubic_G_zeta0(std::conj(z), kn, km, prev_conj));
  }
  const auto roots = cubic_roots_zeta0(z, kn, km);
  const double bound = 1.0 / z.imag();
  std::vector<Complex> admissible;
  for (const Complex& G : roots) {
    const double slack = 1e-12 * std::max(1.0, std::abs(G));
    const bool lower = G.imag() < slack;
    const bool zg_lower = (z * G).imag() <= slack * std::max(1.0, std::abs(z));
    const bool bounded = std::abs(G) <= bound * (1.0 + 1e-12);
    if (lower && zg_lower && bounded && finite(G)) admissible.push_back(G);
  }
  if (admissible.empty()) {
    fail(ErrorCode::kBranchSelectionAmbiguous,
         at_lambda("no cubic root satisfies the Herglotz conditions", z));
  }
  const Complex anchor = previous.value_or(1.0 / z);
  return *std::min_element(admissible.begin(), admissible.end(),
                           [&](Complex a, Complex b) {
                             // Strictly physical roots first, then continuity.
                             const bool pa = a.imag() < 0.0, pb = b.imag() < 0.0;
                             if (pa != pb) return pa;
                             return std::abs(a - anchor) < std::abs(b - anchor);
                           });
}

double SupportInfo::separation_threshold() const {
  const SupportInterval& b = bulk();
  if (!has_island_above()) return b.hi;
  return 0.5 * (b.hi + intervals[bulk_index + 1].lo);
}

SupportInfo detect_support(const PasturModel& model,
                           const SolverSettings& settings) {
  settings.validate();
  SupportInfo info;
  info.scan_upper = model.spectral_bound();
  const int n = settings.detect_points;
  info.scan_step = info.scan_upper / n;
  const double eps = settings.detect_epsilon;

  // Scan from the top down; index k holds lambda = k * step.
  std::vector<double> rho(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<ResolventState> states(static_cast<std::size_t>(n) + 1);
  std::optional<ResolventState> warm;
  for (int k = n; k >= 1; --k) {
    const Complex z(k * info.scan_step, eps);
    states[k] = fixed_point_G(model, z, settings, warm);
    warm = states[k];
    rho[k] = std::max(0.0, -states[k].G.imag() / kPi);
  }
  auto on = [&](double r) { return r > settings.detect_threshold; };

  auto refine = [&](int inside, int outside) {
    double lo_l = inside * info.scan_step, hi_l = outside * info.scan_step;
    ResolventState anchor = states[inside];
    for (int it = 0; it < kBisectionSteps; ++it) {
      const double mid = 0.5 * (lo_l + hi_l);
      const ResolventState st = fixed_point_G(model, Complex(mid, eps), settings, anchor);
      if (on(-st.G.imag() / kPi)) {
        lo_l = mid;
        anchor = st;
      } else {
        hi_l = mid;
      }
    }
    return 0.5 * (lo_l + hi_l);
  };

  int k = 1;
  while (k <= n) {
    if (!on(rho[k])) {
      ++k;
      continue;
    }
    const int first = k;
    while (k + 1 <= n && on(rho[k + 1])) ++k;
    const int last = k;
    SupportInterval iv;
    iv.lo = first == 1 ? 0.0 : refine(first, first - 1);
    iv.hi = last == n ? info.scan_upper : refine(last, last + 1);
    for (int j = std::max(first - 1, 1); j < std::min(last + 1, n); ++j) {
      iv.mass += 0.5 * (rho[j] + rho[j + 1]) * info.scan_step;
    }
    info.intervals.push_back(iv);
    ++k;
  }
  if (info.intervals.empty()) {
    fail(ErrorCode::kConvergenceFailure, "no spectral support detected");
  }
  info.bulk_index = static_cast<std::size_t>(
      std::max_element(info.intervals.begin(), info.intervals.end(),
                       [](const SupportInterval& a, const SupportInterval& b) {
                         return a.mass < b.mass;
                       }) -
      info.intervals.begin());
  return info;
}

SweepResult sweep_density(const PasturModel& model, const SolverSettings& settings) {
  settings.validate();
  SweepResult result;
  SweepDiagnostics& diag = result.diagnostics;
  std::vector<double> grid;
  double eps = settings.epsilon;

  if (!settings.grid.empty()) {
    grid = settings.grid;
    double spacing = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      spacing = std::max(spacing, grid[i] - grid[i - 1]);
    }
    eps = std::max(settings.epsilon, 2.0 * spacing);
    diag.core_spacing = spacing;
  } else {
    SupportInfo support = detect_support(model, settings);
    const double margin = 10.0 * settings.epsilon;
    const double lo = support.lower() - margin;
    const double hi = support.upper() + margin;
    const int points = std::max(
        settings.grid_points,
        static_cast<int>(std::ceil(2.0 * (hi - lo) / settings.epsilon)) + 1);
    const double h = (hi - lo) / (points - 1);
    eps = std::max(settings.epsilon, 2.0 * h);
    diag.core_spacing = h;
    diag.support = support;

    // Lorentzian tails of width eps fall below the threshold at this distance.
    const double reach = 2.0 * std::sqrt(eps / (kPi * settings.tail_threshold));
    std::vector<double> tail;
    for (double step = h, d = h; d < reach; step *= kTailGrowth, d += step) {
      tail.push_back(d);
    }
    grid.reserve(2 * tail.size() + points);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) grid.push_back(lo - *it);
    for (int i = 0; i < points; ++i) grid.push_back(i + 1 == points ? hi : lo + i * h);
    for (double d : tail) grid.push_back(hi + d);
  }
  diag.epsilon = eps;
  diag.points = grid.size();

  result.states.resize(grid.size());
  std::optional<ResolventState> warm;
  for (std::size_t idx = grid.size(); idx-- > 0;) {
    const Complex z(grid[idx], eps);
    result.states[idx] = fixed_point_G(model, z, settings, warm);
    warm = result.states[idx];
    diag.max_iterations = std::max(diag.max_iterations, warm->iterations);
    diag.max_residual = std::max(diag.max_residual, warm->residual);
    if (warm->used_newton) ++diag.newton_points;
  }

  DensityCurve& curve = result.curve;
  curve.origin = CurveOrigin::kTheory;
  curve.tolerance = 1e-3;
  curve.grid = grid;
  curve.rho.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = -result.states[i].G.imag() / kPi;
    if (!herglotz(result.states[i].z, result.states[i].G)) diag.herglotz_ok = false;
    if (r < 0.0) {
      const double left = i ? grid[i] - grid[i - 1] : 0.0;
      const double right = i + 1 < grid.size() ? grid[i + 1] - grid[i] : 0.0;
      diag.clipped_mass += -r * 0.5 * (left + right);
    }
    curve.rho[i] = std::max(0.0, r);
  }
  diag.integral = curve.integral();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    diag.first_moment += 0.5 * (grid[i] * curve.rho[i] + grid[i - 1] * curve.rho[i - 1]) *
                         (grid[i] - grid[i - 1]);
  }
  return result;
}

SweepResult sweep_density(const std::vector<double>& zeta_eigs, double kn,
                          double km, const SolverSettings& settings) {
  return sweep_density(PasturModel::from_eigs(zeta_eigs, kn, km), settings);
}

HerglotzReport check_herglotz(const PasturModel& model, const SweepResult& sweep,
                              const SolverSettings& settings) {
  HerglotzReport report;
  for (const ResolventState& st : sweep.states) {
    if (!herglotz(st.z, st.G)) report.sign_ok = false;
    ResolventState mirror = st;
    mirror.z = std::conj(st.z);
    mirror.G = std::conj(st.G);
    mirror.g = std::conj(st.g);
    const ResolventState below =
        fixed_point_G(model, std::conj(st.z), settings, mirror);
    report.max_conjugate_defect =
        std::max(report.max_conjugate_defect, std::abs(below.G - std::conj(st.G)));
    ++report.points;
  }
  return report;
}

Complex resolvent_D_from_C(Complex G, Complex z, double kn, double km) {
  if (!(km > 0.0)) fail(ErrorCode::kParameterOutOfRange, "kappa_m must be positive");
  const Complex inv = 1.0 / z;
  return inv + (kn / km) * (G - inv);
}

DSpectrum density_D(const PasturModel& model, const SweepResult& sweep,
                    const SolverSettings& settings) {
  DSpectrum out;
  const double ratio = model.kn / model.km;
  out.expected_zero_mode_mass = 1.0 - ratio;
  out.curve.origin = CurveOrigin::kTheory;
  out.curve.tolerance = 1e-3;
  out.curve.grid = sweep.curve.grid;
  out.curve.rho.resize(sweep.states.size());
  for (std::size_t i = 0; i < sweep.states.size(); ++i) {
    const ResolventState& st = sweep.states[i];
    // Continuous part: drop the (1 - kn/km)/z zero-mode pole from G_D.
    const Complex gd = resolvent_D_from_C(st.G, st.z, model.kn, model.km) -
                       out.expected_zero_mode_mass / st.z;
    out.curve.rho[i] = std::max(0.0, -gd.imag() / kPi);
  }
  out.mass_deficit = 1.0 - out.curve.integral();

  // Residue of G_D at the origin.
  const double delta = 1e-8;
  std::optional<ResolventState> warm;
  const auto& grid = sweep.curve.grid;
  if (!sweep.states.empty()) {
    const auto nearest = std::min_element(grid.begin(), grid.end(), [](double a, double b) {
      return std::abs(a) < std::abs(b);
    });
    warm = sweep.states[static_cast<std::size_t>(nearest - grid.begin())];
  }
  const Complex z(0.0, delta);
  const ResolventState st = fixed_point_G(model, z, settings, warm);
  out.zero_mode_mass =
      -delta * resolvent_D_from_C(st.G, z, model.kn, model.km).imag();
  return out;
}

nlohmann::json to_json(const SupportInfo& support) {
  nlohmann::json intervals = nlohmann::json::array();
  for (const auto& iv : support.intervals) {
    intervals.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"mass", iv.mass}});
  }
  return {{"intervals", intervals},
          {"bulk_index", support.bulk_index},
          {"bulk_lower_edge", support.bulk().lo},
          {"bulk_upper_edge", support.bulk().hi},
          {"separation_threshold", support.separation_threshold()},
          {"scan_upper", support.scan_upper},
          {"scan_step", support.scan_step}};
}

nlohmann::json to_json(const SweepDiagnostics& diag) {
  nlohmann::json j = {{"epsilon", diag.epsilon},
                      {"core_spacing", diag.core_spacing},
                      {"points", diag.points},
                      {"newton_points", diag.newton_points},
                      {"max_iterations", diag.max_iterations},
                      {"max_residual", diag.max_residual},
                      {"clipped_mass", diag.clipped_mass},
                      {"herglotz_ok", diag.herglotz_ok},
                      {"integral", diag.integral},
                      {"first_moment", diag.first_moment}};
  j["support"] = diag.support ? to_json(*diag.support) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nscorr
