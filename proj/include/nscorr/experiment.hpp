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

// End-to-end experiments: config parsing, presets and the run pipeline
// (model, ensemble, theory, comparison, artifacts).

#ifndef NSCORR_EXPERIMENT_HPP
#define NSCORR_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nscorr/corr_models.hpp"
#include "nscorr/error.hpp"
#include "nscorr/moments.hpp"
#include "nscorr/pastur.hpp"

namespace nscorr {

enum class RunMode { kTheoryOnly, kMcOnly, kFull };

const char* run_mode_name(RunMode mode) noexcept;
RunMode parse_run_mode(const std::string& name);

enum class SpectraDump { kNone, kCsv, kBinary };

struct Thresholds {
  double max_l1 = 0.05;
  double normalization_tol = 1e-3;
  double first_moment_rel_tol = 1e-2;
  double min_single_outlier_fraction = 0.99;  // rank-one models only
  double max_cubic_deviation = 1e-8;          // null models only
};

struct ExperimentConfig {
  std::string name = "experiment";
  EqualCrossParams model;  // n and m mirror the resolved dimensions
  int t = 0;
  int n_samples = 200;
  std::uint64_t seed = 0;
  int threads = 0;
  RunMode mode = RunMode::kFull;
  std::string outputs = "out";
  SpectraDump spectra = SpectraDump::kNone;
  SolverSettings solver;
  Thresholds thresholds;

  int n() const { return model.n; }
  int m() const { return model.m; }
  double kappa_n() const { return static_cast<double>(model.n) / t; }
  double kappa_m() const { return static_cast<double>(model.m) / t; }
};

/// Raised for malformed configs; lists every offending field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class ConfigFormat { kToml, kJson };

/// Strict parse: unknown keys, wrong types and inconsistent dimensions are
/// all reported.
ExperimentConfig parse_config(const std::string& text, ConfigFormat format,
                              const std::string& origin = "<config>");

/// Reads a .toml or .json file; any other extension is parsed as TOML.
ExperimentConfig validate_config(const std::string& path);

/// Normalized form with every default filled in and derived ratios added.
nlohmann::json to_json(const ExperimentConfig& config);

std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
ExperimentConfig preset_config(const std::string& name);

struct ArtifactEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunResult {
  int exit_code = 0;  // 0 pass, 1 threshold failure
  ComparisonReport report;
  std::optional<SweepResult> theory;
  std::optional<DensityCurve> empirical;
  std::optional<OutlierStats> outliers;
  std::vector<ArtifactEntry> artifacts;
  std::string manifest_path;
  std::string summary;
};

/// Runs the experiment and writes its artifacts. Model and config errors
/// propagate as exceptions; so do solver failures.
RunResult run_experiment(const ExperimentConfig& config);

/// Exit status for an exception escaping run_experiment: 2 for config and
/// model errors, 3 for solver and numerical failures.
int exit_code_for(ErrorCode code) noexcept;

/// Hex SHA-256 of a file's contents.
std::string sha256_file(const std::string& path);

}  // namespace nscorr

#endif  // NSCORR_EXPERIMENT_HPP
