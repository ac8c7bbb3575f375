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

// Exercises the shared library through nscorr.h only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "nscorr/nscorr.h"

namespace fs = std::filesystem;

namespace {

struct Model {
  nscorr_model* ptr = nullptr;
  ~Model() { nscorr_model_destroy(ptr); }
};
struct Curve {
  nscorr_curve* ptr = nullptr;
  ~Curve() { nscorr_curve_destroy(ptr); }
};
struct Config {
  nscorr_config* ptr = nullptr;
  ~Config() { nscorr_config_destroy(ptr); }
};
struct Run {
  nscorr_run* ptr = nullptr;
  ~Run() { nscorr_run_destroy(ptr); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(nscorr_version()) > 0);
  CHECK(std::string(nscorr_status_name(NSCORR_OK)) == "Ok");
  CHECK(std::string(nscorr_status_name(NSCORR_MODEL_NOT_POSITIVE_DEFINITE)) ==
        "ModelNotPositiveDefinite");
  CHECK(nscorr_status_exit_code(NSCORR_OK) == 0);
  CHECK(nscorr_status_exit_code(NSCORR_CONFIG_INVALID) == 2);
  CHECK(nscorr_status_exit_code(NSCORR_PARAMETER_OUT_OF_RANGE) == 2);
  CHECK(nscorr_status_exit_code(NSCORR_MAX_ITERATIONS_EXCEEDED) == 3);
}

TEST_CASE("model create, dims and the rank-one eigenvalue") {
  Model model;
  REQUIRE(nscorr_model_create(4, 6, 0.5, 0.5, 0.3, NSCORR_CROSS_RANK_ONE, &model.ptr) ==
          NSCORR_OK);
  int n = 0, m = 0;
  REQUIRE(nscorr_model_dims(model.ptr, &n, &m) == NSCORR_OK);
  CHECK(n == 4);
  CHECK(m == 6);

  std::vector<double> eigs(4);
  size_t count = 0;
  REQUIRE(nscorr_model_zeta_eigs(model.ptr, eigs.data(), eigs.size(), &count) == NSCORR_OK);
  CHECK(count == 4);
  // n m c^2 / ((n a + 1 - a)(m b + 1 - b)) = 24 * 0.09 / (2.5 * 3.5)
  CHECK(eigs[0] == doctest::Approx(24.0 * 0.09 / 8.75).epsilon(1e-12));
  for (size_t i = 1; i < 4; ++i) CHECK(std::abs(eigs[i]) < 1e-12);

  double sv = 0.0;
  REQUIRE(nscorr_model_max_eta_singular_value(model.ptr, &sv) == NSCORR_OK);
  CHECK(sv == doctest::Approx(std::sqrt(eigs[0])).epsilon(1e-10));

  std::vector<double> small(2);
  CHECK(nscorr_model_zeta_eigs(model.ptr, small.data(), small.size(), &count) ==
        NSCORR_BUFFER_TOO_SMALL);
  CHECK(count == 4);
}

TEST_CASE("model errors map to status codes") {
  nscorr_model* model = nullptr;
  CHECK(nscorr_model_create(4, 6, 0.5, 0.5, 0.7, NSCORR_CROSS_RANK_ONE, &model) ==
        NSCORR_MODEL_NOT_POSITIVE_DEFINITE);
  CHECK(model == nullptr);
  CHECK(std::strlen(nscorr_last_error()) > 0);
  CHECK(nscorr_model_create(4, 6, 1.5, 0.5, 0.1, NSCORR_CROSS_RANK_ONE, &model) ==
        NSCORR_PARAMETER_OUT_OF_RANGE);
  CHECK(nscorr_model_create(0, 6, 0.5, 0.5, 0.1, NSCORR_CROSS_RANK_ONE, &model) ==
        NSCORR_PARAMETER_OUT_OF_RANGE);
  CHECK(nscorr_model_create(4, 6, 0.5, 0.5, 0.1, NSCORR_CROSS_RANK_ONE, nullptr) ==
        NSCORR_INVALID_ARGUMENT);
  CHECK(nscorr_model_dims(nullptr, nullptr, nullptr) == NSCORR_INVALID_ARGUMENT);
  nscorr_model_destroy(nullptr);
  nscorr_curve_destroy(nullptr);
  nscorr_config_destroy(nullptr);
  nscorr_run_destroy(nullptr);
}

TEST_CASE("model json uses the two-call convention") {
  Model model;
  REQUIRE(nscorr_model_create(3, 5, 0.4, 0.6, 0.1, NSCORR_CROSS_EXP_DECAY, &model.ptr) ==
          NSCORR_OK);
  size_t needed = 0;
  CHECK(nscorr_model_json(model.ptr, nullptr, 0, &needed) == NSCORR_BUFFER_TOO_SMALL);
  REQUIRE(needed > 1);
  std::string text(needed, '\0');
  REQUIRE(nscorr_model_json(model.ptr, text.data(), text.size(), &needed) == NSCORR_OK);
  text.resize(needed - 1);
  CHECK(text.find("\"ExpDecay\"") != std::string::npos);
  CHECK(text.find("\"zeta_eigs\"") != std::string::npos);
}

TEST_CASE("theory density integrates to one with mean kappa_m") {
  Model model;
  REQUIRE(nscorr_model_create(32, 64, 0.5, 0.5, 0.0, NSCORR_CROSS_RANK_ONE, &model.ptr) ==
          NSCORR_OK);
  Curve curve;
  REQUIRE(nscorr_theory_density(model.ptr, 320, 0.0, &curve.ptr) == NSCORR_OK);
  const double* grid = nullptr;
  const double* rho = nullptr;
  size_t size = 0;
  REQUIRE(nscorr_curve_data(curve.ptr, &grid, &rho, &size) == NSCORR_OK);
  CHECK(size == nscorr_curve_size(curve.ptr));
  CHECK(size > 100);
  for (size_t i = 0; i < size; ++i) {
    CHECK(rho[i] >= 0.0);
    if (i > 0) CHECK(grid[i] > grid[i - 1]);
  }
  double integral = 0.0;
  REQUIRE(nscorr_curve_integral(curve.ptr, &integral) == NSCORR_OK);
  CHECK(std::abs(integral - 1.0) < 1e-3);
  double m1 = 0.0;
  REQUIRE(nscorr_curve_moment(curve.ptr, 1, &m1) == NSCORR_OK);
  CHECK(m1 == doctest::Approx(64.0 / 320.0).epsilon(1e-2));

  const fs::path csv = fs::temp_directory_path() / "nscorr_c_api_curve.csv";
  REQUIRE(nscorr_curve_write_csv(curve.ptr, csv.string().c_str()) == NSCORR_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("lambda") != std::string::npos);
  fs::remove(csv);

  Curve bad;
  CHECK(nscorr_theory_density(model.ptr, 10, 0.0, &bad.ptr) == NSCORR_PARAMETER_OUT_OF_RANGE);
  CHECK(bad.ptr == nullptr);
}

TEST_CASE("sampled spectra are deterministic per stream") {
  Model model;
  REQUIRE(nscorr_model_create(8, 12, 0.3, 0.3, 0.05, NSCORR_CROSS_EXP_DECAY, &model.ptr) ==
          NSCORR_OK);
  std::vector<double> first(8), again(8), other(8);
  REQUIRE(nscorr_sample_spectrum(model.ptr, 40, 7, 3, first.data(), first.size()) == NSCORR_OK);
  REQUIRE(nscorr_sample_spectrum(model.ptr, 40, 7, 3, again.data(), again.size()) == NSCORR_OK);
  REQUIRE(nscorr_sample_spectrum(model.ptr, 40, 7, 4, other.data(), other.size()) == NSCORR_OK);
  CHECK(first == again);
  CHECK(first != other);
  for (size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i] >= -1e-12);
    if (i > 0) CHECK(first[i] >= first[i - 1]);
  }
  std::vector<double> small(4);
  CHECK(nscorr_sample_spectrum(model.ptr, 40, 7, 3, small.data(), small.size()) ==
        NSCORR_BUFFER_TOO_SMALL);
}

TEST_CASE("presets and config setters") {
  REQUIRE(nscorr_preset_count() > 0);
  CHECK(nscorr_preset_name(nscorr_preset_count()) == nullptr);
  bool has_null = false;
  for (size_t i = 0; i < nscorr_preset_count(); ++i) {
    if (std::string(nscorr_preset_name(i)) == "desk-null") has_null = true;
  }
  CHECK(has_null);

  Config config;
  REQUIRE(nscorr_config_preset("desk-null", &config.ptr) == NSCORR_OK);
  CHECK(nscorr_config_set_seed(config.ptr, 99) == NSCORR_OK);
  CHECK(nscorr_config_set_threads(config.ptr, 2) == NSCORR_OK);
  nscorr_mode mode;
  REQUIRE(nscorr_parse_mode("TheoryOnly", &mode) == NSCORR_OK);
  CHECK(mode == NSCORR_MODE_THEORY_ONLY);
  CHECK(nscorr_parse_mode("Sometimes", &mode) == NSCORR_CONFIG_INVALID);
  CHECK(nscorr_config_set_mode(config.ptr, mode) == NSCORR_OK);
  CHECK(nscorr_config_set_mode(config.ptr, static_cast<nscorr_mode>(9)) ==
        NSCORR_INVALID_ARGUMENT);

  size_t needed = 0;
  nscorr_config_json(config.ptr, nullptr, 0, &needed);
  std::string text(needed, '\0');
  REQUIRE(nscorr_config_json(config.ptr, text.data(), text.size(), &needed) == NSCORR_OK);
  CHECK(text.find("\"seed\": 99") != std::string::npos);
  CHECK(text.find("TheoryOnly") != std::string::npos);

  nscorr_config* missing = nullptr;
  CHECK(nscorr_config_preset("no-such-preset", &missing) == NSCORR_CONFIG_INVALID);
  CHECK(nscorr_config_load("/nonexistent/nscorr.toml", &missing) == NSCORR_CONFIG_INVALID);
  CHECK(std::string(nscorr_last_error()).find("/nonexistent/nscorr.toml") != std::string::npos);
}

TEST_CASE("config load rejects bad files") {
  const fs::path dir = fs::temp_directory_path() / "nscorr_c_api_cfg";
  fs::create_directories(dir);
  const fs::path bad = dir / "bad.toml";
  std::ofstream(bad) << "name = \"x\"\nseed = 1\n[model]\na = 2.0\n";
  nscorr_config* config = nullptr;
  CHECK(nscorr_config_load(bad.string().c_str(), &config) == NSCORR_CONFIG_INVALID);
  CHECK(config == nullptr);
  fs::remove_all(dir);
}

TEST_CASE("theory-only run writes a manifest") {
  const fs::path out = fs::temp_directory_path() / "nscorr_c_api_run";
  fs::remove_all(out);
  Config config;
  REQUIRE(nscorr_config_preset("desk-null", &config.ptr) == NSCORR_OK);
  REQUIRE(nscorr_config_set_mode(config.ptr, NSCORR_MODE_THEORY_ONLY) == NSCORR_OK);
  REQUIRE(nscorr_config_set_output_dir(config.ptr, out.string().c_str()) == NSCORR_OK);
  Run run;
  REQUIRE(nscorr_run_experiment(config.ptr, &run.ptr) == NSCORR_OK);
  CHECK(nscorr_run_exit_code(run.ptr) == 0);
  CHECK(std::strlen(nscorr_run_summary(run.ptr)) > 0);
  const fs::path manifest = nscorr_run_manifest_path(run.ptr);
  CHECK(fs::exists(manifest));
  CHECK(fs::exists(out / "theory.csv"));
  fs::remove_all(out);
  CHECK(nscorr_run_exit_code(nullptr) == 2);
}
