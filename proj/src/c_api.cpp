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

#include "nscorr/nscorr.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <Eigen/SVD>

#include "nscorr/corr_models.hpp"
#include "nscorr/ensemble.hpp"
#include "nscorr/error.hpp"
#include "nscorr/experiment.hpp"
#include "nscorr/moments.hpp"
#include "nscorr/pastur.hpp"
#include "nscorr/spectra.hpp"

struct nscorr_model {
  nscorr::PartitionedCorrelation corr;
};

struct nscorr_curve {
  nscorr::DensityCurve curve;
};

struct nscorr_config {
  nscorr::ExperimentConfig config;
};

struct nscorr_run {
  nscorr::RunResult result;
};

namespace {

thread_local std::string g_last_error;

nscorr_status set_error(nscorr_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
nscorr_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return NSCORR_OK;
  } catch (const nscorr::Error& e) {
    return set_error(static_cast<nscorr_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(NSCORR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(NSCORR_INTERNAL, e.what());
  } catch (...) {
    return set_error(NSCORR_INTERNAL, "unknown error");
  }
}

nscorr_status invalid(const char* what) { return set_error(NSCORR_INVALID_ARGUMENT, what); }

nscorr_status copy_string(const std::string& text, char* buffer, size_t capacity,
                          size_t* needed) {
  const size_t size = text.size() + 1;
  if (needed) *needed = size;
  if (!buffer || capacity < size) {
    return set_error(NSCORR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buffer, text.c_str(), size);
  return NSCORR_OK;
}

}  // namespace

extern "C" {

const char* nscorr_version(void) { return "1.0.0"; }

const char* nscorr_status_name(nscorr_status status) {
  switch (status) {
    case NSCORR_INVALID_ARGUMENT:
      return "InvalidArgument";
    case NSCORR_BUFFER_TOO_SMALL:
      return "BufferTooSmall";
    default:
      return nscorr::error_code_name(static_cast<nscorr::ErrorCode>(status));
  }
}

const char* nscorr_last_error(void) { return g_last_error.c_str(); }

int nscorr_status_exit_code(nscorr_status status) {
  if (status == NSCORR_INVALID_ARGUMENT || status == NSCORR_BUFFER_TOO_SMALL) return 2;
  if (status > NSCORR_INTERNAL) return 3;
  return nscorr::exit_code_for(static_cast<nscorr::ErrorCode>(status));
}

nscorr_status nscorr_model_create(int n, int m, double a, double b, double c,
                                  nscorr_cross_kind kind, nscorr_model** out) {
  if (!out) return invalid("out is NULL");
  *out = nullptr;
  if (kind != NSCORR_CROSS_RANK_ONE && kind != NSCORR_CROSS_EXP_DECAY) {
    return invalid("unknown cross kind");
  }
  return guarded([&] {
    nscorr::EqualCrossParams params{
        n, m, a, b, c,
        kind == NSCORR_CROSS_RANK_ONE ? nscorr::CrossKind::kRankOne
                                      : nscorr::CrossKind::kExpDecay};
    *out = new nscorr_model{nscorr::build_equal_cross(params)};
  });
}

void nscorr_model_destroy(nscorr_model* model) { delete model; }

nscorr_status nscorr_model_dims(const nscorr_model* model, int* n, int* m) {
  if (!model) return invalid("model is NULL");
  if (n) *n = model->corr.n();
  if (m) *m = model->corr.m();
  return NSCORR_OK;
}

nscorr_status nscorr_model_zeta_eigs(const nscorr_model* model, double* out,
                                     size_t capacity, size_t* count) {
  if (!model) return invalid("model is NULL");
  const auto& eigs = model->corr.zeta_eigs();
  if (count) *count = eigs.size();
  if (!out || capacity < eigs.size()) return set_error(NSCORR_BUFFER_TOO_SMALL, "buffer too small");
  std::copy(eigs.begin(), eigs.end(), out);
  return NSCORR_OK;
}

nscorr_status nscorr_model_max_eta_singular_value(const nscorr_model* model, double* out) {
  if (!model || !out) return invalid("NULL argument");
  return guarded([&] {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(model->corr.eta());
    *out = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  });
}

nscorr_status nscorr_model_json(const nscorr_model* model, char* buffer, size_t capacity,
                                size_t* needed) {
  if (!model) return invalid("model is NULL");
  std::string text;
  const nscorr_status st = guarded([&] { text = nscorr::to_json(model->corr).dump(); });
  if (st != NSCORR_OK) return st;
  return copy_string(text, buffer, capacity, needed);
}

nscorr_status nscorr_theory_density(const nscorr_model* model, int t, double epsilon,
                                    nscorr_curve** out) {
  if (!model || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] {
    if (t < model->corr.m()) {
      nscorr::fail(nscorr::ErrorCode::kParameterOutOfRange, "t must be at least m");
    }
    nscorr::SolverSettings settings;
    if (epsilon > 0.0) settings.epsilon = epsilon;
    const double kn = static_cast<double>(model->corr.n()) / t;
    const double km = static_cast<double>(model->corr.m()) / t;
    nscorr::SweepResult sweep =
        nscorr::sweep_density(model->corr.zeta_eigs(), kn, km, settings);
    *out = new nscorr_curve{std::move(sweep.curve)};
  });
}

nscorr_status nscorr_sample_spectrum(const nscorr_model* model, int t, uint64_t seed,
                                     uint64_t stream, double* out, size_t capacity) {
  if (!model || !out) return invalid("NULL argument");
  if (capacity < static_cast<size_t>(model->corr.n())) {
    return set_error(NSCORR_BUFFER_TOO_SMALL, "buffer too small");
  }
  return guarded([&] {
    nscorr::EnsembleConfig cfg{model->corr.n(), model->corr.m(), t, 1, seed};
    nscorr::EnsembleSampler sampler(model->corr, cfg);
    const auto eigs = sampler.spectrum(stream);
    std::copy(eigs.begin(), eigs.end(), out);
  });
}

void nscorr_curve_destroy(nscorr_curve* curve) { delete curve; }

size_t nscorr_curve_size(const nscorr_curve* curve) {
  return curve ? curve->curve.grid.size() : 0;
}

nscorr_status nscorr_curve_data(const nscorr_curve* curve, const double** grid,
                                const double** rho, size_t* size) {
  if (!curve) return invalid("curve is NULL");
  if (grid) *grid = curve->curve.grid.data();
  if (rho) *rho = curve->curve.rho.data();
  if (size) *size = curve->curve.grid.size();
  return NSCORR_OK;
}

nscorr_status nscorr_curve_integral(const nscorr_curve* curve, double* out) {
  if (!curve || !out) return invalid("NULL argument");
  *out = curve->curve.integral();
  return NSCORR_OK;
}

nscorr_status nscorr_curve_moment(const nscorr_curve* curve, int order, double* out) {
  if (!curve || !out) return invalid("NULL argument");
  return guarded([&] { *out = nscorr::density_moment(curve->curve, order); });
}

nscorr_status nscorr_curve_write_csv(const nscorr_curve* curve, const char* path) {
  if (!curve || !path) return invalid("NULL argument");
  return guarded([&] { nscorr::write_curve_csv(path, curve->curve); });
}

nscorr_status nscorr_config_load(const char* path, nscorr_config** out) {
  if (!path || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new nscorr_config{nscorr::validate_config(path)}; });
}

nscorr_status nscorr_config_preset(const char* name, nscorr_config** out) {
  if (!name || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new nscorr_config{nscorr::preset_config(name)}; });
}

void nscorr_config_destroy(nscorr_config* config) { delete config; }

nscorr_status nscorr_config_set_mode(nscorr_config* config, nscorr_mode mode) {
  if (!config) return invalid("config is NULL");
  switch (mode) {
    case NSCORR_MODE_THEORY_ONLY:
      config->config.mode = nscorr::RunMode::kTheoryOnly;
      return NSCORR_OK;
    case NSCORR_MODE_MC_ONLY:
      config->config.mode = nscorr::RunMode::kMcOnly;
      return NSCORR_OK;
    case NSCORR_MODE_FULL:
      config->config.mode = nscorr::RunMode::kFull;
      return NSCORR_OK;
  }
  return invalid("unknown mode");
}

nscorr_status nscorr_config_set_seed(nscorr_config* config, uint64_t seed) {
  if (!config) return invalid("config is NULL");
  config->config.seed = seed;
  return NSCORR_OK;
}

nscorr_status nscorr_config_set_output_dir(nscorr_config* config, const char* path) {
  if (!config || !path || !*path) return invalid("config or path is empty");
  config->config.outputs = path;
  return NSCORR_OK;
}

nscorr_status nscorr_config_set_threads(nscorr_config* config, int threads) {
  if (!config || threads < 0) return invalid("invalid thread count");
  config->config.threads = threads;
  return NSCORR_OK;
}

nscorr_status nscorr_config_json(const nscorr_config* config, char* buffer,
                                 size_t capacity, size_t* needed) {
  if (!config) return invalid("config is NULL");
  std::string text;
  const nscorr_status st = guarded([&] { text = nscorr::to_json(config->config).dump(2); });
  if (st != NSCORR_OK) return st;
  return copy_string(text, buffer, capacity, needed);
}

nscorr_status nscorr_parse_mode(const char* name, nscorr_mode* out) {
  if (!name || !out) return invalid("NULL argument");
  return guarded([&] {
    switch (nscorr::parse_run_mode(name)) {
      case nscorr::RunMode::kTheoryOnly:
        *out = NSCORR_MODE_THEORY_ONLY;
        break;
      case nscorr::RunMode::kMcOnly:
        *out = NSCORR_MODE_MC_ONLY;
        break;
      case nscorr::RunMode::kFull:
        *out = NSCORR_MODE_FULL;
        break;
    }
  });
}

size_t nscorr_preset_count(void) { return nscorr::preset_names().size(); }

const char* nscorr_preset_name(size_t index) {
  static const std::vector<std::string> names = nscorr::preset_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

nscorr_status nscorr_run_experiment(const nscorr_config* config, nscorr_run** out) {
  if (!config || !out) return invalid("NULL argument");
  *out = nullptr;
  return guarded([&] { *out = new nscorr_run{nscorr::run_experiment(config->config)}; });
}

void nscorr_run_destroy(nscorr_run* run) { delete run; }

int nscorr_run_exit_code(const nscorr_run* run) { return run ? run->result.exit_code : 2; }

const char* nscorr_run_summary(const nscorr_run* run) {
  return run ? run->result.summary.c_str() : "";
}

const char* nscorr_run_manifest_path(const nscorr_run* run) {
  return run ? run->result.manifest_path.c_str() : "";
}

}  // extern "C"
