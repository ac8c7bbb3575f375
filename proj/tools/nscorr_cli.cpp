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

// Command-line front end. Talks to the library only through nscorr.h.
//
//   nscorr run <config> [--mode M] [--seed S] [--out DIR] [--preset NAME]
//   nscorr validate <config> | --preset NAME
//   nscorr presets

#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nscorr/nscorr.h"

namespace {

constexpr int kExitConfig = 2;

struct ConfigDeleter {
  void operator()(nscorr_config* c) const { nscorr_config_destroy(c); }
};
struct RunDeleter {
  void operator()(nscorr_run* r) const { nscorr_run_destroy(r); }
};
using ConfigPtr = std::unique_ptr<nscorr_config, ConfigDeleter>;
using RunPtr = std::unique_ptr<nscorr_run, RunDeleter>;

int report_failure(nscorr_status status) {
  std::fprintf(stderr, "error [%s]: %s\n", nscorr_status_name(status), nscorr_last_error());
  return nscorr_status_exit_code(status);
}

std::optional<ConfigPtr> load(const std::string& path, const std::string& preset, int* exit) {
  nscorr_config* raw = nullptr;
  nscorr_status st;
  if (!preset.empty() && !path.empty()) {
    std::fprintf(stderr, "error: give either a config file or --preset, not both\n");
    *exit = kExitConfig;
    return std::nullopt;
  }
  if (!preset.empty()) {
    st = nscorr_config_preset(preset.c_str(), &raw);
  } else if (!path.empty()) {
    st = nscorr_config_load(path.c_str(), &raw);
  } else {
    std::fprintf(stderr, "error: a config file or --preset is required\n");
    *exit = kExitConfig;
    return std::nullopt;
  }
  if (st != NSCORR_OK) {
    *exit = report_failure(st);
    return std::nullopt;
  }
  return ConfigPtr(raw);
}

std::string config_json(const nscorr_config* config) {
  size_t needed = 0;
  nscorr_config_json(config, nullptr, 0, &needed);
  std::string text(needed, '\0');
  if (nscorr_config_json(config, text.data(), text.size(), &needed) != NSCORR_OK) return {};
  text.resize(needed - 1);
  return text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral density of nonsymmetric correlation matrices: theory vs Monte Carlo"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nscorr_version()));

  std::string run_config, run_preset, run_mode, run_out;
  std::optional<std::uint64_t> run_seed;
  int run_threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  run->add_option("config", run_config, "TOML or JSON experiment config");
  run->add_option("--preset", run_preset, "Use a built-in preset instead of a file");
  run->add_option("--mode", run_mode, "TheoryOnly, McOnly or Full")
      ->check(CLI::IsMember({"TheoryOnly", "McOnly", "Full"}));
  run->add_option("--seed", run_seed, "Override the RNG seed");
  run->add_option("--out", run_out, "Override the output directory");
  run->add_option("--threads", run_threads,
                  "Worker threads (0: NSCORR_THREADS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  std::string val_config, val_preset;
  auto* validate = app.add_subcommand("validate", "Check a config and print its normalized form");
  validate->add_option("config", val_config, "TOML or JSON experiment config");
  validate->add_option("--preset", val_preset, "Validate a built-in preset");

  auto* presets = app.add_subcommand("presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (presets->parsed()) {
    for (size_t i = 0; i < nscorr_preset_count(); ++i) {
      std::printf("%s\n", nscorr_preset_name(i));
    }
    return 0;
  }

  int exit = 0;
  if (validate->parsed()) {
    auto config = load(val_config, val_preset, &exit);
    if (!config) return exit;
    std::printf("%s\n", config_json(config->get()).c_str());
    return 0;
  }

  auto config = load(run_config, run_preset, &exit);
  if (!config) return exit;
  nscorr_config* cfg = config->get();
  if (!run_mode.empty()) {
    nscorr_mode mode;
    nscorr_status st = nscorr_parse_mode(run_mode.c_str(), &mode);
    if (st == NSCORR_OK) st = nscorr_config_set_mode(cfg, mode);
    if (st != NSCORR_OK) return report_failure(st);
  }
  if (run_seed) nscorr_config_set_seed(cfg, *run_seed);
  if (!run_out.empty()) nscorr_config_set_output_dir(cfg, run_out.c_str());
  if (run_threads > 0) nscorr_config_set_threads(cfg, run_threads);

  nscorr_run* raw = nullptr;
  const nscorr_status st = nscorr_run_experiment(cfg, &raw);
  if (st != NSCORR_OK) return report_failure(st);
  RunPtr result(raw);
  std::fputs(nscorr_run_summary(result.get()), stdout);
  return nscorr_run_exit_code(result.get());
}
