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

#include "nscorr/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "nscorr/ensemble.hpp"
#include "nscorr/spectra.hpp"
#include "presets.hpp"

namespace nscorr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json toml_to_json(const toml::node& node, std::vector<std::string>& problems,
                  const std::string& where) {
  if (const auto* tbl = node.as_table()) {
    json out = json::object();
    for (const auto& [key, value] : *tbl) {
      const std::string k(key.str());
      out[k] = toml_to_json(value, problems, where.empty() ? k : where + "." + k);
    }
    return out;
  }
  if (const auto* arr = node.as_array()) {
    json out = json::array();
    for (const auto& value : *arr) out.push_back(toml_to_json(value, problems, where));
    return out;
  }
  if (const auto* v = node.as_string()) return v->get();
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) return v->get();
  if (const auto* v = node.as_boolean()) return v->get();
  problems.push_back(where + ": unsupported value type");
  return nullptr;
}

// Field-by-field reader that records problems instead of throwing.
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::vector<std::string>& problems)
      : obj_(obj), prefix_(std::move(prefix)), problems_(problems) {
    if (!obj_.is_object()) problems_.push_back(path("") + " must be a table");
  }

  bool has(const char* key) const { return obj_.is_object() && obj_.contains(key); }

  template <typename T>
  void number(const char* key, T& out, bool required = false) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) problems_.push_back(path(key) + ": required field is missing");
      return;
    }
    const json& v = obj_.at(key);
    if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) {
        problems_.push_back(path(key) + ": expected a number");
        return;
      }
      out = v.get<double>();
    } else {
      if (!v.is_number_integer()) {
        problems_.push_back(path(key) + ": expected an integer");
        return;
      }
      if (v.is_number_unsigned()) {
        const auto u = v.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
          problems_.push_back(path(key) + ": value out of range");
          return;
        }
        out = static_cast<T>(u);
      } else {
        const auto s = v.get<std::int64_t>();
        if (s < 0 && std::is_unsigned_v<T>) {
          problems_.push_back(path(key) + ": must be nonnegative");
          return;
        }
        if (std::is_signed_v<T> &&
            (s > static_cast<std::int64_t>(std::numeric_limits<int>::max()) ||
             s < std::numeric_limits<int>::min())) {
          problems_.push_back(path(key) + ": value out of range");
          return;
        }
        out = static_cast<T>(s);
      }
    }
  }

  void text(const char* key, std::string& out, bool required = false) {
    seen_.insert(key);
    if (!has(key)) {
      if (required) problems_.push_back(path(key) + ": required field is missing");
      return;
    }
    const json& v = obj_.at(key);
    if (!v.is_string()) {
      problems_.push_back(path(key) + ": expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  void flag(const char* key, bool& out) {
    seen_.insert(key);
    if (!has(key)) return;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) {
      problems_.push_back(path(key) + ": expected a boolean");
      return;
    }
    out = v.get<bool>();
  }

  const json* table(const char* key) {
    seen_.insert(key);
    if (!has(key)) return nullptr;
    return &obj_.at(key);
  }

  void reject_unknown() const {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) problems_.push_back(path(key) + ": unknown field");
    }
  }

  std::string path(const std::string& key) const {
    if (prefix_.empty()) return key.empty() ? "<root>" : key;
    return key.empty() ? prefix_ : prefix_ + "." + key;
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void check(bool ok, std::vector<std::string>& problems, std::string message) {
  if (!ok) problems.push_back(std::move(message));
}

ExperimentConfig from_json(const json& root) {
  std::vector<std::string> problems;
  ExperimentConfig cfg;
  Reader top(root, "", problems);
  top.text("name", cfg.name);
  std::string mode = run_mode_name(cfg.mode);
  top.text("mode", mode);
  top.number("seed", cfg.seed);
  top.number("n_samples", cfg.n_samples);
  top.number("threads", cfg.threads);
  top.text("outputs", cfg.outputs);
  std::string spectra = "none";
  top.text("spectra", spectra);

  try {
    cfg.mode = parse_run_mode(mode);
  } catch (const Error& e) {
    problems.push_back(std::string("mode: ") + e.what());
  }
  if (spectra == "none") {
    cfg.spectra = SpectraDump::kNone;
  } else if (spectra == "csv") {
    cfg.spectra = SpectraDump::kCsv;
  } else if (spectra == "binary") {
    cfg.spectra = SpectraDump::kBinary;
  } else {
    problems.push_back("spectra: expected one of none, csv, binary");
  }
  check(cfg.n_samples >= 1, problems, "n_samples: must be positive");
  check(cfg.threads >= 0, problems, "threads: must be nonnegative");
  check(!cfg.outputs.empty(), problems, "outputs: must not be empty");
  check(!cfg.name.empty(), problems, "name: must not be empty");

  if (const json* model = top.table("model")) {
    Reader r(*model, "model", problems);
    r.number("a", cfg.model.a, true);
    r.number("b", cfg.model.b, true);
    r.number("c", cfg.model.c, true);
    std::string kind;
    r.text("cross_kind", kind, true);
    if (!kind.empty()) {
      try {
        cfg.model.kind = parse_cross_kind(kind);
      } catch (const Error& e) {
        problems.push_back(std::string("model.cross_kind: ") + e.what());
      }
    }
    r.reject_unknown();
    check(cfg.model.a > 0.0 && cfg.model.a < 1.0, problems, "model.a: must lie in (0,1)");
    check(cfg.model.b > 0.0 && cfg.model.b < 1.0, problems, "model.b: must lie in (0,1)");
    check(cfg.model.c >= 0.0 && cfg.model.c < 1.0, problems, "model.c: must lie in [0,1)");
  } else {
    problems.push_back("model: required table is missing");
  }

  if (const json* dims = top.table("dims")) {
    Reader r(*dims, "dims", problems);
    int n = 0, m = 0, t = 0, total = 0;
    double t_factor = 5.0;
    r.number("n", n, true);
    r.number("m", m);
    r.number("total", total);
    r.number("t", t);
    r.number("t_factor", t_factor);
    r.reject_unknown();
    const bool has_m = r.has("m"), has_total = r.has("total");
    if (!has_m && !has_total) {
      problems.push_back("dims: give either m or total");
    } else if (has_m && has_total && total != n + m) {
      problems.push_back("dims.total: inconsistent with n + m");
    } else if (!has_m) {
      m = total - n;
    }
    check(t_factor > 0.0, problems, "dims.t_factor: must be positive");
    if (!r.has("t")) {
      const double scaled = t_factor * (n + m);
      t = static_cast<int>(std::llround(scaled));
      check(std::abs(scaled - t) < 1e-9, problems,
            "dims.t_factor: t_factor * (n + m) must be an integer");
    } else if (r.has("t_factor") && std::abs(t_factor * (n + m) - t) > 1e-9) {
      problems.push_back("dims.t: inconsistent with t_factor * (n + m)");
    }
    check(n >= 1, problems, "dims.n: must be positive");
    check(m >= 1, problems, "dims.m: must be positive");
    check(m >= n, problems, "dims: requires m >= n");
    check(t >= m, problems, "dims: requires t >= m");
    cfg.model.n = n;
    cfg.model.m = m;
    cfg.t = t;
  } else {
    problems.push_back("dims: required table is missing");
  }

  // Emitted by to_json; accepted back when it agrees with the dims.
  if (const json* derived = top.table("derived")) {
    Reader r(*derived, "derived", problems);
    double kn = cfg.kappa_n(), km = cfg.kappa_m();
    r.number("kappa_n", kn);
    r.number("kappa_m", km);
    r.reject_unknown();
    if (cfg.t > 0) {
      check(std::abs(kn - cfg.kappa_n()) <= 1e-12 && std::abs(km - cfg.kappa_m()) <= 1e-12,
            problems, "derived: kappa values disagree with dims");
    }
  }

  if (const json* solver = top.table("solver")) {
    Reader r(*solver, "solver", problems);
    SolverSettings& s = cfg.solver;
    r.number("epsilon", s.epsilon);
    r.number("damping", s.damping);
    r.number("tol", s.tol);
    r.number("max_iter", s.max_iter);
    r.number("grid_points", s.grid_points);
    r.number("max_clipped_mass", s.max_clipped_mass);
    r.flag("newton_fallback", s.newton_fallback);
    r.number("picard_budget", s.picard_budget);
    r.number("detect_epsilon", s.detect_epsilon);
    r.number("detect_threshold", s.detect_threshold);
    r.number("detect_points", s.detect_points);
    r.number("tail_threshold", s.tail_threshold);
    r.reject_unknown();
    try {
      s.validate();
    } catch (const Error& e) {
      problems.push_back(std::string("solver: ") + e.what());
    }
  }

  if (const json* thr = top.table("thresholds")) {
    Reader r(*thr, "thresholds", problems);
    Thresholds& t = cfg.thresholds;
    r.number("max_l1", t.max_l1);
    r.number("normalization_tol", t.normalization_tol);
    r.number("first_moment_rel_tol", t.first_moment_rel_tol);
    r.number("min_single_outlier_fraction", t.min_single_outlier_fraction);
    r.number("max_cubic_deviation", t.max_cubic_deviation);
    r.reject_unknown();
    check(t.max_l1 > 0.0 && t.normalization_tol > 0.0 && t.first_moment_rel_tol > 0.0 &&
              t.max_cubic_deviation > 0.0,
          problems, "thresholds: tolerances must be positive");
    check(t.min_single_outlier_fraction >= 0.0 && t.min_single_outlier_fraction <= 1.0,
          problems, "thresholds.min_single_outlier_fraction: must lie in [0,1]");
  }
  top.reject_unknown();
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Writer {
  fs::path dir;
  std::vector<ArtifactEntry> entries;

  std::string target(const std::string& name) const { return (dir / name).string(); }

  void record(const std::string& name) {
    ArtifactEntry entry;
    entry.path = name;
    entry.sha256 = sha256_file(target(name));
    entry.bytes = fs::file_size(target(name));
    entries.push_back(entry);
  }

  void json_file(const std::string& name, const json& doc) {
    std::ofstream out(target(name), std::ios::binary);
    if (!out) fail(ErrorCode::kIoError, "cannot open " + target(name));
    out << doc.dump(2) << '\n';
    if (!out) fail(ErrorCode::kIoError, "failed writing " + target(name));
    out.close();
    record(name);
  }

  void curve(const std::string& name, const DensityCurve& c) {
    write_curve_csv(target(name), c);
    record(name);
  }
};

}  // namespace

const char* run_mode_name(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::kTheoryOnly:
      return "TheoryOnly";
    case RunMode::kMcOnly:
      return "McOnly";
    case RunMode::kFull:
      return "Full";
  }
  return "Full";
}

RunMode parse_run_mode(const std::string& name) {
  if (name == "TheoryOnly") return RunMode::kTheoryOnly;
  if (name == "McOnly") return RunMode::kMcOnly;
  if (name == "Full") return RunMode::kFull;
  fail(ErrorCode::kConfigInvalid,
       "unknown mode '" + name + "' (expected TheoryOnly, McOnly or Full)");
}

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCode::kConfigInvalid,
            [&] {
              std::string msg = "invalid config:";
              for (const auto& p : problems) msg += "\n  " + p;
              return msg;
            }()),
      problems_(std::move(problems)) {}

ExperimentConfig parse_config(const std::string& text, ConfigFormat format,
                              const std::string& origin) {
  json root;
  if (format == ConfigFormat::kJson) {
    try {
      root = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError({origin + ": " + e.what()});
    }
  } else {
    std::vector<std::string> problems;
    try {
      const toml::table tbl = toml::parse(text, origin);
      root = toml_to_json(tbl, problems, "");
    } catch (const toml::parse_error& e) {
      std::ostringstream msg;
      msg << origin << ":" << e.source().begin.line << ": " << e.description();
      throw ConfigError({msg.str()});
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));
  }
  return from_json(root);
}

ExperimentConfig validate_config(const std::string& path) {
  if (!fs::exists(path)) throw ConfigError({path + ": file does not exist"});
  const std::string ext = fs::path(path).extension().string();
  return parse_config(read_file(path), ext == ".json" ? ConfigFormat::kJson : ConfigFormat::kToml,
                      path);
}

json to_json(const ExperimentConfig& c) {
  const SolverSettings& s = c.solver;
  const Thresholds& t = c.thresholds;
  const char* spectra = c.spectra == SpectraDump::kCsv      ? "csv"
                        : c.spectra == SpectraDump::kBinary ? "binary"
                                                            : "none";
  return {{"name", c.name},
          {"mode", run_mode_name(c.mode)},
          {"seed", c.seed},
          {"n_samples", c.n_samples},
          {"threads", c.threads},
          {"outputs", c.outputs},
          {"spectra", spectra},
          {"model",
           {{"a", c.model.a},
            {"b", c.model.b},
            {"c", c.model.c},
            {"cross_kind", cross_kind_name(c.model.kind)}}},
          {"dims", {{"n", c.n()}, {"m", c.m()}, {"t", c.t}}},
          {"derived", {{"kappa_n", c.kappa_n()}, {"kappa_m", c.kappa_m()}}},
          {"solver",
           {{"epsilon", s.epsilon},
            {"damping", s.damping},
            {"tol", s.tol},
            {"max_iter", s.max_iter},
            {"grid_points", s.grid_points},
            {"max_clipped_mass", s.max_clipped_mass},
            {"newton_fallback", s.newton_fallback},
            {"picard_budget", s.picard_budget},
            {"detect_epsilon", s.detect_epsilon},
            {"detect_threshold", s.detect_threshold},
            {"detect_points", s.detect_points},
            {"tail_threshold", s.tail_threshold}}},
          {"thresholds",
           {{"max_l1", t.max_l1},
            {"normalization_tol", t.normalization_tol},
            {"first_moment_rel_tol", t.first_moment_rel_tol},
            {"min_single_outlier_fraction", t.min_single_outlier_fraction},
            {"max_cubic_deviation", t.max_cubic_deviation}}}};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::embedded_presets()) names.emplace_back(name);
  return names;
}

std::string preset_text(const std::string& name) {
  for (const auto& [key, text] : detail::embedded_presets()) {
    if (key == name) return std::string(text);
  }
  throw ConfigError({"unknown preset '" + name + "'"});
}

ExperimentConfig preset_config(const std::string& name) {
  return parse_config(preset_text(name), ConfigFormat::kToml, "preset:" + name);
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk:
      return 0;
    case ErrorCode::kParameterOutOfRange:
    case ErrorCode::kModelNotPositiveDefinite:
    case ErrorCode::kNonSymmetricInput:
    case ErrorCode::kDimensionMismatch:
    case ErrorCode::kConfigInvalid:
    case ErrorCode::kIoError:
      return 2;
    default:
      return 3;
  }
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    fail(ErrorCode::kInternal, "SHA-256 initialisation failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.solver.validate();
  const PartitionedCorrelation corr = build_equal_cross(config.model);
  const double analytic_m1 = config.kappa_m() + corr.zeta_mean();
  const bool want_theory = config.mode != RunMode::kMcOnly;
  const bool want_mc = config.mode != RunMode::kTheoryOnly;
  const bool rank_one = config.model.kind == CrossKind::kRankOne && config.model.c > 0.0;

  RunResult result;
  ComparisonReport& report = result.report;
  const PasturModel pmodel =
      PasturModel::from_eigs(corr.zeta_eigs(), config.kappa_n(), config.kappa_m());

  Writer out{fs::path(config.outputs), {}};
  std::error_code ec;
  fs::create_directories(out.dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + config.outputs + ": " + ec.message());

  json normalized = to_json(config);
  normalized.erase("threads");
  out.json_file("config.json", normalized);
  out.json_file("model.json", to_json(corr));

  std::optional<double> threshold;  // separation threshold from theory
  std::optional<double> cubic_dev;
  if (want_theory) {
    SweepResult sweep = sweep_density(pmodel, config.solver);
    const SweepDiagnostics& d = sweep.diagnostics;
    const HerglotzReport herg = check_herglotz(pmodel, sweep, config.solver);
    if (pmodel.null_model()) {
      double dev = 0.0;
      for (const auto& st : sweep.states) {
        dev = std::max(dev, std::abs(st.G - cubic_G_zeta0(st.z, pmodel.kn, pmodel.km)));
      }
      cubic_dev = dev;
    }
    json diag = to_json(d);
    diag["conjugate_symmetry_defect"] = herg.max_conjugate_defect;
    diag["cubic_max_deviation"] = cubic_dev ? json(*cubic_dev) : json(nullptr);
    out.curve("theory.csv", sweep.curve);
    out.json_file("solver_diagnostics.json", diag);

    report.normalization_defect = d.integral - 1.0;
    report.add_check("theory_normalization", std::abs(d.integral - 1.0),
                     config.thresholds.normalization_tol);
    report.add_check("theory_first_moment_rel",
                     std::abs(d.first_moment - analytic_m1) / std::abs(analytic_m1),
                     config.thresholds.first_moment_rel_tol);
    report.add_check("clipped_mass", d.clipped_mass, config.solver.max_clipped_mass);
    report.add_check("herglotz_violations", herg.sign_ok && d.herglotz_ok ? 0.0 : 1.0, 0.0);
    if (cubic_dev) {
      report.add_check("cubic_max_deviation", *cubic_dev, config.thresholds.max_cubic_deviation);
    }
    if (d.support) threshold = d.support->separation_threshold();
    result.theory = std::move(sweep);
  }

  std::vector<std::vector<double>> eigs;
  if (want_mc) {
    EnsembleConfig ecfg{config.n(), config.m(), config.t, config.n_samples, config.seed};
    EnsembleSampler sampler(corr, ecfg);
    eigs = sampler.spectra(config.threads);
    if (config.spectra == SpectraDump::kCsv) {
      write_spectra_csv(out.target("spectra.csv"), eigs);
      out.record("spectra.csv");
    } else if (config.spectra == SpectraDump::kBinary) {
      write_spectra_binary(out.target("spectra.bin"), eigs);
      out.record("spectra.bin");
    }

    const double edge = threshold.value_or(pooled_quantile(eigs, 0.999));
    const bool split = rank_one && (!result.theory || result.theory->diagnostics.support->has_island_above());
    if (rank_one) {
      OutlierStats stats = outlier_stats(eigs, edge);
      json doc = to_json(stats);
      doc["edge_source"] = threshold ? "theory" : "pooled_quantile_0.999";
      if (result.theory) {
        doc["theory_bulk_upper_edge"] = result.theory->diagnostics.support->bulk().hi;
      }
      out.json_file("outliers.json", doc);
      report.add_check("single_outlier_fraction", stats.fraction_single_above,
                       config.thresholds.min_single_outlier_fraction, false);
      result.outliers = std::move(stats);
    }
    const auto bulk = split ? remove_above(eigs, edge) : eigs;
    result.empirical = empirical_density(bulk);
    out.curve("empirical.csv", *result.empirical);

    if (result.theory) {
      const DensityCurve theory_bulk =
          split ? restrict_below(result.theory->curve, edge) : result.theory->curve;
      if (split) out.curve("theory_bulk.csv", theory_bulk);
      const CurveDistance dist = histogram_distance(*result.empirical, theory_bulk);
      report.l1_distance = dist.l1;
      report.sup_distance = dist.sup;
      report.add_check("bulk_l1_distance", dist.l1, config.thresholds.max_l1);
    }
  }

  // Theory moments over the detected support widened by 20 smoothing widths.
  std::optional<DensityCurve> theory_window;
  if (result.theory && result.theory->diagnostics.support) {
    const SupportInfo& s = *result.theory->diagnostics.support;
    const double pad = 20.0 * result.theory->diagnostics.epsilon;
    theory_window = restrict_to(result.theory->curve, s.lower() - pad, s.upper() + pad);
  }
  report.moment_table = moment_table(theory_window ? &*theory_window : nullptr,
                                     want_mc ? &eigs : nullptr, analytic_m1);
  result.exit_code = report.pass() ? 0 : 1;
  json report_doc = to_json(report);
  report_doc["analytic_first_moment"] = analytic_m1;
  out.json_file("report.json", report_doc);

  json files = json::array();
  for (const auto& e : out.entries) {
    files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  }
  const json manifest = {{"name", config.name},
                         {"mode", run_mode_name(config.mode)},
                         {"seed", config.seed},
                         {"exit_code", result.exit_code},
                         {"pass", report.pass()},
                         {"files", files}};
  result.manifest_path = out.target("manifest.json");
  {
    std::ofstream mf(result.manifest_path, std::ios::binary);
    if (!mf) fail(ErrorCode::kIoError, "cannot open " + result.manifest_path);
    mf << manifest.dump(2) << '\n';
  }
  result.artifacts = out.entries;

  std::ostringstream summary;
  summary << std::setprecision(6) << "experiment " << config.name << " ("
          << run_mode_name(config.mode) << ")\n"
          << "  n=" << config.n() << " m=" << config.m() << " t=" << config.t
          << " kappa_n=" << config.kappa_n() << " kappa_m=" << config.kappa_m()
          << " mean(zeta)=" << corr.zeta_mean() << '\n';
  if (result.theory && result.theory->diagnostics.support) {
    const SupportInfo& s = *result.theory->diagnostics.support;
    summary << "  theory bulk [" << s.bulk().lo << ", " << s.bulk().hi << "]";
    if (s.has_island_above()) summary << ", separation threshold " << s.separation_threshold();
    summary << '\n';
  }
  if (result.outliers) {
    const OutlierStats& o = *result.outliers;
    summary << "  largest eigenvalue: mean " << o.mean << " variance " << o.variance
            << " skewness " << o.skewness << " excess kurtosis " << o.excess_kurtosis
            << '\n';
  }
  summary << summarize(report) << "manifest: " << result.manifest_path << '\n';
  result.summary = summary.str();
  return result;
}

}  // namespace nscorr
