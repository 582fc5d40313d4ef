// Copyright 2026 The flocvar Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. Talks to the library only through the C interface.

#include <CLI11.hpp>
#include <flocvar/flocvar.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <system_error>

namespace {

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};

using Series = std::unique_ptr<flv_series, Deleter<flv_series, flv_series_destroy>>;
using Model = std::unique_ptr<flv_model, Deleter<flv_model, flv_model_destroy>>;
using Report = std::unique_ptr<flv_report, Deleter<flv_report, flv_report_destroy>>;
using McReport = std::unique_ptr<flv_mc_report, Deleter<flv_mc_report, flv_mc_report_destroy>>;
using Diagnostics =
    std::unique_ptr<flv_diagnostics, Deleter<flv_diagnostics, flv_diagnostics_destroy>>;

// Carries a failed library status up to main.
struct Failure {
  flv_status status;
  std::string message;
};

void check(flv_status status) {
  if (status != FLV_OK) throw Failure{status, flv_last_error()};
}

void fail_validation(const std::string& message) { throw Failure{FLV_ERR_VALIDATION, message}; }

int exit_code(flv_status status) {
  switch (status) {
    case FLV_OK: return 0;
    case FLV_ERR_NUMERICAL: return 2;
    case FLV_ERR_INTERNAL: return 3;
    default: return 1;
  }
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Failure{FLV_ERR_IO, "cannot create directory " + dir + ": " + ec.message()};
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

Series read_series(const std::string& path) {
  flv_series* raw = nullptr;
  check(flv_series_read_csv(path.c_str(), &raw));
  return Series(raw);
}

double b_or_default(const std::optional<double>& b) {
  return b ? *b : std::numeric_limits<double>::quiet_NaN();
}

void print_ks(const flv_diagnostics* diag) {
  for (std::size_t j = 0; j < flv_diagnostics_columns(diag); ++j) {
    double stat = 0.0, p = 0.0, params[4];
    check(flv_diagnostics_ks(diag, j, &stat, &p, params));
    std::printf("column %zu: alpha=%.4f beta=%.4f sigma=%.4g delta=%.4g KS D=%.4f p=%.3f\n", j + 1,
                params[0], params[1], params[2], params[3], stat, p);
  }
}

struct SimulateArgs {
  std::string config, out;
  std::optional<std::size_t> n, burn_in;
  std::optional<std::uint64_t> seed;
};

void run_simulate(const SimulateArgs& a) {
  flv_model* raw = nullptr;
  flv_sim_defaults defaults{};
  check(flv_model_load(a.config.c_str(), &raw, &defaults));
  Model model(raw);
  const std::size_t n = a.n ? *a.n : (defaults.has_length ? defaults.length : 0);
  if (n == 0) fail_validation("sample length missing: pass --n or set n in the config");
  const std::size_t burn_in = a.burn_in ? *a.burn_in : (defaults.has_burn_in ? defaults.burn_in : 500);
  const std::uint64_t seed = a.seed ? *a.seed : (defaults.has_seed ? defaults.seed : 1);
  flv_series* sim = nullptr;
  check(flv_simulate(model.get(), n, burn_in, seed, &sim));
  Series series(sim);
  check(flv_series_write_csv(series.get(), a.out.c_str()));
  std::printf("wrote %zu x %zu series to %s\n", n, flv_model_dim(model.get()), a.out.c_str());
}

struct EstimateArgs {
  std::string csv, out, summary;
  std::size_t order = 2;
  flv_method method = FLV_METHOD_FLOC;
  flv_normalizer normalizer = FLV_NORMALIZER_DEFAULT;
  std::optional<double> b_exp;
};

void run_estimate(const EstimateArgs& a) {
  Series series = read_series(a.csv);
  flv_estimate_options opts;
  flv_estimate_options_default(&opts);
  opts.method = a.method;
  opts.order = a.order;
  opts.b_exp = b_or_default(a.b_exp);
  opts.normalizer = a.normalizer;
  flv_report* raw = nullptr;
  check(flv_estimate(series.get(), &opts, &raw));
  Report report(raw);
  check(flv_report_write_csv(report.get(), a.out.c_str()));
  if (!a.summary.empty()) {
    check(flv_report_write_summary(report.get(), a.summary.c_str()));
  } else {
    check(flv_report_write_summary(report.get(), "/dev/stdout"));
  }
}

struct MonteCarloArgs {
  std::string config, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replications;
  std::optional<unsigned> threads;
};

void run_montecarlo(const MonteCarloArgs& a) {
  flv_mc_overrides ov{};
  if (a.seed) ov.has_seed = 1, ov.seed = *a.seed;
  if (a.replications) ov.has_replications = 1, ov.replications = *a.replications;
  if (a.threads) ov.has_threads = 1, ov.threads = *a.threads;
  flv_mc_report* raw = nullptr;
  check(flv_montecarlo_run(a.config.c_str(), &ov, &raw));
  McReport report(raw);
  make_dir(a.out_dir);
  const auto table = join(a.out_dir, "table.csv");
  const auto long_form = join(a.out_dir, "cells.csv");
  check(flv_mc_report_write(report.get(), table.c_str(), long_form.c_str()));
  std::printf("wrote %s and %s\n", table.c_str(), long_form.c_str());
}

struct DiagnoseArgs {
  std::string csv, report, out_dir;
  std::optional<double> b_exp;
  flv_diag_options opts;
};

void run_diagnose(const DiagnoseArgs& a) {
  Series series = read_series(a.csv);
  flv_report* raw = nullptr;
  check(flv_report_load_csv(a.report.c_str(), &raw));
  Report fitted(raw);
  flv_diag_options opts = a.opts;
  opts.b_exp = b_or_default(a.b_exp);
  flv_diagnostics* diag_raw = nullptr;
  check(flv_diagnose(series.get(), fitted.get(), &opts, &diag_raw));
  Diagnostics diag(diag_raw);
  check(flv_diagnostics_write(diag.get(), a.out_dir.c_str()));
  print_ks(diag.get());
}

struct PipelineArgs {
  std::string csv, out_dir;
  std::size_t order = 2;
  std::optional<double> b_exp;
  flv_diag_options opts;
};

void run_pipeline(const PipelineArgs& a) {
  Series series = read_series(a.csv);
  flv_report* est_raw = nullptr;
  flv_diagnostics* diag_raw = nullptr;
  check(flv_pipeline_run(series.get(), a.order, b_or_default(a.b_exp), &a.opts, &est_raw,
                         &diag_raw));
  Report estimate(est_raw);
  Diagnostics diag(diag_raw);
  make_dir(a.out_dir);
  check(flv_report_write_csv(estimate.get(), join(a.out_dir, "estimate.csv").c_str()));
  check(flv_report_write_summary(estimate.get(), join(a.out_dir, "summary.txt").c_str()));
  check(flv_diagnostics_write(diag.get(), join(a.out_dir, "diagnostics").c_str()));
  print_ks(diag.get());
}

void add_diag_options(CLI::App* cmd, flv_diag_options& opts, std::optional<double>& b_exp) {
  flv_diag_options_default(&opts);
  cmd->add_option("--seed", opts.seed, "Seed for the null band and KS bootstrap");
  cmd->add_option("--reps", opts.ks_repetitions, "KS Monte Carlo repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--band-reps", opts.band_replicates, "Null band replicates (0 disables)");
  cmd->add_option("--max-lag", opts.max_lag, "Largest auto-FLOC lag");
  cmd->add_option("--qq-grid", opts.qq_grid, "Number of QQ probability levels")->check(CLI::PositiveNumber);
  cmd->add_option("--b-exp", b_exp, "Auto-FLOC exponent (default: fitted alpha - 1.05)")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable-noise VAR simulation, FLOC estimation and diagnostics"};
  app.set_version_flag("--version", std::string(flv_version()));
  app.require_subcommand(1);

  const std::map<std::string, flv_method> methods{
      {"floc", FLV_METHOD_FLOC}, {"ls", FLV_METHOD_LS}, {"yw", FLV_METHOD_YW}};
  const std::map<std::string, flv_normalizer> normalizers{{"default", FLV_NORMALIZER_DEFAULT},
                                                          {"window", FLV_NORMALIZER_WINDOW},
                                                          {"full", FLV_NORMALIZER_FULL}};

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Simulate a VAR model to CSV");
  simulate->add_option("--config", sim.config, "Model config (key = value)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out, "Output CSV")->required();
  simulate->add_option("--n", sim.n, "Sample length (overrides config)")->check(CLI::PositiveNumber);
  simulate->add_option("--burn-in", sim.burn_in, "Discarded warm-up steps (overrides config)");
  simulate->add_option("--seed", sim.seed, "Random seed (overrides config)");

  EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate VAR coefficients from a CSV series");
  estimate->add_option("csv", est.csv, "Input series")->required()->check(CLI::ExistingFile);
  estimate->add_option("--order", est.order, "Autoregressive order")->check(CLI::PositiveNumber);
  estimate->add_option("--method", est.method, "floc, ls or yw")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  estimate->add_option("--b-exp", est.b_exp, "FLOC exponent B (default: fitted alpha - 1.05)")
      ->check(CLI::NonNegativeNumber);
  estimate->add_option("--normalizer", est.normalizer, "default, window or full")
      ->transform(CLI::CheckedTransformer(normalizers, CLI::ignore_case));
  estimate->add_option("--out", est.out, "Coefficient CSV")->required();
  estimate->add_option("--summary", est.summary, "Summary file (default: stdout)");

  MonteCarloArgs mc;
  auto* montecarlo = app.add_subcommand("montecarlo", "Run a Monte Carlo experiment");
  montecarlo->add_option("config", mc.config, "Experiment config")->required()->check(CLI::ExistingFile);
  montecarlo->add_option("--out-dir", mc.out_dir, "Directory for table.csv and cells.csv")->required();
  montecarlo->add_option("--seed", mc.seed, "Master seed (overrides config)");
  montecarlo->add_option("--replications", mc.replications, "Replications (overrides config)")
      ->check(CLI::PositiveNumber);
  montecarlo->add_option("--threads", mc.threads, "Worker threads (0: hardware)");

  DiagnoseArgs diag;
  auto* diagnose = app.add_subcommand("diagnose", "Residual diagnostics for a fitted report");
  diagnose->add_option("csv", diag.csv, "Input series")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--report", diag.report, "Coefficient CSV from estimate")->required()->check(CLI::ExistingFile);
  diagnose->add_option("--out-dir", diag.out_dir, "Output directory")->required();
  add_diag_options(diagnose, diag.opts, diag.b_exp);

  PipelineArgs pipe;
  auto* pipeline = app.add_subcommand("pipeline", "Fit, estimate with FLOC and diagnose in one step");
  pipeline->add_option("csv", pipe.csv, "Input series")->required()->check(CLI::ExistingFile);
  pipeline->add_option("--order", pipe.order, "Autoregressive order")->check(CLI::PositiveNumber);
  pipeline->add_option("--out-dir", pipe.out_dir, "Output directory")->required();
  add_diag_options(pipeline, pipe.opts, pipe.b_exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*simulate) run_simulate(sim);
    if (*estimate) run_estimate(est);
    if (*montecarlo) run_montecarlo(mc);
    if (*diagnose) run_diagnose(diag);
    if (*pipeline) run_pipeline(pipe);
  } catch (const Failure& f) {
    std::fprintf(stderr, "error: %s\n", f.message.c_str());
    return exit_code(f.status);
  }
  return 0;
}
