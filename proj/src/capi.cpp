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

#include "flocvar/flocvar.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "flocvar/error.hpp"
#include "flocvar/estimators.hpp"
#include "flocvar/experiments.hpp"
#include "flocvar/series.hpp"
#include "flocvar/stable.hpp"
#include "flocvar/var.hpp"

struct flv_series {
  flocvar::SeriesMatrix value;
};

struct flv_model {
  flocvar::VarModel value;
};

struct flv_report {
  flocvar::Method method = flocvar::Method::Floc;
  std::vector<Eigen::MatrixXd> coeffs;
  std::optional<flocvar::EstimationReport> full;  // absent when loaded from CSV
  std::string summary;
};

struct flv_mc_report {
  flocvar::MonteCarloReport value;
};

struct flv_diagnostics {
  flocvar::DiagnosticsReport value;
};

namespace {

thread_local std::string g_last_error;

// An I/O failure is reported as ValidationError by the core; the C layer
// tags file problems separately.
class IoError : public flocvar::Error {
 public:
  using flocvar::Error::Error;
};

flv_status fail(flv_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <class F>
flv_status guarded(F&& body) {
  try {
    body();
    return FLV_OK;
  } catch (const IoError& e) {
    return fail(FLV_ERR_IO, e.what());
  } catch (const flocvar::ValidationError& e) {
    return fail(FLV_ERR_VALIDATION, e.what());
  } catch (const flocvar::NumericalError& e) {
    return fail(FLV_ERR_NUMERICAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(FLV_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FLV_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FLV_ERR_INTERNAL, "unknown error");
  }
}

void require(bool condition, const char* message) {
  if (!condition) throw flocvar::ValidationError(message);
}

std::ifstream open_input(const char* path) {
  require(path != nullptr, "null path");
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot open ") + path);
  return in;
}

std::ofstream open_output(const char* path) {
  require(path != nullptr, "null path");
  std::ofstream out(path);
  if (!out) throw IoError(std::string("cannot open ") + path + " for writing");
  return out;
}

flocvar::Method to_method(flv_method m) {
  switch (m) {
    case FLV_METHOD_FLOC: return flocvar::Method::Floc;
    case FLV_METHOD_LS: return flocvar::Method::LeastSquares;
    case FLV_METHOD_YW: return flocvar::Method::YuleWalker;
  }
  throw flocvar::ValidationError("unknown method");
}

flv_method from_method(flocvar::Method m) {
  switch (m) {
    case flocvar::Method::Floc: return FLV_METHOD_FLOC;
    case flocvar::Method::LeastSquares: return FLV_METHOD_LS;
    case flocvar::Method::YuleWalker: return FLV_METHOD_YW;
  }
  return FLV_METHOD_FLOC;
}

flocvar::StableParams to_params(const double params[4]) {
  require(params != nullptr, "null parameter array");
  flocvar::StableParams p{params[0], params[1], params[2], params[3]};
  p.validate();
  return p;
}

void store_params(const flocvar::StableParams& p, double out[4]) {
  out[0] = p.alpha;
  out[1] = p.beta;
  out[2] = p.sigma;
  out[3] = p.delta;
}

double default_b_for(const flocvar::SeriesMatrix& series) {
  const auto centered = flocvar::mean_correct(series);
  double alpha_max = 0.0;
  for (std::size_t j = 0; j < centered.dim(); ++j) {
    alpha_max = std::max(alpha_max, flocvar::fit_stable_params(centered.column(j)).alpha);
  }
  return flocvar::default_b_exponent(alpha_max);
}

flocvar::PipelineOptions to_pipeline_options(const flv_diag_options* o) {
  flv_diag_options defaults;
  flv_diag_options_default(&defaults);
  if (o == nullptr) o = &defaults;
  flocvar::PipelineOptions opts;
  opts.max_lag = o->max_lag;
  opts.band_replicates = o->band_replicates;
  opts.ks_repetitions = o->ks_repetitions;
  opts.qq_grid = o->qq_grid;
  if (!std::isnan(o->b_exp)) opts.b_exp = o->b_exp;
  opts.seed = o->seed;
  return opts;
}

flv_report* wrap_report(flocvar::EstimationReport report) {
  auto out = std::make_unique<flv_report>();
  out->method = report.method;
  out->coeffs = report.coeffs;
  out->summary = flocvar::report_summary(report);
  out->full = std::move(report);
  return out.release();
}

}  // namespace

extern "C" {

const char* flv_version(void) { return "0.1.0"; }

const char* flv_last_error(void) { return g_last_error.c_str(); }

// ---- series ----

flv_status flv_series_create(size_t length, size_t dim, const double* row_major, flv_series** out) {
  return guarded([&] {
    require(out != nullptr && row_major != nullptr, "null argument");
    require(length > 0 && dim > 0, "series needs at least one row and one column");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(length), static_cast<Eigen::Index>(dim));
    for (size_t t = 0; t < length; ++t)
      for (size_t j = 0; j < dim; ++j)
        values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = row_major[t * dim + j];
    *out = new flv_series{flocvar::SeriesMatrix(std::move(values))};
  });
}

flv_status flv_series_read_csv(const char* path, flv_series** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_input(path);
    *out = new flv_series{flocvar::read_series_csv(in)};
  });
}

flv_status flv_series_write_csv(const flv_series* series, const char* path) {
  return guarded([&] {
    require(series != nullptr, "null series");
    auto out = open_output(path);
    flocvar::write_series_csv(series->value, out);
    if (!out) throw IoError(std::string("write failed: ") + path);
  });
}

size_t flv_series_length(const flv_series* series) { return series ? series->value.length() : 0; }

size_t flv_series_dim(const flv_series* series) { return series ? series->value.dim() : 0; }

flv_status flv_series_copy(const flv_series* series, double* row_major, size_t capacity) {
  return guarded([&] {
    require(series != nullptr && row_major != nullptr, "null argument");
    const auto& s = series->value;
    require(capacity >= s.length() * s.dim(), "output buffer too small");
    for (size_t t = 0; t < s.length(); ++t)
      for (size_t j = 0; j < s.dim(); ++j) row_major[t * s.dim() + j] = s(t, j);
  });
}

void flv_series_destroy(flv_series* series) { delete series; }

// ---- model ----

flv_status flv_model_create(size_t dim, size_t order, const double* coeffs, const double* alphas,
                            const double* sigmas, flv_model** out) {
  return guarded([&] {
    require(out != nullptr && coeffs != nullptr && alphas != nullptr && sigmas != nullptr,
            "null argument");
    require(dim > 0 && order > 0, "dim and order must be >= 1");
    std::vector<Eigen::MatrixXd> mats;
    for (size_t k = 0; k < order; ++k) {
      Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j)
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = coeffs[k * dim * dim + i * dim + j];
      mats.push_back(std::move(a));
    }
    flocvar::SymmetricStableNoiseSpec noise;
    for (size_t j = 0; j < dim; ++j) {
      noise.components.push_back(flocvar::StableParams::symmetric(alphas[j], sigmas[j]));
    }
    *out = new flv_model{flocvar::VarModel(std::move(mats), std::move(noise))};
  });
}

flv_status flv_model_load(const char* path, flv_model** out, flv_sim_defaults* defaults) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_input(path);
    auto cfg = flocvar::parse_simulation_config(in);
    if (defaults != nullptr) {
      *defaults = flv_sim_defaults{};
      if (cfg.n) {
        defaults->has_length = 1;
        defaults->length = *cfg.n;
      }
      if (cfg.burn_in) {
        defaults->has_burn_in = 1;
        defaults->burn_in = *cfg.burn_in;
      }
      if (cfg.seed) {
        defaults->has_seed = 1;
        defaults->seed = *cfg.seed;
      }
    }
    *out = new flv_model{std::move(cfg.model)};
  });
}

size_t flv_model_dim(const flv_model* model) { return model ? model->value.dim() : 0; }

size_t flv_model_order(const flv_model* model) { return model ? model->value.order() : 0; }

flv_status flv_model_is_causal(const flv_model* model, double margin, int* causal,
                               double* spectral_radius) {
  return guarded([&] {
    require(model != nullptr, "null model");
    const auto report = flocvar::is_causal(model->value, margin);
    if (causal != nullptr) *causal = report.causal ? 1 : 0;
    if (spectral_radius != nullptr) *spectral_radius = report.spectral_radius;
  });
}

flv_status flv_simulate(const flv_model* model, size_t length, size_t burn_in, uint64_t seed,
                        flv_series** out) {
  return guarded([&] {
    require(model != nullptr && out != nullptr, "null argument");
    *out = new flv_series{flocvar::simulate(model->value, length, burn_in, seed)};
  });
}

void flv_model_destroy(flv_model* model) { delete model; }

// ---- estimation ----

void flv_estimate_options_default(flv_estimate_options* options) {
  if (options == nullptr) return;
  options->method = FLV_METHOD_FLOC;
  options->order = 2;
  options->b_exp = std::numeric_limits<double>::quiet_NaN();
  options->normalizer = FLV_NORMALIZER_DEFAULT;
}

flv_status flv_estimate(const flv_series* series, const flv_estimate_options* options,
                        flv_report** out) {
  return guarded([&] {
    require(series != nullptr && options != nullptr && out != nullptr, "null argument");
    const auto method = to_method(options->method);
    const auto& data = series->value;
    flocvar::EstimationReport report;
    switch (method) {
      case flocvar::Method::Floc: {
        const double b = std::isnan(options->b_exp) ? default_b_for(data) : options->b_exp;
        const auto norm = options->normalizer == FLV_NORMALIZER_FULL ? flocvar::Normalizer::Full
                                                                     : flocvar::Normalizer::Window;
        report = flocvar::estimate_floc(data, options->order, flocvar::FlocConfig{1.0, b, std::nullopt}, norm);
        break;
      }
      case flocvar::Method::YuleWalker: {
        const auto norm = options->normalizer == FLV_NORMALIZER_WINDOW ? flocvar::Normalizer::Window
                                                                       : flocvar::Normalizer::Full;
        report = flocvar::estimate_yw(data, options->order, norm);
        break;
      }
      case flocvar::Method::LeastSquares:
        report = flocvar::estimate_ls(data, options->order);
        break;
    }
    *out = wrap_report(std::move(report));
  });
}

flv_method flv_report_method(const flv_report* report) {
  return report ? from_method(report->method) : FLV_METHOD_FLOC;
}

size_t flv_report_order(const flv_report* report) { return report ? report->coeffs.size() : 0; }

size_t flv_report_dim(const flv_report* report) {
  return report && !report->coeffs.empty() ? static_cast<size_t>(report->coeffs.front().rows()) : 0;
}

flv_status flv_report_coeffs(const flv_report* report, double* out, size_t capacity) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    const size_t r = flv_report_dim(report);
    require(capacity >= report->coeffs.size() * r * r, "output buffer too small");
    for (size_t k = 0; k < report->coeffs.size(); ++k)
      for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j)
          out[k * r * r + i * r + j] =
              report->coeffs[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

double flv_report_condition(const flv_report* report) {
  if (report == nullptr || !report->full) return std::numeric_limits<double>::quiet_NaN();
  return report->full->condition;
}

double flv_report_b_exp(const flv_report* report) {
  if (report == nullptr || !report->full || !report->full->cfg) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return report->full->cfg->exp_b;
}

flv_status flv_report_residuals(const flv_report* report, flv_series** out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    require(report->full.has_value(), "report has no residuals (loaded from CSV)");
    *out = new flv_series{report->full->residuals};
  });
}

flv_status flv_report_write_csv(const flv_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr, "null report");
    auto out = open_output(path);
    flocvar::EstimationReport shell;
    shell.method = report->method;
    shell.coeffs = report->coeffs;
    flocvar::write_report_csv(shell, out);
    if (!out) throw IoError(std::string("write failed: ") + path);
  });
}

flv_status flv_report_write_summary(const flv_report* report, const char* path) {
  return guarded([&] {
    require(report != nullptr, "null report");
    require(report->full.has_value(), "report has no summary (loaded from CSV)");
    auto out = open_output(path);
    out << report->summary;
    if (!out) throw IoError(std::string("write failed: ") + path);
  });
}

flv_status flv_report_load_csv(const char* path, flv_report** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_input(path);
    auto loaded = flocvar::read_report_csv(in);
    auto report = std::make_unique<flv_report>();
    report->method = loaded.method;
    report->coeffs = std::move(loaded.coeffs);
    *out = report.release();
  });
}

void flv_report_destroy(flv_report* report) { delete report; }

// ---- Monte Carlo ----

flv_status flv_montecarlo_run(const char* config_path, const flv_mc_overrides* overrides,
                              flv_mc_report** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    auto in = open_input(config_path);
    auto cfg = flocvar::parse_experiment_config(in);
    if (overrides != nullptr) {
      if (overrides->has_seed) cfg.seed = overrides->seed;
      if (overrides->has_replications) cfg.replications = overrides->replications;
      if (overrides->has_threads) cfg.threads = overrides->threads;
    }
    *out = new flv_mc_report{flocvar::run_monte_carlo(cfg)};
  });
}

size_t flv_mc_report_cell_count(const flv_mc_report* report) {
  return report ? report->value.cells.size() : 0;
}

flv_status flv_mc_report_cell(const flv_mc_report* report, size_t index, flv_mc_cell* out) {
  return guarded([&] {
    require(report != nullptr && out != nullptr, "null argument");
    const auto& r = report->value;
    require(index < r.cells.size(), "cell index out of range");
    const auto& c = r.cells[index];
    const auto& est = r.estimators[c.estimator];
    *out = flv_mc_cell{from_method(est.method),
                       est.b,
                       c.lag + 1,
                       c.row + 1,
                       c.col + 1,
                       r.coefficient_number(c),
                       c.truth,
                       c.mean,
                       c.rmse,
                       c.count,
                       r.failures[c.estimator]};
  });
}

flv_status flv_mc_report_write(const flv_mc_report* report, const char* table_path,
                               const char* long_path) {
  return guarded([&] {
    require(report != nullptr, "null report");
    if (table_path != nullptr) {
      auto out = open_output(table_path);
      flocvar::write_table_csv(report->value, out);
      if (!out) throw IoError(std::string("write failed: ") + table_path);
    }
    if (long_path != nullptr) {
      auto out = open_output(long_path);
      flocvar::write_long_csv(report->value, out);
      if (!out) throw IoError(std::string("write failed: ") + long_path);
    }
  });
}

void flv_mc_report_destroy(flv_mc_report* report) { delete report; }

// ---- diagnostics ----

void flv_diag_options_default(flv_diag_options* options) {
  if (options == nullptr) return;
  const flocvar::PipelineOptions defaults;
  options->max_lag = defaults.max_lag;
  options->band_replicates = defaults.band_replicates;
  options->ks_repetitions = defaults.ks_repetitions;
  options->qq_grid = defaults.qq_grid;
  options->b_exp = std::numeric_limits<double>::quiet_NaN();
  options->seed = defaults.seed;
}

flv_status flv_diagnose(const flv_series* data, const flv_report* fitted,
                        const flv_diag_options* options, flv_diagnostics** out) {
  return guarded([&] {
    require(data != nullptr && fitted != nullptr && out != nullptr, "null argument");
    require(flv_report_dim(fitted) == data->value.dim(),
            "fitted report dimension does not match the data");
    const auto centered = flocvar::mean_correct(data->value);
    const auto resid = flocvar::residuals(centered, fitted->coeffs);
    *out = new flv_diagnostics{flocvar::diagnose_residuals(resid, to_pipeline_options(options))};
  });
}

size_t flv_diagnostics_columns(const flv_diagnostics* diag) {
  return diag ? diag->value.columns.size() : 0;
}

flv_status flv_diagnostics_ks(const flv_diagnostics* diag, size_t column, double* statistic,
                              double* p_value, double params[4]) {
  return guarded([&] {
    require(diag != nullptr, "null diagnostics");
    require(column < diag->value.columns.size(), "column index out of range");
    const auto& ks = diag->value.columns[column].ks;
    if (statistic != nullptr) *statistic = ks.statistic;
    if (p_value != nullptr) *p_value = ks.p_value;
    if (params != nullptr) store_params(ks.fitted, params);
  });
}

flv_status flv_diagnostics_write(const flv_diagnostics* diag, const char* dir) {
  return guarded([&] {
    require(diag != nullptr && dir != nullptr, "null argument");
    try {
      flocvar::write_diagnostics(diag->value, dir);
    } catch (const std::filesystem::filesystem_error& e) {
      throw IoError(e.what());
    } catch (const flocvar::ValidationError& e) {
      throw IoError(e.what());
    }
  });
}

void flv_diagnostics_destroy(flv_diagnostics* diag) { delete diag; }

flv_status flv_pipeline_run(const flv_series* series, size_t order, double b_exp,
                            const flv_diag_options* options, flv_report** estimate,
                            flv_diagnostics** diagnostics) {
  return guarded([&] {
    require(series != nullptr, "null series");
    auto opts = to_pipeline_options(options);
    opts.order = order;
    if (!std::isnan(b_exp)) opts.b_exp = b_exp;
    auto result = flocvar::run_pipeline(series->value, opts);
    std::unique_ptr<flv_report> est(wrap_report(std::move(result.estimate)));
    std::unique_ptr<flv_diagnostics> diag(new flv_diagnostics{std::move(result.diagnostics)});
    if (estimate != nullptr) *estimate = est.release();
    if (diagnostics != nullptr) *diagnostics = diag.release();
  });
}

// ---- stable laws ----

flv_status flv_stable_fit(const double* sample, size_t count, double params[4]) {
  return guarded([&] {
    require(sample != nullptr && params != nullptr, "null argument");
    store_params(flocvar::fit_stable_params(std::span<const double>(sample, count)), params);
  });
}

flv_status flv_stable_sample(const double params[4], size_t count, uint64_t seed, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    const auto draws = flocvar::sample_stable(to_params(params), count, seed);
    std::copy(draws.begin(), draws.end(), out);
  });
}

flv_status flv_stable_cdf(const double params[4], double x, double* out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = flocvar::stable_cdf(to_params(params), x);
  });
}

}  // extern "C"
