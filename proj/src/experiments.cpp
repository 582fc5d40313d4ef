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

#include "flocvar/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "flocvar/error.hpp"
#include "flocvar/rng.hpp"

namespace flocvar {

namespace {

using KeyValues = std::map<std::string, std::string>;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

KeyValues read_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (key.empty()) throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) {
      throw ValidationError("config key '" + key + "' given twice");
    }
  }
  return kv;
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  for (const auto& field : split_csv_line(text)) out.push_back(parse_double(field, key));
  return out;
}

std::uint64_t parse_unsigned(const std::string& text, const std::string& key) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw ValidationError("config key '" + key + "' must be a non-negative integer, got '" + text + "'");
  }
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ValidationError("config key '" + key + "' is out of range");
  }
}

const std::string& require(const KeyValues& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw ValidationError("config is missing required key '" + key + "'");
  return it->second;
}

std::optional<std::string> lookup(const KeyValues& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) return std::nullopt;
  return it->second;
}

std::vector<double> broadcast(std::vector<double> values, std::size_t dim, const std::string& key) {
  if (values.size() == 1) return std::vector<double>(dim, values.front());
  if (values.size() != dim) {
    throw ValidationError("config key '" + key + "' needs 1 or " + std::to_string(dim) + " values");
  }
  return values;
}

VarModel model_from(const KeyValues& kv) {
  const auto dim = static_cast<std::size_t>(parse_unsigned(require(kv, "dim"), "dim"));
  const auto order = static_cast<std::size_t>(parse_unsigned(require(kv, "order"), "order"));
  if (dim == 0 || order == 0) throw ValidationError("dim and order must be >= 1");
  std::vector<Eigen::MatrixXd> coeffs;
  for (std::size_t k = 1; k <= order; ++k) {
    const std::string key = "a" + std::to_string(k);
    const auto values = parse_list(require(kv, key), key);
    if (values.size() != dim * dim) {
      throw ValidationError("config key 'A" + std::to_string(k) + "' needs " +
                            std::to_string(dim * dim) + " row-major values");
    }
    Eigen::MatrixXd a(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i * dim + j];
    coeffs.push_back(std::move(a));
  }
  const auto alphas = broadcast(parse_list(require(kv, "alpha"), "alpha"), dim, "alpha");
  const auto sigmas =
      broadcast(parse_list(lookup(kv, "sigma").value_or("1"), "sigma"), dim, "sigma");
  SymmetricStableNoiseSpec noise;
  for (std::size_t j = 0; j < dim; ++j) noise.components.push_back(StableParams::symmetric(alphas[j], sigmas[j]));
  return VarModel(std::move(coeffs), std::move(noise));
}

const std::vector<std::string> kModelKeys{"dim", "order", "alpha", "sigma"};

bool is_model_key(const std::string& key) {
  if (std::find(kModelKeys.begin(), kModelKeys.end(), key) != kModelKeys.end()) return true;
  return key.size() > 1 && key[0] == 'a' &&
         std::all_of(key.begin() + 1, key.end(), [](unsigned char c) { return std::isdigit(c); });
}

void reject_unknown(const KeyValues& kv, const std::vector<std::string>& extra) {
  for (const auto& [key, value] : kv) {
    if (is_model_key(key)) continue;
    if (std::find(extra.begin(), extra.end(), key) != extra.end()) continue;
    throw ValidationError("unknown config key '" + key + "'");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replications < 1) throw ValidationError("replications must be >= 1");
  if (n == 0) throw ValidationError("sample length n must be >= 1");
  if (methods.empty()) throw ValidationError("at least one method is required");
  const bool has_floc = std::find(methods.begin(), methods.end(), Method::Floc) != methods.end();
  if (has_floc && b_values.empty()) throw ValidationError("FLOC runs need at least one B value");
  for (double b : b_values) {
    if (!std::isfinite(b) || b < 0.0) throw ValidationError("B values must be >= 0");
  }
  const auto causal = is_causal(model);
  if (!causal.causal) {
    throw ValidationError("experiment model is not causal (spectral radius " +
                          std::to_string(causal.spectral_radius) + ")");
  }
}

ExperimentConfig parse_experiment_config(std::istream& in) {
  const KeyValues kv = read_key_values(in);
  reject_unknown(kv, {"n", "burn_in", "b_values", "replications", "seed", "methods", "threads"});
  ExperimentConfig cfg{.model = model_from(kv)};
  cfg.n = static_cast<std::size_t>(parse_unsigned(require(kv, "n"), "n"));
  if (auto v = lookup(kv, "burn_in")) cfg.burn_in = static_cast<std::size_t>(parse_unsigned(*v, "burn_in"));
  cfg.alpha = cfg.model.noise().components.front().alpha;
  if (auto v = lookup(kv, "b_values")) cfg.b_values = parse_list(*v, "b_values");
  if (auto v = lookup(kv, "replications")) {
    cfg.replications = static_cast<std::size_t>(parse_unsigned(*v, "replications"));
  }
  if (auto v = lookup(kv, "seed")) cfg.seed = parse_unsigned(*v, "seed");
  if (auto v = lookup(kv, "methods")) {
    cfg.methods.clear();
    for (const auto& name : split_csv_line(*v)) cfg.methods.push_back(parse_method(name));
  }
  if (auto v = lookup(kv, "threads")) cfg.threads = static_cast<unsigned>(parse_unsigned(*v, "threads"));
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  return parse_experiment_config(in);
}

SimulationConfig parse_simulation_config(std::istream& in) {
  const KeyValues kv = read_key_values(in);
  // Monte Carlo keys are tolerated so one file can drive both commands.
  reject_unknown(kv, {"n", "burn_in", "seed", "b_values", "replications", "methods", "threads"});
  SimulationConfig cfg{.model = model_from(kv)};
  if (auto v = lookup(kv, "n")) cfg.n = static_cast<std::size_t>(parse_unsigned(*v, "n"));
  if (auto v = lookup(kv, "burn_in")) cfg.burn_in = static_cast<std::size_t>(parse_unsigned(*v, "burn_in"));
  if (auto v = lookup(kv, "seed")) cfg.seed = parse_unsigned(*v, "seed");
  return cfg;
}

std::string EstimatorSpec::label() const {
  if (method != Method::Floc) return std::string(method_name(method));
  std::ostringstream out;
  out << "FLOC(B=" << b << ")";
  return out.str();
}

const CellSummary& MonteCarloReport::cell(std::size_t estimator, std::size_t lag, std::size_t row,
                                          std::size_t col) const {
  const std::size_t per = order * dim * dim;
  return cells.at(estimator * per + lag * dim * dim + col * dim + row);
}

std::size_t MonteCarloReport::coefficient_number(const CellSummary& c) const {
  return c.lag * dim * dim + c.col * dim + c.row + 1;
}

MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t r = cfg.model.dim();
  const std::size_t p = cfg.model.order();
  const std::size_t per = p * r * r;

  MonteCarloReport report;
  report.dim = r;
  report.order = p;
  report.replications = cfg.replications;
  report.n = cfg.n;
  report.alpha = cfg.alpha;
  report.seed = cfg.seed;
  for (Method m : cfg.methods) {
    if (m == Method::Floc) {
      for (double b : cfg.b_values) report.estimators.push_back({m, b});
    } else {
      report.estimators.push_back({m, 0.0});
    }
  }
  const std::size_t n_est = report.estimators.size();

  // estimates[rep][est * per + cell]; ok[rep * n_est + est]
  std::vector<std::vector<double>> estimates(cfg.replications, std::vector<double>(n_est * per));
  std::vector<char> ok(cfg.replications * n_est, 0);

  auto run_one = [&](std::size_t rep) {
    const SeriesMatrix path = simulate(cfg.model, cfg.n, cfg.burn_in, derive_seed(cfg.seed, rep));
    for (std::size_t e = 0; e < n_est; ++e) {
      const auto& spec = report.estimators[e];
      try {
        const EstimationReport est =
            estimate(spec.method, path, p, FlocConfig{1.0, spec.b, std::nullopt});
        double* out = estimates[rep].data() + e * per;
        for (std::size_t k = 0; k < p; ++k)
          for (std::size_t j = 0; j < r; ++j)
            for (std::size_t i = 0; i < r; ++i)
              out[k * r * r + j * r + i] =
                  est.coeffs[k](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        ok[rep * n_est + e] = 1;
      } catch (const DegenerateInputError&) {
      } catch (const NumericalError&) {
      }
    }
  };

  unsigned threads = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.replications));
  if (threads <= 1) {
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) run_one(rep);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> workers;
      for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
          for (std::size_t rep = next++; rep < cfg.replications; rep = next++) {
            try {
              run_one(rep);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!first_error) first_error = std::current_exception();
              next = cfg.replications;
            }
          }
        });
      }
    }
    if (first_error) std::rethrow_exception(first_error);
  }

  report.failures.assign(n_est, 0);
  for (std::size_t e = 0; e < n_est; ++e) {
    for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
      if (!ok[rep * n_est + e]) ++report.failures[e];
    }
    if (static_cast<double>(report.failures[e]) > 0.01 * static_cast<double>(cfg.replications)) {
      throw NumericalError(report.estimators[e].label() + " failed in " +
                           std::to_string(report.failures[e]) + " of " +
                           std::to_string(cfg.replications) + " replications (limit 1%)");
    }
  }

  // Reduce in replication order: identical results for any thread count.
  for (std::size_t e = 0; e < n_est; ++e) {
    for (std::size_t k = 0; k < p; ++k) {
      for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t i = 0; i < r; ++i) {
          const std::size_t idx = e * per + k * r * r + j * r + i;
          CellSummary cell{e, k, i, j};
          cell.truth = cfg.model.coeff(k)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          double sum = 0.0;
          double sq = 0.0;
          for (std::size_t rep = 0; rep < cfg.replications; ++rep) {
            if (!ok[rep * n_est + e]) continue;
            const double v = estimates[rep][idx];
            sum += v;
            sq += (v - cell.truth) * (v - cell.truth);
            ++cell.count;
          }
          cell.mean = sum / static_cast<double>(cell.count);
          cell.rmse = std::sqrt(sq / static_cast<double>(cell.count));
          report.cells.push_back(cell);
        }
      }
    }
  }
  return report;
}

void write_table_csv(const MonteCarloReport& report, std::ostream& out) {
  out << "coefficient,truth";
  for (const auto& est : report.estimators) out << ',' << est.label() << "_mean," << est.label() << "_rmse";
  out << '\n';
  const std::size_t per = report.order * report.dim * report.dim;
  for (std::size_t c = 0; c < per; ++c) {
    const auto& first = report.cells[c];
    out << 'a' << report.coefficient_number(first) << ',' << format_double(first.truth);
    for (std::size_t e = 0; e < report.estimators.size(); ++e) {
      const auto& cell = report.cells[e * per + c];
      out << ',' << format_double(cell.mean) << ',' << format_double(cell.rmse);
    }
    out << '\n';
  }
}

void write_long_csv(const MonteCarloReport& report, std::ostream& out) {
  out << "estimator,method,b,k,i,j,coefficient,truth,mean,rmse,count,failures\n";
  for (const auto& cell : report.cells) {
    const auto& est = report.estimators[cell.estimator];
    out << est.label() << ',' << method_name(est.method) << ','
        << (est.method == Method::Floc ? format_double(est.b) : std::string{}) << ','
        << (cell.lag + 1) << ',' << (cell.row + 1) << ',' << (cell.col + 1) << ",a"
        << report.coefficient_number(cell) << ',' << format_double(cell.truth) << ','
        << format_double(cell.mean) << ',' << format_double(cell.rmse) << ',' << cell.count << ','
        << report.failures[cell.estimator] << '\n';
  }
}

DiagnosticsReport diagnose_residuals(const SeriesMatrix& residual_series,
                                     const PipelineOptions& options) {
  DiagnosticsReport report;
  for (std::size_t j = 0; j < residual_series.dim(); ++j) {
    const auto column = residual_series.column(j);
    const std::uint64_t column_seed = derive_seed(options.seed, j);
    ColumnDiagnostics diag;
    diag.fitted = fit_stable_params(column);
    const double b = options.b_exp.value_or(default_b_exponent(diag.fitted.alpha));
    diag.auto_floc = auto_floc(column, options.max_lag, FlocConfig{1.0, b, std::nullopt});
    if (options.band_replicates > 0) {
      attach_null_band(diag.auto_floc, column, options.band_replicates, kDefaultBandLevel,
                       derive_seed(column_seed, 1));
    }
    diag.ks = ks_test_stable(column, options.ks_repetitions, derive_seed(column_seed, 2));
    diag.qq = qq_data(column, diag.fitted, options.qq_grid);
    report.columns.push_back(std::move(diag));
  }
  return report;
}

PipelineReport run_pipeline(const SeriesMatrix& series, const PipelineOptions& options) {
  if (series.length() <= 2 * options.order * series.dim()) {
    throw ValidationError("series length " + std::to_string(series.length()) +
                          " too short for order " + std::to_string(options.order));
  }
  PipelineReport report;
  const SeriesMatrix centered = mean_correct(series);
  double alpha_max = 0.0;
  for (std::size_t j = 0; j < centered.dim(); ++j) {
    report.column_fits.push_back(fit_stable_params(centered.column(j)));
    alpha_max = std::max(alpha_max, report.column_fits.back().alpha);
  }
  report.b_exp = options.b_exp.value_or(default_b_exponent(alpha_max));
  report.estimate = estimate_floc(series, options.order, FlocConfig{1.0, report.b_exp, std::nullopt});
  report.diagnostics = diagnose_residuals(report.estimate.residuals, options);
  return report;
}

PipelineReport run_pipeline(const std::filesystem::path& csv, const PipelineOptions& options) {
  return run_pipeline(read_series_csv(csv), options);
}

void write_diagnostics(const DiagnosticsReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw ValidationError("cannot write " + (dir / name).string());
    return out;
  };
  auto ks = open("ks.txt");
  for (std::size_t j = 0; j < report.columns.size(); ++j) {
    const auto& col = report.columns[j];
    auto af = open("autofloc_" + std::to_string(j + 1) + ".csv");
    write_auto_floc_csv(col.auto_floc, af);
    auto qq = open("qq_" + std::to_string(j + 1) + ".csv");
    write_qq_csv(col.qq, qq);
    ks << "column=" << (j + 1) << ' ';
    write_ks_summary(col.ks, ks);
  }
}

}  // namespace flocvar
