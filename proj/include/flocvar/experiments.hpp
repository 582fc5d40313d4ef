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

#ifndef FLOCVAR_EXPERIMENTS_HPP_
#define FLOCVAR_EXPERIMENTS_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flocvar/diagnostics.hpp"
#include "flocvar/estimators.hpp"
#include "flocvar/var.hpp"

namespace flocvar {

inline constexpr std::size_t kDefaultReplications = 200;

// Monte Carlo setup. Read from flat `key = value` text:
//
//   dim = 2
//   order = 2
//   A1 = 0.1, 0.3, 0.2, 0.1      # row-major
//   A2 = 0.2, 0.2, 0.05, 0.1
//   alpha = 1.6                  # noise stability index (all components)
//   sigma = 1                    # optional noise scale, default 1
//   n = 700
//   burn_in = 500                # optional
//   b_values = 0, 0.11, 0.22
//   replications = 200           # optional
//   seed = 42                    # optional
//   methods = FLOC, LS, YW       # optional, default FLOC
//   threads = 4                  # optional, default hardware concurrency
struct ExperimentConfig {
  VarModel model;
  std::size_t n = 0;
  std::size_t burn_in = kDefaultBurnIn;
  double alpha = 2.0;
  std::vector<double> b_values;
  std::size_t replications = kDefaultReplications;
  std::uint64_t seed = 0;
  std::vector<Method> methods{Method::Floc};
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

ExperimentConfig parse_experiment_config(std::istream& in);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Only the model part of a config file (used by the `simulate` command);
// n / burn_in / seed keys, if present, are returned alongside.
struct SimulationConfig {
  VarModel model;
  std::optional<std::size_t> n;
  std::optional<std::size_t> burn_in;
  std::optional<std::uint64_t> seed;
};
SimulationConfig parse_simulation_config(std::istream& in);

// One estimator within a Monte Carlo run: a method, plus B for FLOC.
struct EstimatorSpec {
  Method method = Method::Floc;
  double b = 0.0;  // unused for LS / YW
  std::string label() const;
};

struct CellSummary {
  std::size_t estimator = 0;  // index into MonteCarloReport::estimators
  std::size_t lag = 0;        // 0-based matrix index k (A_{k+1})
  std::size_t row = 0;
  std::size_t col = 0;
  double truth = 0.0;
  double mean = 0.0;
  double rmse = 0.0;
  std::size_t count = 0;
};

struct MonteCarloReport {
  std::size_t dim = 0;
  std::size_t order = 0;
  std::size_t replications = 0;
  std::size_t n = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::vector<EstimatorSpec> estimators;
  std::vector<std::size_t> failures;  // per estimator
  std::vector<CellSummary> cells;     // estimator-major, then k, then column-major (i, j)

  const CellSummary& cell(std::size_t estimator, std::size_t lag, std::size_t row,
                          std::size_t col) const;
  // Coefficient label index in the a_1, a_2, ... numbering, which runs
  // column-major through A_1, then A_2, ...; 1-based.
  std::size_t coefficient_number(const CellSummary& cell) const;
};

// Replication i simulates on seed derive_seed(cfg.seed, i) and runs every
// estimator on that path. Estimates are reduced in replication order, so the
// report is identical for any thread count. Failed estimations are excluded
// and counted; more than 1% failures for any estimator throws NumericalError.
MonteCarloReport run_monte_carlo(const ExperimentConfig& cfg);

// Wide table: one row per coefficient, mean/RMSE column pairs per
// estimator.
void write_table_csv(const MonteCarloReport& report, std::ostream& out);
// Long format: estimator,method,b,k,i,j,coefficient,truth,mean,rmse,count.
void write_long_csv(const MonteCarloReport& report, std::ostream& out);

struct PipelineOptions {
  std::size_t order = 2;
  std::optional<double> b_exp;  // default: max fitted alpha - 1.05
  std::size_t max_lag = 20;
  std::size_t band_replicates = kDefaultBandReplicates;
  std::size_t ks_repetitions = 100;
  std::size_t qq_grid = 99;
  std::uint64_t seed = 0;
};

struct ColumnDiagnostics {
  StableParams fitted;
  AutoFlocSeries auto_floc;
  KsTestResult ks;
  std::vector<QqPoint> qq;
};

struct DiagnosticsReport {
  std::vector<ColumnDiagnostics> columns;
};

// Residual diagnostics for every column of `residual_series`. The auto-FLOC
// uses A = 1 and B = alpha_hat - 1.05 of that column unless `b_exp` is set.
DiagnosticsReport diagnose_residuals(const SeriesMatrix& residual_series,
                                     const PipelineOptions& options);

struct PipelineReport {
  std::vector<StableParams> column_fits;  // fitted to the mean-corrected data
  double b_exp = 0.0;
  EstimationReport estimate;
  DiagnosticsReport diagnostics;
};

// Mean-correct, fit alpha per column, pick B, estimate with FLOC, diagnose
// residuals.
PipelineReport run_pipeline(const SeriesMatrix& series, const PipelineOptions& options);
PipelineReport run_pipeline(const std::filesystem::path& csv, const PipelineOptions& options);

// Writes diagnostics CSVs into `dir`: autofloc_<j>.csv, qq_<j>.csv, ks.txt.
void write_diagnostics(const DiagnosticsReport& report, const std::filesystem::path& dir);

}  // namespace flocvar

#endif  // FLOCVAR_EXPERIMENTS_HPP_
