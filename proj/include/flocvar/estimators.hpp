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

#ifndef FLOCVAR_ESTIMATORS_HPP_
#define FLOCVAR_ESTIMATORS_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flocvar/floc.hpp"
#include "flocvar/series.hpp"

namespace flocvar {

enum class Method { Floc, LeastSquares, YuleWalker };

std::string_view method_name(Method method);  // "FLOC", "LS", "YW"
Method parse_method(std::string_view name);    // case-insensitive

// Systems whose condition estimate exceeds this are rejected.
inline constexpr double kMaxCondition = 1e12;

struct EstimationReport {
  Method method = Method::Floc;
  std::vector<Eigen::MatrixXd> coeffs;  // A_1 ... A_p
  std::optional<FlocConfig> cfg;        // FLOC only
  Normalizer normalizer = Normalizer::Window;
  double condition = 0.0;  // 1-norm condition estimate of the solved system
  Eigen::VectorXd means;   // subtracted column means
  SeriesMatrix residuals;  // n - p rows, on the mean-corrected series

  std::size_t order() const { return coeffs.size(); }
  std::size_t dim() const {
    return coeffs.empty() ? 0 : static_cast<std::size_t>(coeffs.front().rows());
  }
};

// Solves [A_1 ... A_p] Block = [G_1 ... G_p], Block(k, l) = G_{l-k}, by
// pivoted LU. `condition` receives the reciprocal of LAPACK-style rcond.
// Throws SingularSystemError above kMaxCondition.
std::vector<Eigen::MatrixXd> solve_block_system(const LagMatrixSet& lags, std::size_t order,
                                                double* condition = nullptr);

// The block Toeplitz-like matrix itself (pr x pr).
Eigen::MatrixXd assemble_block_matrix(const LagMatrixSet& lags, std::size_t order);

// FLOC estimator. The series is mean-corrected first; cross-FLOC lag
// matrices are built with `cfg` and the block system is solved. Requires
// length > 2 p r. The FLOC method fixes A = 1; other values are accepted for
// experimentation.
EstimationReport estimate_floc(const SeriesMatrix& series, std::size_t order,
                               const FlocConfig& cfg,
                               Normalizer normalizer = Normalizer::Window);

// Least squares regression of X_t on (X_{t-1}, ..., X_{t-p}) after mean
// correction. Requires length > p r + p.
EstimationReport estimate_ls(const SeriesMatrix& series, std::size_t order);

// Yule-Walker: the same block system with sample autocovariances. Defaults to
// the classical 1/N normalizer; with Normalizer::Window it coincides with
// estimate_floc at A = B = 1.
EstimationReport estimate_yw(const SeriesMatrix& series, std::size_t order,
                             Normalizer normalizer = Normalizer::Full);

EstimationReport estimate(Method method, const SeriesMatrix& series, std::size_t order,
                          const FlocConfig& cfg);

// Z_t = X_t - sum_k A_k X_{t-k} for t = p+1 ... n (no mean correction).
SeriesMatrix residuals(const SeriesMatrix& series, std::span<const Eigen::MatrixXd> coeffs);

// B = alpha - 1.05 clamped to >= 0.
double default_b_exponent(double alpha);

// `method,k,i,j,value` with 1-based k, i, j.
void write_report_csv(const EstimationReport& report, std::ostream& out);

struct ReportCoefficients {
  Method method = Method::Floc;
  std::vector<Eigen::MatrixXd> coeffs;
};

// Reads the coefficient CSV written by write_report_csv.
ReportCoefficients read_report_csv(std::istream& in);

// Human-readable summary: method, config echo, condition, means, matrices.
std::string report_summary(const EstimationReport& report);

}  // namespace flocvar

#endif  // FLOCVAR_ESTIMATORS_HPP_
