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

#ifndef FLOCVAR_FLOC_HPP_
#define FLOCVAR_FLOC_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "flocvar/series.hpp"

namespace flocvar {

// Exponents of FLOC(X, Y, A, B) = E[X^<A> Y^<B>].
struct FlocConfig {
  double exp_a = 1.0;
  double exp_b = 1.0;
  std::optional<double> alpha_hint;

  // Throws ValidationError on negative or non-finite exponents, or when a
  // stability index is known and A + B >= alpha.
  void validate() const;

  // Without a known alpha the moment condition cannot be checked; this
  // returns a message when A + B >= 2, which no stable law admits except the
  // Gaussian.
  std::optional<std::string> moment_warning() const;
};

// How the lagged sums are normalised: by the number of terms in the window
// (N - |k|) or by the full sample length N (classical autocovariance).
enum class Normalizer { Window, Full };

// |x|^a sign(x), with sign(0) = 0 so that 0^<0> = 0.
double signed_power(double x, double a);

// Cross-FLOC estimator between xi at time n and xj at time n - lag, summed
// over the 0-based window n in [max(0, lag), min(N, N + lag)). Exact zeros
// contribute nothing. Throws ValidationError on length mismatch or |lag| >= N.
double cross_floc(std::span<const double> xi, std::span<const double> xj, long lag,
                  const FlocConfig& cfg, Normalizer normalizer = Normalizer::Window);

// r x r matrix with entry (i, j) = cross_floc(column i, column j, lag).
Eigen::MatrixXd lag_matrix(const SeriesMatrix& series, long lag, const FlocConfig& cfg,
                           Normalizer normalizer = Normalizer::Window);

// Lag cross-FLOC matrices over a contiguous lag range.
class LagMatrixSet {
 public:
  LagMatrixSet(std::size_t dim, long min_lag, long max_lag);

  std::size_t dim() const { return dim_; }
  long min_lag() const { return min_lag_; }
  long max_lag() const { return max_lag_; }
  const Eigen::MatrixXd& at(long lag) const;
  void set(long lag, Eigen::MatrixXd matrix);

 private:
  std::size_t dim_;
  long min_lag_;
  long max_lag_;
  std::map<long, Eigen::MatrixXd> matrices_;
};

// Lags -(order-1) ... order, as needed by the order-p block system. Requires
// series length > 2 * order.
LagMatrixSet lag_matrix_set(const SeriesMatrix& series, std::size_t order,
                            const FlocConfig& cfg, Normalizer normalizer = Normalizer::Window);

// `lag,i,j,value` rows with 1-based component indices.
void write_lag_matrix_set_csv(const LagMatrixSet& set, std::ostream& out);

// Both sides of FLOC(X, Y, 1, q - 1) = CV(X, Y) E|Y|^q / (q sigma_Y^alpha),
// with the covariation CV(X, Y) = q E[X Y^<q-1>] sigma_Y^alpha / E|Y|^q and
// all expectations replaced by sample means.
struct CovariationCheck {
  double floc = 0.0;
  double covariation = 0.0;
  double covariation_implied = 0.0;
};

// Requires 1 <= q < alpha and 1 < alpha < 2 (ValidationError otherwise).
CovariationCheck floc_vs_covariation_check(std::span<const double> xi,
                                           std::span<const double> xj, double q,
                                           double sigma_y, double alpha);

}  // namespace flocvar

#endif  // FLOCVAR_FLOC_HPP_
