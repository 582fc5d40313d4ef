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

#include "flocvar/floc.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "flocvar/error.hpp"

namespace flocvar {

namespace {

// Neumaier's compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// x^<a> specialised for the common exponents.
inline double power_term(double x, double a) {
  if (a == 1.0) return x;
  if (x == 0.0) return 0.0;
  if (a == 0.0) return x > 0.0 ? 1.0 : -1.0;
  const double m = std::pow(std::abs(x), a);
  return x > 0.0 ? m : -m;
}

}  // namespace

void FlocConfig::validate() const {
  if (!std::isfinite(exp_a) || exp_a < 0.0) {
    throw ValidationError("FLOC exponent A must be a non-negative number");
  }
  if (!std::isfinite(exp_b) || exp_b < 0.0) {
    throw ValidationError("FLOC exponent B must be a non-negative number");
  }
  if (alpha_hint) {
    if (!(*alpha_hint > 0.0 && *alpha_hint <= 2.0)) {
      throw ValidationError("FLOC alpha hint must lie in (0, 2]");
    }
    // A + B < alpha, except the Gaussian covariance A = B = 1.
    const bool gaussian_cov = *alpha_hint == 2.0 && exp_a == 1.0 && exp_b == 1.0;
    if (!(exp_a + exp_b < *alpha_hint) && !gaussian_cov) {
      throw ValidationError("FLOC exponents need A + B < alpha (A = " + std::to_string(exp_a) +
                            ", B = " + std::to_string(exp_b) +
                            ", alpha = " + std::to_string(*alpha_hint) + ")");
    }
  }
}

std::optional<std::string> FlocConfig::moment_warning() const {
  if (!alpha_hint && exp_a + exp_b >= 2.0) {
    return "A + B >= 2: the fractional moment is finite only for Gaussian data";
  }
  return std::nullopt;
}

double signed_power(double x, double a) {
  if (!(a >= 0.0)) throw ValidationError("signed_power exponent must be >= 0");
  if (x == 0.0) return 0.0;
  const double m = std::pow(std::abs(x), a);
  return x > 0.0 ? m : -m;
}

double cross_floc(std::span<const double> xi, std::span<const double> xj, long lag,
                  const FlocConfig& cfg, Normalizer normalizer) {
  cfg.validate();
  if (xi.size() != xj.size()) throw ValidationError("cross_floc: series lengths differ");
  const auto n = static_cast<long>(xi.size());
  if (n == 0) throw ValidationError("cross_floc: empty series");
  if (lag <= -n || lag >= n) {
    throw ValidationError("cross_floc: lag " + std::to_string(lag) + " out of range for length " +
                          std::to_string(n));
  }
  const long first = std::max(0L, lag);
  const long last = std::min(n, n + lag);  // exclusive
  CompensatedSum sum;
  for (long t = first; t < last; ++t) {
    sum.add(power_term(xi[static_cast<std::size_t>(t)], cfg.exp_a) *
            power_term(xj[static_cast<std::size_t>(t - lag)], cfg.exp_b));
  }
  const double denom = normalizer == Normalizer::Window ? static_cast<double>(last - first)
                                                        : static_cast<double>(n);
  return sum.value() / denom;
}

Eigen::MatrixXd lag_matrix(const SeriesMatrix& series, long lag, const FlocConfig& cfg,
                           Normalizer normalizer) {
  const auto r = static_cast<Eigen::Index>(series.dim());
  Eigen::MatrixXd m(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      m(i, j) = cross_floc(series.column(static_cast<std::size_t>(i)),
                           series.column(static_cast<std::size_t>(j)), lag, cfg, normalizer);
  return m;
}

LagMatrixSet::LagMatrixSet(std::size_t dim, long min_lag, long max_lag)
    : dim_(dim), min_lag_(min_lag), max_lag_(max_lag) {
  if (min_lag > max_lag) throw ValidationError("lag range is empty");
}

const Eigen::MatrixXd& LagMatrixSet::at(long lag) const {
  auto it = matrices_.find(lag);
  if (it == matrices_.end()) {
    throw ValidationError("lag " + std::to_string(lag) + " not in lag matrix set");
  }
  return it->second;
}

void LagMatrixSet::set(long lag, Eigen::MatrixXd matrix) {
  if (lag < min_lag_ || lag > max_lag_) {
    throw ValidationError("lag " + std::to_string(lag) + " outside lag matrix set range");
  }
  if (matrix.rows() != static_cast<Eigen::Index>(dim_) ||
      matrix.cols() != static_cast<Eigen::Index>(dim_)) {
    throw ValidationError("lag matrix has wrong shape");
  }
  if (!matrix.allFinite()) throw ValidationError("lag matrix has non-finite entries");
  matrices_[lag] = std::move(matrix);
}

LagMatrixSet lag_matrix_set(const SeriesMatrix& series, std::size_t order, const FlocConfig& cfg,
                            Normalizer normalizer) {
  if (order == 0) throw ValidationError("order must be >= 1");
  if (series.length() <= 2 * order) {
    throw ValidationError("series of length " + std::to_string(series.length()) +
                          " is too short for order " + std::to_string(order));
  }
  const long p = static_cast<long>(order);
  LagMatrixSet set(series.dim(), 1 - p, p);
  for (long lag = 1 - p; lag <= p; ++lag) set.set(lag, lag_matrix(series, lag, cfg, normalizer));
  return set;
}

void write_lag_matrix_set_csv(const LagMatrixSet& set, std::ostream& out) {
  out << "lag,i,j,value\n";
  for (long lag = set.min_lag(); lag <= set.max_lag(); ++lag) {
    const auto& m = set.at(lag);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out << lag << ',' << (i + 1) << ',' << (j + 1) << ',' << format_double(m(i, j)) << '\n';
  }
}

CovariationCheck floc_vs_covariation_check(std::span<const double> xi,
                                           std::span<const double> xj, double q,
                                           double sigma_y, double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    throw ValidationError("covariation relation needs 1 < alpha < 2");
  }
  if (!(q >= 1.0 && q < alpha)) throw ValidationError("covariation relation needs 1 <= q < alpha");
  if (!(sigma_y > 0.0)) throw ValidationError("covariation relation needs sigma_Y > 0");
  if (xi.size() != xj.size() || xi.empty()) {
    throw ValidationError("covariation check needs two equal-length non-empty samples");
  }
  const FlocConfig cfg{1.0, q - 1.0, alpha};
  CovariationCheck out;
  out.floc = cross_floc(xi, xj, 0, cfg);

  CompensatedSum abs_moment;
  for (double y : xj) abs_moment.add(std::pow(std::abs(y), q));
  const double e_abs_q = abs_moment.value() / static_cast<double>(xj.size());
  if (!(e_abs_q > 0.0)) throw ValidationError("covariation check: E|Y|^q is zero");

  const double sigma_pow = std::pow(sigma_y, alpha);
  out.covariation = q * out.floc / e_abs_q * sigma_pow;
  out.covariation_implied = out.covariation * e_abs_q / (q * sigma_pow);
  return out;
}

}  // namespace flocvar
