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

#ifndef FLOCVAR_DIAGNOSTICS_HPP_
#define FLOCVAR_DIAGNOSTICS_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "flocvar/floc.hpp"
#include "flocvar/stable.hpp"

namespace flocvar {

// Empirical auto-FLOC of one residual series at lags 0..L, optionally with a
// pointwise permutation-null band.
struct AutoFlocSeries {
  std::vector<long> lags;
  std::vector<double> values;
  std::vector<double> band_lo;  // empty until a band is attached
  std::vector<double> band_hi;
  FlocConfig cfg;
};

// value(k) = cross_floc(column, column, k, cfg). Throws ValidationError when
// max_lag >= length and DegenerateInputError on an all-zero column.
AutoFlocSeries auto_floc(std::span<const double> column, std::size_t max_lag,
                         const FlocConfig& cfg);

inline constexpr std::size_t kDefaultBandReplicates = 200;
inline constexpr double kDefaultBandLevel = 0.95;

// Pointwise null band: auto-FLOC of `replicates` random permutations of the
// column (which destroy serial dependence but keep the marginal law); the
// band at each lag is the central `level` interval of the null values.
void attach_null_band(AutoFlocSeries& series, std::span<const double> column,
                      std::size_t replicates, double level, std::uint64_t seed);

// sup_x |F_n(x) - F(x)| against the tabulated fitted law.
double ks_statistic(std::span<const double> sample, const StableCdfTable& cdf);

struct KsTestResult {
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t repetitions = 0;
  std::size_t exceedances = 0;  // simulated statistics >= observed
  StableParams fitted;
};

inline constexpr std::size_t kMinKsRepetitions = 100;

// Parametric-bootstrap Kolmogorov-Smirnov test of a stable law: fit, compute
// the statistic, then for each repetition draw a same-length sample from the
// fitted law on substream derive_seed(seed, i), refit, and recompute.
// p_value = exceedances / repetitions. Requires length >= 100 and
// repetitions >= 100.
KsTestResult ks_test_stable(std::span<const double> column, std::size_t repetitions,
                            std::uint64_t seed);

struct QqPoint {
  double level = 0.0;
  double empirical = 0.0;
  double fitted = 0.0;
};

// Levels (k + 0.5) / grid, k = 0..grid-1. Empirical quantiles interpolate
// the order statistics linearly; fitted quantiles invert stable_cdf.
std::vector<QqPoint> qq_data(std::span<const double> column, const StableParams& fitted,
                             std::size_t grid);

void write_auto_floc_csv(const AutoFlocSeries& series, std::ostream& out);
void write_qq_csv(std::span<const QqPoint> points, std::ostream& out);
// One line: statistic, p-value, repetitions, fitted parameters.
void write_ks_summary(const KsTestResult& result, std::ostream& out);

}  // namespace flocvar

#endif  // FLOCVAR_DIAGNOSTICS_HPP_
