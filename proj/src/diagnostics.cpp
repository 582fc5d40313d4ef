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

#include "flocvar/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "flocvar/error.hpp"
#include "flocvar/rng.hpp"

namespace flocvar {

AutoFlocSeries auto_floc(std::span<const double> column, std::size_t max_lag,
                         const FlocConfig& cfg) {
  cfg.validate();
  if (max_lag >= column.size()) {
    throw ValidationError("auto-FLOC max lag " + std::to_string(max_lag) +
                          " must be below the series length " + std::to_string(column.size()));
  }
  if (std::all_of(column.begin(), column.end(), [](double v) { return v == 0.0; })) {
    throw DegenerateInputError("auto-FLOC of an all-zero series");
  }
  AutoFlocSeries out;
  out.cfg = cfg;
  for (std::size_t k = 0; k <= max_lag; ++k) {
    out.lags.push_back(static_cast<long>(k));
    out.values.push_back(cross_floc(column, column, static_cast<long>(k), cfg));
  }
  return out;
}

namespace {

double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void attach_null_band(AutoFlocSeries& series, std::span<const double> column,
                      std::size_t replicates, double level, std::uint64_t seed) {
  if (replicates < 2) throw ValidationError("null band needs at least 2 replicates");
  if (!(level > 0.0 && level < 1.0)) throw ValidationError("band level must lie in (0, 1)");
  const std::size_t lags = series.lags.size();
  std::vector<std::vector<double>> null_values(lags, std::vector<double>(replicates));
  std::vector<double> shuffled(column.begin(), column.end());
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    // Fisher-Yates on an explicit generator so the band is reproducible
    // across standard libraries.
    Rng rng(seed, rep);
    std::copy(column.begin(), column.end(), shuffled.begin());
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(i));
      std::swap(shuffled[i - 1], shuffled[std::min(j, i - 1)]);
    }
    for (std::size_t k = 0; k < lags; ++k) {
      null_values[k][rep] = cross_floc(shuffled, shuffled, series.lags[k], series.cfg);
    }
  }
  series.band_lo.resize(lags);
  series.band_hi.resize(lags);
  const double tail = (1.0 - level) / 2.0;
  for (std::size_t k = 0; k < lags; ++k) {
    auto& v = null_values[k];
    std::sort(v.begin(), v.end());
    series.band_lo[k] = sorted_quantile(v, tail);
    series.band_hi[k] = sorted_quantile(v, 1.0 - tail);
  }
}

namespace {

double ks_statistic_sorted(std::span<const double> sorted, const StableCdfTable& cdf) {
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace

double ks_statistic(std::span<const double> sample, const StableCdfTable& cdf) {
  if (sample.empty()) throw ValidationError("KS statistic of an empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  return ks_statistic_sorted(sorted, cdf);
}

KsTestResult ks_test_stable(std::span<const double> column, std::size_t repetitions,
                            std::uint64_t seed) {
  if (column.size() < kMinFitSample) {
    throw ValidationError("KS test needs at least " + std::to_string(kMinFitSample) +
                          " observations");
  }
  if (repetitions < kMinKsRepetitions) {
    throw ValidationError("KS test needs at least " + std::to_string(kMinKsRepetitions) +
                          " Monte Carlo repetitions");
  }
  KsTestResult result;
  result.repetitions = repetitions;
  result.fitted = fit_stable_params(column);
  result.statistic = ks_statistic(column, StableCdfTable(result.fitted));

  for (std::size_t rep = 0; rep < repetitions; ++rep) {
    auto draw = sample_stable(result.fitted, column.size(), derive_seed(seed, rep));
    const StableParams refit = fit_stable_params(draw);
    std::sort(draw.begin(), draw.end());
    if (ks_statistic_sorted(draw, StableCdfTable(refit)) >= result.statistic) {
      ++result.exceedances;
    }
  }
  result.p_value = static_cast<double>(result.exceedances) / static_cast<double>(repetitions);
  return result;
}

std::vector<QqPoint> qq_data(std::span<const double> column, const StableParams& fitted,
                             std::size_t grid) {
  if (grid < 2) throw ValidationError("QQ grid needs at least 2 levels");
  if (column.empty()) throw ValidationError("QQ data of an empty sample");
  fitted.validate();
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<QqPoint> out;
  out.reserve(grid);
  for (std::size_t k = 0; k < grid; ++k) {
    const double level = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    out.push_back({level, sorted_quantile(sorted, level), stable_quantile(fitted, level)});
  }
  return out;
}

void write_auto_floc_csv(const AutoFlocSeries& series, std::ostream& out) {
  out << "lag,value,band_lo,band_hi\n";
  const bool band = series.band_lo.size() == series.values.size();
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    out << series.lags[k] << ',' << format_double(series.values[k]) << ',';
    if (band) out << format_double(series.band_lo[k]) << ',' << format_double(series.band_hi[k]);
    else out << ',';
    out << '\n';
  }
}

void write_qq_csv(std::span<const QqPoint> points, std::ostream& out) {
  out << "level,empirical,fitted\n";
  for (const auto& p : points) {
    out << format_double(p.level) << ',' << format_double(p.empirical) << ','
        << format_double(p.fitted) << '\n';
  }
}

void write_ks_summary(const KsTestResult& r, std::ostream& out) {
  out << "ks_statistic=" << format_double(r.statistic) << " p_value=" << format_double(r.p_value)
      << " repetitions=" << r.repetitions << " alpha=" << format_double(r.fitted.alpha)
      << " beta=" << format_double(r.fitted.beta) << " sigma=" << format_double(r.fitted.sigma)
      << " delta=" << format_double(r.fitted.delta) << '\n';
}

}  // namespace flocvar
