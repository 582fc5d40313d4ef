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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "flocvar/error.hpp"
#include "flocvar/stable.hpp"

namespace flocvar {

namespace {

constexpr double kPi = std::numbers::pi;

// Linear-interpolated sample quantile of sorted data (Hyndman-Fan type 7).
double sorted_quantile(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Quartile and 95% quantile of the standard symmetric law (sigma = 1) on an
// alpha grid, precomputed with stable_quantile. Cauchy and N(0, 2) rows match
// their closed forms.
struct QuantileRow {
  double alpha;
  double q75;
  double q95;
};

constexpr QuantileRow kQuantileRows[] = {
    {0.50, 1.2838327751893281, 57.304027730637166},
    {0.55, 1.2145669458154353, 38.338497081966459},
    {0.60, 1.1621039636767039, 27.439818699486409},
    {0.65, 1.1216498544244637, 20.682793253195218},
    {0.70, 1.0900642200356288, 16.235162461776646},
    {0.75, 1.065200507810097, 13.163239069717374},
    {0.80, 1.0455347353335682, 10.956245660647323},
    {0.85, 1.0299462451649917, 9.3179402886638805},
    {0.90, 1.017583407564651, 8.0679023647598296},
    {0.95, 1.0077795263519993, 7.091609370016668},
    {1.00, 1, 6.313751514675042},
    {1.05, 0.99380957985530771, 5.6832747076641255},
    {1.10, 0.98885233156625341, 5.1646460843667175},
    {1.15, 0.98483889554483606, 4.7325677188434598},
    {1.20, 0.98153720039630155, 4.3686754308384188},
    {1.25, 0.97876436831916958, 4.0594192452504636},
    {1.30, 0.97637894032638239, 3.7946674080259295},
    {1.35, 0.97427341478740348, 3.5667624232626247},
    {1.40, 0.9723674032098103, 3.3698605064446423},
    {1.45, 0.97060167152601229, 3.1994446127294625},
    {1.50, 0.96893318171358334, 3.0519409732383109},
    {1.55, 0.96733110916742526, 2.9244068377088897},
    {1.60, 0.96577372722348342, 2.8142928061479258},
    {1.65, 0.964246016719156, 2.7192967295821355},
    {1.70, 0.96273785752443275, 2.6373069810075958},
    {1.75, 0.96124267446641598, 2.566404149626186},
    {1.80, 0.95975643140233191, 2.5048814807864979},
    {1.85, 0.95827688860746529, 2.4512574865135974},
    {1.90, 0.9568030575473947, 2.4042722186076211},
    {1.95, 0.95533480269549809, 2.3628699331284393},
    {2.00, 0.95387255240893987, 2.3261743073533476}
};

// spread(alpha) = q95 / q75 = (q95 - q05) / (q75 - q25) and q75(alpha), the
// latter relating the interquartile range to sigma.
struct QuantileTable {
  static constexpr double kStart = kMinFitAlpha;
  static constexpr double kStep = 0.05;
  static constexpr std::size_t kSize = std::size(kQuantileRows);
  std::array<double, kSize> alpha{};
  std::array<double, kSize> spread{};
  std::array<double, kSize> q75{};

  QuantileTable() {
    for (std::size_t k = 0; k < kSize; ++k) {
      alpha[k] = kQuantileRows[k].alpha;
      q75[k] = kQuantileRows[k].q75;
      spread[k] = kQuantileRows[k].q95 / kQuantileRows[k].q75;
    }
  }

  static const QuantileTable& get() {
    static const QuantileTable table;
    return table;
  }

  // spread decreases in alpha.
  double alpha_for_spread(double ratio) const {
    if (ratio >= spread.front()) return alpha.front();
    if (ratio <= spread.back()) return alpha.back();
    std::size_t k = 0;
    while (k + 1 < kSize && spread[k + 1] > ratio) ++k;
    const double w = (spread[k] - ratio) / (spread[k] - spread[k + 1]);
    return alpha[k] + w * (alpha[k + 1] - alpha[k]);
  }

  double q75_at(double a) const {
    const double pos = std::clamp((a - kStart) / kStep, 0.0, static_cast<double>(kSize - 1));
    const auto k = std::min(static_cast<std::size_t>(pos), kSize - 2);
    const double w = pos - static_cast<double>(k);
    return q75[k] + w * (q75[k + 1] - q75[k]);
  }
};

std::complex<double> empirical_cf(const std::vector<double>& y, double t) {
  double re = 0.0;
  double im = 0.0;
  for (double v : y) {
    re += std::cos(t * v);
    im += std::sin(t * v);
  }
  const double n = static_cast<double>(y.size());
  return {re / n, im / n};
}

// Number of regression frequencies, decreasing with alpha (heavier tails
// keep |phi| away from zero longer).
std::size_t scale_points(double alpha) {
  if (alpha >= 1.9) return 9;
  if (alpha >= 1.5) return 11;
  if (alpha >= 1.3) return 14;
  if (alpha >= 1.1) return 16;
  if (alpha >= 0.9) return 18;
  if (alpha >= 0.7) return 22;
  return 24;
}

std::size_t location_points(double alpha) {
  if (alpha >= 1.5) return 10;
  if (alpha >= 1.1) return 14;
  return 20;
}

struct ScaleFit {
  double alpha;
  double scale;  // multiplicative update of the standardizing scale
};

// log(-log|phi(t)|^2) = log 2 + alpha log sigma + alpha log t.
ScaleFit regress_scale(const std::vector<double>& y, double alpha_guess) {
  const std::size_t k_max = scale_points(alpha_guess);
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double t = kPi * static_cast<double>(k) / 25.0;
    const double mod2 = std::norm(empirical_cf(y, t));
    if (!(mod2 > 1e-8 && mod2 < 1.0)) continue;
    xs.push_back(std::log(t));
    ys.push_back(std::log(-std::log(mod2)));
  }
  if (xs.size() < 3) throw NumericalError("stable fit: empirical characteristic function degenerate");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = std::clamp(sxy / sxx, kMinFitAlpha, 2.0);
  const double intercept = my - slope * mx;
  return {slope, std::pow(std::exp(intercept) / 2.0, 1.0 / slope)};
}

struct LocationFit {
  double beta;
  double shift;  // additive location update in standardized units
};

// arg phi(u) = delta u + beta tan(pi alpha / 2) u^alpha   (sigma = 1)
LocationFit regress_location(const std::vector<double>& y, double alpha) {
  const std::size_t l_max = location_points(alpha);
  const double tan_term = alpha == 1.0 ? 0.0 : std::tan(kPi * alpha / 2.0);
  const bool skew_identified = std::abs(tan_term) > 1e-3;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(l_max), skew_identified ? 2 : 1);
  Eigen::VectorXd target(static_cast<Eigen::Index>(l_max));
  for (std::size_t l = 1; l <= l_max; ++l) {
    const double u = kPi * static_cast<double>(l) / 50.0;
    const auto i = static_cast<Eigen::Index>(l - 1);
    target(i) = std::arg(empirical_cf(y, u));
    design(i, 0) = u;
    if (skew_identified) design(i, 1) = tan_term * std::pow(u, alpha);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(target);
  return {skew_identified ? coef(1) : 0.0, coef(0)};
}

}  // namespace

StableParams fit_stable_params(std::span<const double> sample) {
  if (sample.size() < kMinFitSample) {
    throw ValidationError("stable fit needs at least " + std::to_string(kMinFitSample) +
                          " observations, got " + std::to_string(sample.size()));
  }
  for (double v : sample) {
    if (!std::isfinite(v)) throw ValidationError("stable fit: sample contains non-finite values");
  }
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) {
    throw DegenerateInputError("stable fit: sample is constant");
  }

  // Quantile initialization.
  const auto& table = QuantileTable::get();
  const double q05 = sorted_quantile(sorted, 0.05);
  const double q25 = sorted_quantile(sorted, 0.25);
  const double q50 = sorted_quantile(sorted, 0.50);
  const double q75 = sorted_quantile(sorted, 0.75);
  const double q95 = sorted_quantile(sorted, 0.95);
  double alpha = 2.0;
  double scale;
  if (q75 > q25) {
    alpha = table.alpha_for_spread((q95 - q05) / (q75 - q25));
    scale = (q75 - q25) / (2.0 * table.q75_at(alpha));
  } else {
    // Heavily tied data: fall back to the mean absolute deviation.
    double mad = 0.0;
    for (double v : sorted) mad += std::abs(v - q50);
    scale = mad / static_cast<double>(sorted.size());
  }
  double loc = q50;
  double beta = 0.0;

  // Iterated characteristic-function regressions on standardized data.
  std::vector<double> y(sample.size());
  auto standardize = [&] {
    for (std::size_t i = 0; i < sample.size(); ++i) y[i] = (sample[i] - loc) / scale;
  };
  for (int iter = 0; iter < 20; ++iter) {
    standardize();
    const ScaleFit sf = regress_scale(y, alpha);
    alpha = sf.alpha;
    scale *= sf.scale;
    standardize();
    const LocationFit lf = regress_location(y, alpha);
    beta = std::clamp(lf.beta, -1.0, 1.0);
    loc += scale * lf.shift;
    if (std::abs(sf.scale - 1.0) < 1e-6 && std::abs(lf.shift) < 1e-6) break;
  }

  StableParams fitted{alpha, beta, scale, loc};
  fitted.validate();
  return fitted;
}

}  // namespace flocvar
