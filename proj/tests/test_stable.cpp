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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "flocvar/error.hpp"
#include "flocvar/stable.hpp"

using namespace flocvar;

namespace {

constexpr double kPi = std::numbers::pi;

double mean_cos(const std::vector<double>& xs, double t) {
  double s = 0.0;
  for (double x : xs) s += std::cos(t * x);
  return s / static_cast<double>(xs.size());
}

std::complex<double> ecf(const std::vector<double>& xs, double t) {
  std::complex<double> s = 0.0;
  for (double x : xs) s += std::polar(1.0, t * x);
  return s / static_cast<double>(xs.size());
}

double median(std::vector<double> xs) {
  const auto mid = xs.begin() + static_cast<long>(xs.size() / 2);
  std::nth_element(xs.begin(), mid, xs.end());
  return *mid;
}

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

}  // namespace

TEST_CASE("char_fn_sas closed form") {
  CHECK(char_fn_sas(StableParams::symmetric(1.6, 1.0), 0.0) == doctest::Approx(1.0));
  CHECK(char_fn_sas(StableParams::symmetric(2.0, 1.0), 1.0) == doctest::Approx(std::exp(-1.0)));
  CHECK(char_fn_sas(StableParams::symmetric(1.5, 2.0), 0.5) == doctest::Approx(std::exp(-1.0)));
  const auto p = StableParams::symmetric(1.3, 0.7);
  for (double t : {0.1, 0.9, 3.0}) CHECK(char_fn_sas(p, t) == char_fn_sas(p, -t));
}

TEST_CASE("char_fn general form") {
  const StableParams p{1.5, 0.5, 2.0, 0.3};
  const double t = 0.7;
  const double tail = std::pow(2.0 * t, 1.5);
  const std::complex<double> expected =
      std::exp(std::complex<double>(-tail, tail * 0.5 * std::tan(kPi * 0.75) + 0.3 * t));
  CHECK(std::abs(char_fn(p, t) - expected) < 1e-14);
  CHECK(std::abs(char_fn(p, -t) - std::conj(expected)) < 1e-14);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(StableParams::symmetric(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(StableParams::symmetric(2.1, 1.0), ValidationError);
  CHECK_THROWS_AS(StableParams::symmetric(1.5, 0.0), ValidationError);
  CHECK_THROWS_AS((StableParams{1.5, 1.5, 1.0, 0.0}.validate()), ValidationError);
  CHECK_THROWS_AS(sample_sas(StableParams{1.5, 0.3, 1.0, 0.0}, 10, 1), ValidationError);
  CHECK_THROWS_AS(char_fn_sas(StableParams{1.5, 0.0, 1.0, 1.0}, 1.0), ValidationError);
}

TEST_CASE("symmetric sampler matches the characteristic function") {
  for (double alpha : {1.5, 1.6, 1.85, 2.0}) {
    const auto xs = sample_sas(StableParams::symmetric(alpha, 1.0), 100000, 11);
    for (double t : {0.5, 1.0, 2.0}) {
      CHECK(std::abs(mean_cos(xs, t) - std::exp(-std::pow(t, alpha))) < 0.01);
    }
  }
}

TEST_CASE("gaussian limit variance and symmetric median") {
  const auto g = sample_sas(StableParams::symmetric(2.0, 1.0 / std::sqrt(2.0)), 100000, 3);
  double m2 = 0.0;
  for (double x : g) m2 += x * x;
  CHECK(m2 / static_cast<double>(g.size()) == doctest::Approx(1.0).epsilon(0.05));
  const auto s = sample_sas(StableParams::symmetric(1.5, 1.0), 100000, 4);
  CHECK(std::abs(median(s)) < 0.02);
}

TEST_CASE("skewed and alpha = 1 samplers match char_fn") {
  for (const StableParams p : {StableParams{1.5, 0.7, 1.0, 0.5}, StableParams{1.0, -0.5, 1.5, 0.0},
                               StableParams{0.8, 0.3, 0.5, -1.0}, StableParams{1.0, 0.0, 1.0, 0.0}}) {
    const auto xs = sample_stable(p, 100000, 21);
    for (double t : {0.3, 1.0}) {
      CHECK(std::abs(ecf(xs, t) - char_fn(p, t)) < 0.01);
    }
  }
}

TEST_CASE("sampling is deterministic per seed") {
  const auto p = StableParams::symmetric(1.7, 1.0);
  CHECK(sample_sas(p, 500, 9) == sample_sas(p, 500, 9));
  CHECK(sample_sas(p, 500, 9) != sample_sas(p, 500, 10));
}

TEST_CASE("noise matrix columns") {
  const auto spec = SymmetricStableNoiseSpec::iid(2, 1.8, 1.0);
  const auto z = sample_noise_matrix(spec, 3, 5);
  CHECK(z.length() == 3);
  CHECK(z.dim() == 2);
  CHECK(sample_noise_matrix(spec, 3, 5) == z);

  const auto big = sample_noise_matrix(spec, 50000, 6);
  double cross = 0.0;
  for (std::size_t t = 0; t < big.length(); ++t) {
    cross += std::copysign(1.0, big(t, 0)) * std::copysign(1.0, big(t, 1));
  }
  CHECK(std::abs(cross / 50000.0) < 0.02);

  const SymmetricStableNoiseSpec gauss{{StableParams::symmetric(2.0, 1.0)}};
  const auto col = sample_noise_matrix(gauss, 20000, 8);
  double m2 = 0.0;
  for (double x : col.column(0)) m2 += x * x;
  CHECK(m2 / 20000.0 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("fit recovers sampler parameters") {
  const auto g = sample_sas(StableParams::symmetric(2.0, 1.0), 100000, 31);
  const auto fg = fit_stable_params(g);
  CHECK(fg.alpha >= 1.9);
  CHECK(fg.alpha <= 2.0);
  CHECK(std::abs(fg.delta) < 0.05);

  const auto h = sample_sas(StableParams::symmetric(1.6, 1.0), 100000, 32);
  const auto fh = fit_stable_params(h);
  CHECK(std::abs(fh.alpha - 1.6) < 0.1);
  CHECK(fh.sigma == doctest::Approx(1.0).epsilon(0.05));

  const StableParams skew{1.7, 0.6, 2.0, 1.0};
  const auto f = fit_stable_params(sample_stable(skew, 100000, 33));
  CHECK(std::abs(f.alpha - 1.7) < 0.05);
  CHECK(std::abs(f.beta - 0.6) < 0.2);
  CHECK(std::abs(f.sigma - 2.0) < 0.1);
  CHECK(std::abs(f.delta - 1.0) < 0.15);
}

TEST_CASE("fit rejects bad samples") {
  CHECK_THROWS_AS(fit_stable_params(std::vector<double>(50, 1.0)), ValidationError);
  CHECK_THROWS_AS(fit_stable_params(std::vector<double>(500, 1.0)), DegenerateInputError);
  std::vector<double> bad(500, 0.0);
  bad[3] = std::nan("");
  CHECK_THROWS_AS(fit_stable_params(bad), ValidationError);
}

TEST_CASE("cdf against closed forms") {
  const auto gauss = StableParams::symmetric(2.0, 1.0);
  const StableParams cauchy{1.0, 0.0, 1.0, 0.0};
  for (double x : {-4.0, -1.3, 0.0, 0.2, 2.5, 7.0}) {
    CHECK(std::abs(stable_cdf(gauss, x) - normal_cdf(x, std::sqrt(2.0))) < 1e-6);
    CHECK(std::abs(stable_cdf(cauchy, x) - (0.5 + std::atan(x) / kPi)) < 1e-6);
  }
  CHECK(std::abs(stable_pdf(gauss, 0.0) - 1.0 / std::sqrt(4.0 * kPi)) < 1e-8);
  CHECK(std::abs(stable_pdf(cauchy, 1.0) - 1.0 / (2.0 * kPi)) < 1e-8);
  const auto sas = StableParams::symmetric(1.6, 1.0);
  CHECK(stable_cdf(sas, 0.0) == doctest::Approx(0.5));
  CHECK(stable_cdf(sas, 1.2) + stable_cdf(sas, -1.2) == doctest::Approx(1.0));
}

TEST_CASE("cdf against the sampler") {
  const StableParams p{1.4, -0.6, 1.5, 0.4};
  auto xs = sample_stable(p, 100000, 41);
  std::sort(xs.begin(), xs.end());
  for (double x : {-3.0, -0.5, 0.4, 1.0, 4.0}) {
    const double emp = static_cast<double>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) /
                       static_cast<double>(xs.size());
    CHECK(std::abs(stable_cdf(p, x) - emp) < 0.006);
  }
}

TEST_CASE("quantile inverts the cdf") {
  for (const StableParams p : {StableParams::symmetric(1.85, 1.0), StableParams{1.3, 0.5, 2.0, -1.0}}) {
    for (double level : {0.01, 0.25, 0.5, 0.9}) {
      CHECK(stable_cdf(p, stable_quantile(p, level)) == doctest::Approx(level).epsilon(1e-8));
    }
  }
  CHECK(std::abs(stable_quantile(StableParams::symmetric(2.0, 1.0 / std::sqrt(2.0)), 0.5)) < 1e-10);
  CHECK(stable_quantile(StableParams::symmetric(2.0, 1.0), 0.95) ==
        doctest::Approx(1.6448536269514722 * std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("cdf table agrees with direct inversion") {
  for (const StableParams p : {StableParams::symmetric(1.6, 1.0), StableParams{1.9, -0.7, 0.03, 0.01},
                               StableParams{1.2, 0.4, 2.0, 0.0}, StableParams::symmetric(2.0, 0.5)}) {
    const StableCdfTable table(p);
    double worst = 0.0;
    for (double z = -80.0; z <= 80.0; z += 0.37) {
      const double x = p.delta + p.sigma * z;
      worst = std::max(worst, std::abs(table(x) - stable_cdf(p, x)));
    }
    CHECK(worst < 1e-6);
    CHECK(table(-1e300) == 0.0);
    CHECK(table(1e300) == 1.0);
  }
}
