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

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "flocvar/error.hpp"
#include "flocvar/floc.hpp"
#include "flocvar/var.hpp"

using namespace flocvar;

namespace {

// Independent oracle: 1-based double loop over every (n, m) pair with
// m = n - k, kept only when both indices fall inside 1..N.
double brute_floc(const std::vector<double>& x, const std::vector<double>& y, long k, double a,
                  double b, bool full) {
  const long n_len = static_cast<long>(x.size());
  long double sum = 0.0L;
  long count = 0;
  for (long n = 1; n <= n_len; ++n) {
    for (long m = 1; m <= n_len; ++m) {
      if (n - m != k) continue;
      const double u = x[static_cast<std::size_t>(n - 1)];
      const double v = y[static_cast<std::size_t>(m - 1)];
      const double su = u > 0 ? std::pow(u, a) : (u < 0 ? -std::pow(-u, a) : 0.0);
      const double sv = v > 0 ? std::pow(v, b) : (v < 0 ? -std::pow(-v, b) : 0.0);
      sum += static_cast<long double>(su) * static_cast<long double>(sv);
      ++count;
    }
  }
  return static_cast<double>(sum / static_cast<long double>(full ? n_len : count));
}

}  // namespace

TEST_CASE("signed power") {
  CHECK(signed_power(-4.0, 0.5) == -2.0);
  CHECK(signed_power(3.7, 1.0) == 3.7);
  CHECK(signed_power(-3.7, 1.0) == -3.7);
  CHECK(signed_power(0.0, 0.0) == 0.0);
  CHECK(signed_power(-2.0, 0.0) == -1.0);
  CHECK_THROWS_AS(signed_power(1.0, -0.5), ValidationError);
}

TEST_CASE("cross_floc hand examples") {
  const std::vector<double> ones(9, 1.0);
  CHECK(cross_floc(ones, ones, 0, {0.7, 0.3}) == doctest::Approx(1.0));
  const std::vector<double> x{1, -2, 3};
  const std::vector<double> y{2, -1, 1};
  CHECK(cross_floc(x, y, 0, {1.0, 1.0}) == doctest::Approx(7.0 / 3.0));
  CHECK(cross_floc(x, y, 1, {1.0, 0.5}) == doctest::Approx((-2.0 * std::sqrt(2.0) - 3.0) / 2.0));
  CHECK(cross_floc(x, y, 1, {1.0, 0.5}) == doctest::Approx(-2.9142).epsilon(1e-4));
}

TEST_CASE("cross_floc errors") {
  const std::vector<double> x{1, 2, 3};
  CHECK_THROWS_AS(cross_floc(x, x, 3, {}), ValidationError);
  CHECK_THROWS_AS(cross_floc(x, x, -3, {}), ValidationError);
  CHECK_THROWS_AS(cross_floc(x, std::vector<double>{1, 2}, 0, {}), ValidationError);
  CHECK_THROWS_AS(cross_floc(std::vector<double>{}, std::vector<double>{}, 0, {}), ValidationError);
  CHECK_THROWS_AS(cross_floc(x, x, 0, FlocConfig{1.0, 0.8, 1.6}), ValidationError);
  CHECK_NOTHROW(cross_floc(x, x, 0, FlocConfig{1.0, 0.55, 1.6}));
  CHECK_NOTHROW(cross_floc(x, x, 0, FlocConfig{1.0, 1.0, 2.0}));
  CHECK(FlocConfig{1.0, 1.0}.moment_warning().has_value());
  CHECK_FALSE(FlocConfig{1.0, 0.5}.moment_warning().has_value());
}

TEST_CASE("cross_floc matches the brute-force oracle") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::cauchy_distribution<double> heavy(0.0, 1.0);
  double worst = 0.0;
  for (int c = 0; c < 300; ++c) {
    const int n = len(gen);
    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    for (auto& v : x) v = unit(gen) < 0.1 ? 0.0 : heavy(gen);
    for (auto& v : y) v = heavy(gen);
    const long k = std::uniform_int_distribution<long>(1 - n, n - 1)(gen);
    const double a = unit(gen) < 0.2 ? 1.0 : 1.5 * unit(gen);
    const double b = unit(gen) < 0.2 ? 0.0 : 1.5 * unit(gen);
    for (bool full : {false, true}) {
      const double got = cross_floc(x, y, k, {a, b}, full ? Normalizer::Full : Normalizer::Window);
      const double want = brute_floc(x, y, k, a, b, full);
      worst = std::max(worst, std::abs(got - want) / std::max(1e-300, std::abs(want)));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("FLOC is asymmetric when A != B") {
  const std::vector<double> x{2.0, -1.0, 4.0, 0.5};
  const std::vector<double> y{1.0, 3.0, -2.0, 1.5};
  const FlocConfig cfg{1.0, 0.5};
  CHECK(std::abs(cross_floc(x, y, 0, cfg) - cross_floc(y, x, 0, cfg)) > 0.01);
  const FlocConfig same{0.6, 0.6};
  CHECK(cross_floc(x, y, 0, same) == doctest::Approx(cross_floc(y, x, 0, same)));
}

TEST_CASE("FLOC homogeneity and oddness") {
  std::mt19937_64 gen(7);
  std::normal_distribution<double> nd;
  std::vector<double> x(50), y(50);
  for (auto& v : x) v = nd(gen);
  for (auto& v : y) v = nd(gen);
  const FlocConfig cfg{1.0, 0.55};
  const double base = cross_floc(x, y, 2, cfg);
  auto scaled = [](std::vector<double> v, double s) {
    for (auto& e : v) e *= s;
    return v;
  };
  CHECK(cross_floc(scaled(x, 3.0), y, 2, cfg) == doctest::Approx(3.0 * base));
  CHECK(cross_floc(x, scaled(y, 2.0), 2, cfg) == doctest::Approx(std::pow(2.0, 0.55) * base));
  CHECK(cross_floc(scaled(x, -1.0), y, 2, cfg) == doctest::Approx(-base));
  CHECK(cross_floc(x, scaled(y, -1.0), 2, cfg) == doctest::Approx(-base));
}

TEST_CASE("lag matrices") {
  const auto model = VarModel({Eigen::MatrixXd::Zero(2, 2)}, SymmetricStableNoiseSpec::iid(2, 2.0, 1.0));
  const auto noise = simulate(model, 20000, 0, 3);
  const auto g0 = lag_matrix(noise, 0, {1.0, 1.0});
  CHECK(g0(0, 0) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(g0(1, 1) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(std::abs(g0(0, 1)) < 0.06);

  Eigen::MatrixXd v(5, 1);
  v << 1, -2, 0.5, 3, -1;
  const SeriesMatrix single(v);
  const FlocConfig cfg{1.0, 0.4};
  CHECK(lag_matrix(single, 1, cfg)(0, 0) == cross_floc(single.column(0), single.column(0), 1, cfg));

  const auto x = simulate(VarModel({Eigen::MatrixXd::Identity(2, 2) * 0.4},
                                   SymmetricStableNoiseSpec::iid(2, 1.7, 1.0)),
                          50, 10, 9);
  const auto set = lag_matrix_set(x, 2, cfg);
  CHECK(set.min_lag() == -1);
  CHECK(set.max_lag() == 2);
  for (long lag = -1; lag <= 2; ++lag) CHECK(set.at(lag) == lag_matrix(x, lag, cfg));
  CHECK_THROWS_AS(set.at(3), ValidationError);
  const auto set1 = lag_matrix_set(x, 1, cfg);
  CHECK(set1.min_lag() == 0);
  CHECK(set1.max_lag() == 1);
  CHECK_THROWS_AS(lag_matrix_set(x.rows(0, 4), 2, cfg), ValidationError);

  std::ostringstream out;
  write_lag_matrix_set_csv(set1, out);
  CHECK(out.str().rfind("lag,i,j,value\n0,1,1,", 0) == 0);
}

TEST_CASE("gaussian lag matrices match naive cross moments") {
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 0.1, 0.3, 0.2, 0.1;
  a2 << 0.2, 0.2, 0.05, 0.1;
  const auto x = simulate(VarModel({a1, a2}, SymmetricStableNoiseSpec::iid(2, 2.0, 1.0)), 10000, 500, 4);
  const long n = static_cast<long>(x.length());
  for (long lag : {-1L, 0L, 1L, 2L}) {
    const auto g = lag_matrix(x, lag, {1.0, 1.0});
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        double s = 0.0;
        long c = 0;
        for (long t = 0; t < n; ++t) {
          if (t - lag < 0 || t - lag >= n) continue;
          s += x(static_cast<std::size_t>(t), i) * x(static_cast<std::size_t>(t - lag), j);
          ++c;
        }
        CHECK(std::abs(g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) - s / c) < 0.05);
      }
    }
  }
  // Moment equations at alpha = 2: Gamma_1 ~ A1 Gamma_0 + A2 Gamma_-1.
  const FlocConfig cfg{1.0, 1.0};
  const Eigen::MatrixXd lhs = lag_matrix(x, 1, cfg);
  const Eigen::MatrixXd rhs = a1 * lag_matrix(x, 0, cfg) + a2 * lag_matrix(x, -1, cfg);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("covariation relation is an identity") {
  const auto x = simulate(VarModel({Eigen::MatrixXd::Constant(2, 2, 0.2)},
                                   SymmetricStableNoiseSpec::iid(2, 1.6, 1.0)),
                          2000, 100, 12);
  const auto check = floc_vs_covariation_check(x.column(0), x.column(1), 1.4, 1.3, 1.6);
  CHECK(std::abs(check.floc - check.covariation_implied) <= 1e-12 * std::abs(check.floc));
  CHECK(check.floc == cross_floc(x.column(0), x.column(1), 0, FlocConfig{1.0, 1.4 - 1.0}));

  const auto q1 = floc_vs_covariation_check(x.column(0), x.column(1), 1.0, 1.0, 1.6);
  double sign_moment = 0.0;
  for (std::size_t t = 0; t < x.length(); ++t) {
    sign_moment += x(t, 0) * (x(t, 1) > 0 ? 1.0 : (x(t, 1) < 0 ? -1.0 : 0.0));
  }
  CHECK(q1.floc == doctest::Approx(sign_moment / static_cast<double>(x.length())));
  CHECK(std::abs(q1.floc - q1.covariation_implied) <= 1e-12 * std::abs(q1.floc));
  CHECK_THROWS_AS(floc_vs_covariation_check(x.column(0), x.column(1), 1.7, 1.0, 1.6), ValidationError);
}
