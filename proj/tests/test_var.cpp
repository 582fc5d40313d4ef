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
#include <vector>

#include <Eigen/Eigenvalues>

#include "flocvar/error.hpp"
#include "flocvar/var.hpp"

using namespace flocvar;

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

VarModel sweep_model(double alpha) {
  return VarModel({mat2(0.1, 0.3, 0.2, 0.1), mat2(0.2, 0.2, 0.05, 0.1)},
                  SymmetricStableNoiseSpec::iid(2, alpha, 1.0));
}

// Roots of det(I - A1 z - A2 z^2) for a 2x2 VAR(2), found as eigenvalues of
// the hand-built 4x4 block matrix with a general (non-symmetric) solver.
double radius_by_hand(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2) {
  Eigen::Matrix4d c = Eigen::Matrix4d::Zero();
  c.block<2, 2>(0, 0) = a1;
  c.block<2, 2>(0, 2) = a2;
  c(2, 0) = 1.0;
  c(3, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix4d> solver(c);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("causality examples") {
  const auto half = is_causal(std::vector<Eigen::MatrixXd>{0.5 * Eigen::MatrixXd::Identity(2, 2)});
  CHECK(half.causal);
  CHECK(half.spectral_radius == doctest::Approx(0.5));

  const auto unit = is_causal(std::vector<Eigen::MatrixXd>{Eigen::MatrixXd::Identity(2, 2)});
  CHECK_FALSE(unit.causal);
  CHECK(unit.spectral_radius == doctest::Approx(1.0));

  const auto model = sweep_model(1.6);
  const auto report = is_causal(model);
  CHECK(report.causal);
  CHECK(report.spectral_radius == doctest::Approx(radius_by_hand(model.coeff(0), model.coeff(1))));
  CHECK(report.spectral_radius < 1.0);
}

TEST_CASE("model validation") {
  const auto noise = SymmetricStableNoiseSpec::iid(2, 1.5, 1.0);
  CHECK_THROWS_AS(VarModel({}, noise), ValidationError);
  CHECK_THROWS_AS(VarModel({Eigen::MatrixXd::Zero(2, 3)}, noise), ValidationError);
  CHECK_THROWS_AS(VarModel({Eigen::MatrixXd::Zero(3, 3)}, noise), ValidationError);
  const VarModel explosive({2.0 * Eigen::MatrixXd::Identity(2, 2)}, noise);
  CHECK_THROWS_AS(simulate(explosive, 10, 0, 1), ValidationError);
  CHECK_THROWS_AS(psi_matrices(explosive, 3), ValidationError);
}

TEST_CASE("psi matrices") {
  const auto model = sweep_model(1.6);
  const auto psi = psi_matrices(model, 5);
  REQUIRE(psi.size() == 6);
  CHECK(psi[0].isApprox(Eigen::MatrixXd::Identity(2, 2)));
  CHECK(psi[1].isApprox(model.coeff(0)));
  const Eigen::MatrixXd psi2 = model.coeff(0) * model.coeff(0) + model.coeff(1);
  CHECK((psi[2] - psi2).cwiseAbs().maxCoeff() < 1e-15);

  const Eigen::MatrixXd a = mat2(0.5, 0.1, -0.2, 0.3);
  const VarModel var1({a}, SymmetricStableNoiseSpec::iid(2, 1.5, 1.0));
  const auto p1 = psi_matrices(var1, 6);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(2, 2);
  for (std::size_t j = 0; j <= 6; ++j) {
    CHECK((p1[j] - power).cwiseAbs().maxCoeff() < 1e-15);
    power = power * a;
  }
  const auto n = psi_truncation(model, 1e-10);
  CHECK(n > 0);
  CHECK(psi_matrices(model, n).back().cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("simulate equals the moving-average sum from a zero start") {
  const auto model = sweep_model(1.7);
  const std::size_t n = 60;
  const auto x = simulate(model, n, 0, 17);
  const auto z = sample_noise_matrix(model.noise(), n, 17);
  const auto psi = psi_matrices(model, n);
  double worst = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j <= t; ++j) {
      acc += psi[j] * Eigen::Vector2d(z(t - j, 0), z(t - j, 1));
    }
    worst = std::max(worst, std::abs(acc(0) - x(t, 0)) + std::abs(acc(1) - x(t, 1)));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("zero coefficients reproduce the noise draw") {
  const VarModel zero({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(2, 2)},
                      SymmetricStableNoiseSpec::iid(2, 1.6, 1.0));
  CHECK(simulate(zero, 200, 0, 5) == sample_noise_matrix(zero.noise(), 200, 5));
  CHECK(simulate(zero, 200, 30, 5) == sample_noise_matrix(zero.noise(), 230, 5).rows(30, 200));
  CHECK(simulate(zero, 200, 30, 5) == simulate(zero, 200, 30, 5));
}

TEST_CASE("gaussian simulation matches the stationary covariance") {
  const auto model = sweep_model(2.0);
  const auto x = simulate(model, 200000, 500, 23);
  // Gamma_0 = sum_j Psi_j (2 I) Psi_j', noise variance 2 sigma^2.
  Eigen::MatrixXd gamma0 = Eigen::MatrixXd::Zero(2, 2);
  for (const auto& psi : psi_matrices(model, 400)) gamma0 += 2.0 * psi * psi.transpose();
  const Eigen::MatrixXd centered = x.values().rowwise() - x.values().colwise().mean();
  const Eigen::MatrixXd sample = centered.transpose() * centered / static_cast<double>(x.length());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(sample(i, j) - gamma0(i, j)) < 0.1 * gamma0(i, i));
    }
  }
}

TEST_CASE("causality is invariant under similarity transforms") {
  const Eigen::MatrixXd a1 = mat2(0.1, 0.3, 0.2, 0.1);
  const Eigen::MatrixXd a2 = mat2(0.2, 0.2, 0.05, 0.1);
  const Eigen::MatrixXd t = mat2(2.0, 1.0, 0.5, 3.0);
  const Eigen::MatrixXd ti = t.inverse();
  const auto before = is_causal(std::vector<Eigen::MatrixXd>{a1, a2});
  const auto after = is_causal(std::vector<Eigen::MatrixXd>{t * a1 * ti, t * a2 * ti});
  CHECK(before.spectral_radius == doctest::Approx(after.spectral_radius).epsilon(1e-12));
}

TEST_CASE("companion matrix layout") {
  const Eigen::MatrixXd a1 = mat2(1, 2, 3, 4);
  const Eigen::MatrixXd a2 = mat2(5, 6, 7, 8);
  const auto c = companion_matrix(std::vector<Eigen::MatrixXd>{a1, a2});
  REQUIRE(c.rows() == 4);
  CHECK(c.block(0, 0, 2, 2) == a1);
  CHECK(c.block(0, 2, 2, 2) == a2);
  CHECK(c.block(2, 0, 2, 2) == Eigen::MatrixXd::Identity(2, 2));
  CHECK(c.block(2, 2, 2, 2) == Eigen::MatrixXd::Zero(2, 2));
}

TEST_CASE("mean correction") {
  Eigen::MatrixXd v(2, 2);
  v << 1, 4, 3, 8;
  Eigen::VectorXd means;
  const auto c = mean_correct(SeriesMatrix(v), &means);
  Eigen::MatrixXd expected(2, 2);
  expected << -1, -2, 1, 2;
  CHECK(c.values() == expected);
  CHECK(means(0) == 2.0);
  CHECK(means(1) == 6.0);

  const auto flat = mean_correct(SeriesMatrix(Eigen::MatrixXd::Constant(5, 1, 3.5)));
  CHECK(flat.values().cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(mean_correct(SeriesMatrix(Eigen::MatrixXd::Zero(1, 2))), ValidationError);
}
