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

#include "flocvar/var.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "flocvar/error.hpp"

namespace flocvar {

VarModel::VarModel(std::vector<Eigen::MatrixXd> coeffs, SymmetricStableNoiseSpec noise)
    : coeffs_(std::move(coeffs)), noise_(std::move(noise)) {
  if (coeffs_.empty()) throw ValidationError("VAR model needs at least one coefficient matrix");
  const auto r = coeffs_.front().rows();
  if (r < 1) throw ValidationError("VAR model dimension must be >= 1");
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const auto& a = coeffs_[k];
    if (a.rows() != r || a.cols() != r) {
      throw ValidationError("coefficient matrix A" + std::to_string(k + 1) + " must be " +
                            std::to_string(r) + "x" + std::to_string(r));
    }
    if (!a.allFinite()) {
      throw ValidationError("coefficient matrix A" + std::to_string(k + 1) + " is not finite");
    }
  }
  noise_.validate();
  if (noise_.dim() != static_cast<std::size_t>(r)) {
    throw ValidationError("noise dimension " + std::to_string(noise_.dim()) +
                          " does not match model dimension " + std::to_string(r));
  }
}

Eigen::MatrixXd companion_matrix(std::span<const Eigen::MatrixXd> coeffs) {
  if (coeffs.empty()) throw ValidationError("companion matrix needs at least one coefficient");
  const Eigen::Index r = coeffs.front().rows();
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(p * r, p * r);
  for (Eigen::Index k = 0; k < p; ++k) c.block(0, k * r, r, r) = coeffs[static_cast<std::size_t>(k)];
  if (p > 1) c.block(r, 0, (p - 1) * r, (p - 1) * r).setIdentity();
  return c;
}

CausalityReport is_causal(std::span<const Eigen::MatrixXd> coeffs, double margin) {
  const Eigen::MatrixXd c = companion_matrix(coeffs);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation failed for the companion matrix");
  }
  const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
  CausalityReport report;
  report.spectral_radius = radius;
  report.causal = radius < 1.0 - margin;
  report.near_unit_root = radius >= 1.0 - margin && radius <= 1.0;
  return report;
}

CausalityReport is_causal(const VarModel& model, double margin) {
  return is_causal(std::span<const Eigen::MatrixXd>(model.coeffs()), margin);
}

namespace {

void require_causal(const VarModel& model, const char* what) {
  const auto report = is_causal(model);
  if (!report.causal) {
    throw ValidationError(std::string(what) + ": model is not causal (companion spectral radius " +
                          std::to_string(report.spectral_radius) + ")");
  }
}

}  // namespace

std::vector<Eigen::MatrixXd> psi_matrices(const VarModel& model, std::size_t count) {
  require_causal(model, "psi_matrices");
  const auto r = static_cast<Eigen::Index>(model.dim());
  std::vector<Eigen::MatrixXd> psi;
  psi.reserve(count + 1);
  psi.push_back(Eigen::MatrixXd::Identity(r, r));
  for (std::size_t j = 1; j <= count; ++j) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t k = 1; k <= std::min(j, model.order()); ++k) {
      next.noalias() += model.coeff(k - 1) * psi[j - k];
    }
    psi.push_back(std::move(next));
  }
  return psi;
}

std::size_t psi_truncation(const VarModel& model, double tolerance, std::size_t max_count) {
  require_causal(model, "psi_truncation");
  const auto r = static_cast<Eigen::Index>(model.dim());
  const std::size_t p = model.order();
  // Rolling window of the last p matrices.
  std::vector<Eigen::MatrixXd> window{Eigen::MatrixXd::Identity(r, r)};
  std::size_t below = 0;
  for (std::size_t j = 1; j <= max_count; ++j) {
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(r, r);
    for (std::size_t k = 1; k <= std::min(j, p); ++k) {
      next.noalias() += model.coeff(k - 1) * window[window.size() - k];
    }
    // Require p consecutive small matrices so a transient zero (e.g. a
    // nilpotent lag pattern) does not end the search early.
    below = next.cwiseAbs().maxCoeff() < tolerance ? below + 1 : 0;
    if (below >= p) return j;
    window.push_back(std::move(next));
    if (window.size() > p) window.erase(window.begin());
  }
  return max_count;
}

SeriesMatrix simulate(const VarModel& model, std::size_t n, std::size_t burn_in,
                      std::uint64_t seed) {
  if (n == 0) throw ValidationError("simulate needs n >= 1");
  require_causal(model, "simulate");
  const SeriesMatrix noise = sample_noise_matrix(model.noise(), burn_in + n, seed);
  const auto total = static_cast<Eigen::Index>(burn_in + n);
  const auto p = static_cast<Eigen::Index>(model.order());

  // Row-major work buffer: one observation per column for cache-friendly
  // matrix-vector updates.
  Eigen::MatrixXd x = noise.values().transpose();
  for (Eigen::Index t = 0; t < total; ++t) {
    for (Eigen::Index k = 1; k <= std::min(t, p); ++k) {
      x.col(t).noalias() += model.coeff(static_cast<std::size_t>(k - 1)) * x.col(t - k);
    }
  }
  return SeriesMatrix(x.rightCols(static_cast<Eigen::Index>(n)).transpose());
}

SeriesMatrix mean_correct(const SeriesMatrix& series, Eigen::VectorXd* means) {
  if (series.length() < 2) throw ValidationError("mean correction needs at least 2 observations");
  const Eigen::VectorXd mu = series.values().colwise().mean().transpose();
  if (means != nullptr) *means = mu;
  return SeriesMatrix(series.values().rowwise() - mu.transpose());
}

}  // namespace flocvar
