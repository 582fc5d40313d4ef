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

#ifndef FLOCVAR_VAR_HPP_
#define FLOCVAR_VAR_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flocvar/series.hpp"
#include "flocvar/stable.hpp"

namespace flocvar {

inline constexpr double kDefaultCausalMargin = 1e-8;
inline constexpr std::size_t kDefaultBurnIn = 500;

// X_t = A_1 X_{t-1} + ... + A_p X_{t-p} + Z_t with independent symmetric
// stable noise components.
class VarModel {
 public:
  // Throws ValidationError on empty coefficient lists, non-square or
  // mismatched matrices, or a noise spec of the wrong dimension.
  VarModel(std::vector<Eigen::MatrixXd> coeffs, SymmetricStableNoiseSpec noise);

  std::size_t dim() const { return static_cast<std::size_t>(coeffs_.front().rows()); }
  std::size_t order() const { return coeffs_.size(); }
  const std::vector<Eigen::MatrixXd>& coeffs() const { return coeffs_; }
  const Eigen::MatrixXd& coeff(std::size_t k) const { return coeffs_.at(k); }
  const SymmetricStableNoiseSpec& noise() const { return noise_; }

 private:
  std::vector<Eigen::MatrixXd> coeffs_;
  SymmetricStableNoiseSpec noise_;
};

// pr x pr companion matrix: first block row [A_1 ... A_p], identity blocks on
// the sub-diagonal.
Eigen::MatrixXd companion_matrix(std::span<const Eigen::MatrixXd> coeffs);

struct CausalityReport {
  bool causal = false;
  double spectral_radius = 0.0;
  // True when the radius lies in [1 - margin, 1]: numerically on the unit
  // circle, reported as non-causal.
  bool near_unit_root = false;
};

// det(I - A_1 z - ... - A_p z^p) != 0 on the closed unit disc, checked as
// spectral radius of the companion matrix < 1 - margin.
CausalityReport is_causal(std::span<const Eigen::MatrixXd> coeffs,
                          double margin = kDefaultCausalMargin);
CausalityReport is_causal(const VarModel& model, double margin = kDefaultCausalMargin);

// Psi_0 ... Psi_count of the causal moving-average representation,
// Psi_j = sum_{k=1}^{min(j,p)} A_k Psi_{j-k}, Psi_0 = I. Throws
// ValidationError for a non-causal model.
std::vector<Eigen::MatrixXd> psi_matrices(const VarModel& model, std::size_t count);

// Smallest J such that every entry of Psi_J is below `tolerance` in
// magnitude (and the decay has set in), capped at `max_count`.
std::size_t psi_truncation(const VarModel& model, double tolerance = 1e-12,
                           std::size_t max_count = 100000);

// n rows of the recursion started from zero states, after discarding
// `burn_in` rows. Noise is sample_noise_matrix(noise, burn_in + n, seed), so
// with all-zero coefficients the output is that matrix's last n rows.
SeriesMatrix simulate(const VarModel& model, std::size_t n, std::size_t burn_in,
                      std::uint64_t seed);

// Subtracts per-column sample means; `means` (optional) receives them.
SeriesMatrix mean_correct(const SeriesMatrix& series, Eigen::VectorXd* means = nullptr);

}  // namespace flocvar

#endif  // FLOCVAR_VAR_HPP_
