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

#include "flocvar/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "flocvar/error.hpp"

namespace flocvar {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

StableParams StableParams::symmetric(double alpha, double sigma) {
  StableParams p{alpha, 0.0, sigma, 0.0};
  p.validate();
  return p;
}

void StableParams::validate() const {
  if (!std::isfinite(alpha) || !(alpha > 0.0 && alpha <= 2.0)) {
    throw ValidationError("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
  }
  if (!std::isfinite(beta) || beta < -1.0 || beta > 1.0) {
    throw ValidationError("stable beta must lie in [-1, 1], got " + std::to_string(beta));
  }
  if (!std::isfinite(sigma) || !(sigma > 0.0)) {
    throw ValidationError("stable sigma must be positive, got " + std::to_string(sigma));
  }
  if (!std::isfinite(delta)) throw ValidationError("stable delta must be finite");
}

SymmetricStableNoiseSpec SymmetricStableNoiseSpec::iid(std::size_t dim, double alpha,
                                                       double sigma) {
  SymmetricStableNoiseSpec spec{std::vector<StableParams>(dim, StableParams::symmetric(alpha, sigma))};
  spec.validate();
  return spec;
}

void SymmetricStableNoiseSpec::validate() const {
  if (components.empty()) throw ValidationError("noise spec needs at least one component");
  for (const auto& c : components) {
    c.validate();
    if (!c.is_symmetric()) {
      throw ValidationError("noise components must be symmetric (beta = 0, delta = 0)");
    }
  }
}

double draw_stable(const StableParams& params, Rng& rng) {
  const double alpha = params.alpha;
  const double beta = params.beta;
  const double v = kPi * (rng.uniform_open() - 0.5);  // uniform on (-pi/2, pi/2)
  const double w = rng.exponential();

  if (alpha == 2.0) {
    // Box-Muller in angle/exponential form: 2 sin(V) sqrt(W) ~ N(0, 2).
    return params.delta + params.sigma * 2.0 * std::sin(v) * std::sqrt(w);
  }

  if (alpha == 1.0) {
    const double half_pi = kPi / 2.0;
    const double a = half_pi + beta * v;
    const double x =
        (2.0 / kPi) * (a * std::tan(v) - beta * std::log(half_pi * w * std::cos(v) / a));
    return params.sigma * x + (2.0 / kPi) * beta * params.sigma * std::log(params.sigma) +
           params.delta;
  }

  double x;
  if (beta == 0.0) {
    x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
        std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  } else {
    const double tan_term = beta * std::tan(kPi * alpha / 2.0);
    const double shift = std::atan(tan_term) / alpha;
    const double scale = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
    x = scale * std::sin(alpha * (v + shift)) / std::pow(std::cos(v), 1.0 / alpha) *
        std::pow(std::cos(v - alpha * (v + shift)) / w, (1.0 - alpha) / alpha);
  }
  return params.sigma * x + params.delta;
}

std::vector<double> sample_stable(const StableParams& params, std::size_t count,
                                  std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::vector<double> out(count);
  for (auto& x : out) x = draw_stable(params, rng);
  return out;
}

std::vector<double> sample_sas(const StableParams& params, std::size_t count,
                               std::uint64_t seed) {
  params.validate();
  if (!params.is_symmetric()) {
    throw ValidationError("sample_sas requires beta = 0 and delta = 0");
  }
  return sample_stable(params, count, seed);
}

double char_fn_sas(const StableParams& params, double t) {
  params.validate();
  if (!params.is_symmetric()) {
    throw ValidationError("char_fn_sas requires beta = 0 and delta = 0");
  }
  return std::exp(-std::pow(params.sigma * std::abs(t), params.alpha));
}

std::complex<double> char_fn(const StableParams& params, double t) {
  params.validate();
  if (t == 0.0) return {1.0, 0.0};
  const double abs_t = std::abs(t);
  const double sign_t = t > 0.0 ? 1.0 : -1.0;
  double real_part;
  double imag_part;
  if (params.alpha == 1.0) {
    real_part = -params.sigma * abs_t;
    imag_part = -params.sigma * abs_t * params.beta * (2.0 / kPi) * sign_t * std::log(abs_t);
  } else {
    const double mag = std::pow(params.sigma * abs_t, params.alpha);
    real_part = -mag;
    imag_part = mag * params.beta * sign_t * std::tan(kPi * params.alpha / 2.0);
  }
  imag_part += params.delta * t;
  return std::exp(std::complex<double>(real_part, imag_part));
}

SeriesMatrix sample_noise_matrix(const SymmetricStableNoiseSpec& spec, std::size_t n,
                                 std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw ValidationError("noise matrix needs n >= 1");
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(spec.dim()));
  for (std::size_t j = 0; j < spec.dim(); ++j) {
    Rng rng(seed, j);
    const auto& law = spec.components[j];
    for (std::size_t t = 0; t < n; ++t) {
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = draw_stable(law, rng);
    }
  }
  return SeriesMatrix(std::move(values));
}

}  // namespace flocvar
