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
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "flocvar/error.hpp"
#include "flocvar/stable.hpp"

namespace flocvar {

namespace {

constexpr double kPi = std::numbers::pi;

// e^{-s^alpha} < 4e-18 beyond this point.
double integration_limit(double alpha) { return std::pow(40.0, 1.0 / alpha); }

// Gil-Pelaez inversion in the scaled frequency s = sigma t:
//   F(z) = 1/2 + (1/pi) int_0^inf e^{-s^alpha} sin(phase(s)) / s ds
//   f(z) = (1/pi) int_0^inf e^{-s^alpha} cos(phase(s)) ds        (dF/dz)
// with z = (x - delta) / sigma and
//   phase(s) = z s - beta tan(pi alpha / 2) s^alpha            alpha != 1
//   phase(s) = (z - (2/pi) beta ln sigma) s + (2/pi) beta s ln s  alpha == 1
struct Phase {
  double alpha;
  double linear;  // coefficient of s
  double skew;    // coefficient of s^alpha, or of s ln s when alpha == 1

  Phase(const StableParams& p, double z) : alpha(p.alpha) {
    if (alpha == 1.0) {
      linear = z - (2.0 / kPi) * p.beta * std::log(p.sigma);
      skew = (2.0 / kPi) * p.beta;
    } else {
      linear = z;
      skew = -p.beta * std::tan(kPi * alpha / 2.0);
    }
  }

  double operator()(double s) const {
    if (alpha == 1.0) return linear * s + (s > 0.0 ? skew * s * std::log(s) : 0.0);
    return linear * s + skew * std::pow(s, alpha);
  }

  // Upper bound on |d phase / ds| away from the origin.
  double max_frequency(double s_max) const {
    double slope;
    if (alpha == 1.0) {
      slope = std::abs(skew) * (std::abs(std::log(s_max)) + 1.0);
    } else {
      slope = std::abs(skew) * alpha * std::max(1.0, std::pow(s_max, alpha - 1.0));
    }
    return std::abs(linear) + slope + 1.0;
  }
};

// The integrands are non-smooth at s = 0 when alpha <= 1 or when the skew
// term s^alpha has a kink there.
bool rough_at_origin(const StableParams& p) {
  return p.alpha <= 1.0 || (p.beta != 0.0 && p.alpha < 2.0);
}

constexpr int kGradedPanels = 40;

// Panel boundaries on [0, s_max]: uniform panels of width `width`, with the
// first panel graded geometrically towards 0 when `graded`.
std::vector<double> panel_edges(double s_max, double width, bool graded) {
  std::vector<double> edges{0.0};
  const double first = std::min(width, s_max);
  if (graded) {
    for (int k = kGradedPanels; k >= 1; --k) edges.push_back(first * std::ldexp(1.0, -k));
  }
  const auto panels = static_cast<std::size_t>(std::ceil(s_max / width));
  for (std::size_t k = 1; k <= panels; ++k) {
    edges.push_back(std::min(s_max, static_cast<double>(k) * width));
  }
  return edges;
}

// Sums the integral over consecutive panels. Only the first full-width panel
// is refined adaptively: it holds the non-smooth point at the origin. The
// graded panels before it carry negligible mass, and every later panel spans
// at most one oscillation period of a smooth integrand, where one Kronrod
// pass is accurate. (The library's stopping rule is relative to each
// panel's integral, which cancels to nearly zero over a full period.)
template <class F>
double integrate_panels(F&& f, const std::vector<double>& edges, bool graded) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  const std::size_t adaptive = graded ? static_cast<std::size_t>(kGradedPanels) : 0;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (edges[k + 1] <= edges[k]) continue;
    total += Rule::integrate(f, edges[k], edges[k + 1], k == adaptive ? 12 : 0, 1e-10);
  }
  return total;
}

// Leading-order tail: P(Z > z) ~ C_alpha (1 + beta) / 2 z^-alpha (standardized),
// C_alpha = 2 Gamma(alpha) sin(pi alpha / 2) / pi (2 / pi at alpha = 1).
double tail_constant(double alpha) {
  if (alpha == 2.0) return 0.0;
  return 2.0 * std::tgamma(alpha) * std::sin(kPi * alpha / 2.0) / kPi;
}

constexpr double kFarTail = 1e3;
constexpr std::size_t kMaxPanels = 200000;

double standardized_cdf(const StableParams& p, double z) {
  if (std::abs(z) > kFarTail && p.alpha != 1.0) {
    const double c = tail_constant(p.alpha) * std::pow(std::abs(z), -p.alpha);
    return z > 0.0 ? 1.0 - c * (1.0 + p.beta) / 2.0 : c * (1.0 - p.beta) / 2.0;
  }
  const Phase phase(p, z);
  const double s_max = integration_limit(p.alpha);
  double width = std::min(0.5, 2.0 * kPi / phase.max_frequency(s_max));
  width = std::max(width, s_max / static_cast<double>(kMaxPanels));
  const auto edges = panel_edges(s_max, width, rough_at_origin(p));

  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(-std::pow(s, p.alpha)) * std::sin(phase(s)) / s;
  };
  const double total = integrate_panels(integrand, edges, rough_at_origin(p));
  return std::clamp(0.5 + total / kPi, 0.0, 1.0);
}

double standardized_pdf(const StableParams& p, double z) {
  if (std::abs(z) > kFarTail && p.alpha != 1.0) {
    const double side = z > 0.0 ? 1.0 + p.beta : 1.0 - p.beta;
    return p.alpha * tail_constant(p.alpha) * side / 2.0 * std::pow(std::abs(z), -p.alpha - 1.0);
  }
  const Phase phase(p, z);
  const double s_max = integration_limit(p.alpha);
  double width = std::min(0.5, 2.0 * kPi / phase.max_frequency(s_max));
  width = std::max(width, s_max / static_cast<double>(kMaxPanels));
  const auto edges = panel_edges(s_max, width, rough_at_origin(p));
  auto integrand = [&](double s) { return std::exp(-std::pow(s, p.alpha)) * std::cos(phase(s)); };
  const double total = integrate_panels(integrand, edges, rough_at_origin(p));
  return std::max(0.0, total / kPi);
}

}  // namespace

double stable_cdf(const StableParams& params, double x) {
  params.validate();
  if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
  return standardized_cdf(params, (x - params.delta) / params.sigma);
}

double stable_pdf(const StableParams& params, double x) {
  params.validate();
  if (std::isinf(x)) return 0.0;
  return standardized_pdf(params, (x - params.delta) / params.sigma) / params.sigma;
}

double stable_quantile(const StableParams& params, double p) {
  params.validate();
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("quantile level must lie in (0, 1)");
  auto f = [&](double z) { return standardized_cdf(params, z) - p; };
  double lo = -1.0;
  double hi = 1.0;
  for (int k = 0; k < 80 && f(lo) > 0.0; ++k) lo *= 2.0;
  for (int k = 0; k < 80 && f(hi) < 0.0; ++k) hi *= 2.0;
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) throw NumericalError("cannot bracket stable quantile");
  if (flo == 0.0) return params.delta + params.sigma * lo;
  if (fhi == 0.0) return params.delta + params.sigma * hi;
  std::uintmax_t max_iter = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(48), max_iter);
  return params.delta + params.sigma * (0.5 * (a + b));
}

namespace {

constexpr double kTableEdge = 50.0;
constexpr std::size_t kTablePoints = 241;

}  // namespace

StableCdfTable::StableCdfTable(const StableParams& params) : params_(params) {
  params_.validate();
  const double alpha = params_.alpha;

  const double u_max = std::asinh(kTableEdge);
  grid_.resize(kTablePoints);
  for (std::size_t k = 0; k < kTablePoints; ++k) {
    const double u = -u_max + 2.0 * u_max * static_cast<double>(k) / (kTablePoints - 1);
    grid_[k] = std::sinh(u);
  }
  grid_.front() = -kTableEdge;
  grid_.back() = kTableEdge;

  // Shared quadrature nodes: 16-point Gauss-Legendre panels spanning at most
  // two periods of the fastest oscillation on the grid.
  const Phase edge_phase(params_, kTableEdge);
  const double s_max = integration_limit(alpha);
  double width = std::min(0.5, 4.0 * kPi / edge_phase.max_frequency(s_max));
  width = std::max(width, s_max / static_cast<double>(kMaxPanels));
  const auto edges = panel_edges(s_max, width, rough_at_origin(params_));

  using Rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = Rule::abscissa();
  const auto& weights = Rule::weights();
  std::vector<double> nodes;
  std::vector<double> node_weights;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k];
    const double b = edges[k + 1];
    if (b <= a) continue;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    // The stored rule holds the non-negative half of a symmetric rule.
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      const double w = weights[i] * half;
      if (abscissa[i] == 0.0) {
        nodes.push_back(mid);
        node_weights.push_back(w);
      } else {
        nodes.push_back(mid - half * abscissa[i]);
        node_weights.push_back(w);
        nodes.push_back(mid + half * abscissa[i]);
        node_weights.push_back(w);
      }
    }
  }

  // phase(s) = linear(z) * s + rest(s); only `linear` depends on z.
  const Phase base(params_, 0.0);
  std::vector<double> damp(nodes.size());
  std::vector<double> rest(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    damp[m] = node_weights[m] * std::exp(-std::pow(nodes[m], alpha));
    rest[m] = base(nodes[m]);
  }

  cdf_.resize(kTablePoints);
  density_.resize(kTablePoints);
  for (std::size_t k = 0; k < kTablePoints; ++k) {
    const double z = grid_[k];
    double sine_sum = 0.0;
    double cosine_sum = 0.0;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
      const double ph = z * nodes[m] + rest[m];
      sine_sum += damp[m] * std::sin(ph) / nodes[m];
      cosine_sum += damp[m] * std::cos(ph);
    }
    cdf_[k] = std::clamp(0.5 + sine_sum / kPi, 0.0, 1.0);
    density_[k] = std::max(0.0, cosine_sum / kPi);
  }
  // Quadrature noise can leave tiny non-monotone wiggles deep in light tails.
  for (std::size_t k = 1; k < kTablePoints; ++k) cdf_[k] = std::max(cdf_[k], cdf_[k - 1]);

  const double lower_slope = density_.front() * kTableEdge / alpha;
  lower_v_ = lower_slope - cdf_.front();
  lower_u_ = 2.0 * cdf_.front() - lower_slope;
  const double upper_slope = density_.back() * kTableEdge / alpha;
  upper_v_ = upper_slope - (1.0 - cdf_.back());
  upper_u_ = 2.0 * (1.0 - cdf_.back()) - upper_slope;
}

double StableCdfTable::operator()(double x) const {
  const double z = (x - params_.delta) / params_.sigma;
  if (std::isnan(z)) return z;
  if (std::abs(z) >= kTableEdge) {
    const double r = std::pow(kTableEdge / std::abs(z), params_.alpha);
    if (z < 0.0) return std::clamp(r * (lower_u_ + r * lower_v_), 0.0, 1.0);
    return std::clamp(1.0 - r * (upper_u_ + r * upper_v_), 0.0, 1.0);
  }

  const double u_max = std::asinh(kTableEdge);
  const double pos = (std::asinh(z) + u_max) / (2.0 * u_max) * (kTablePoints - 1);
  auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(kTablePoints - 2)));
  // sinh spacing can put z a hair outside [grid_k, grid_k+1] after rounding.
  while (k > 0 && z < grid_[k]) --k;
  while (k + 2 < kTablePoints && z > grid_[k + 1]) ++k;

  const double z0 = grid_[k];
  const double z1 = grid_[k + 1];
  const double h = z1 - z0;
  const double s = (z - z0) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  const double value =
      h00 * cdf_[k] + h10 * h * density_[k] + h01 * cdf_[k + 1] + h11 * h * density_[k + 1];
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace flocvar
