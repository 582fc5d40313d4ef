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

#include "flocvar/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <ostream>
#include <sstream>
#include <string>

#include "flocvar/error.hpp"
#include "flocvar/var.hpp"

namespace flocvar {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::Floc: return "FLOC";
    case Method::LeastSquares: return "LS";
    case Method::YuleWalker: return "YW";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  std::string upper(name);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (upper == "FLOC") return Method::Floc;
  if (upper == "LS") return Method::LeastSquares;
  if (upper == "YW" || upper == "Y-W") return Method::YuleWalker;
  throw ValidationError("unknown method '" + std::string(name) + "' (expected FLOC, LS or YW)");
}

Eigen::MatrixXd assemble_block_matrix(const LagMatrixSet& lags, std::size_t order) {
  const auto r = static_cast<Eigen::Index>(lags.dim());
  const auto p = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd block(p * r, p * r);
  for (Eigen::Index k = 0; k < p; ++k)
    for (Eigen::Index l = 0; l < p; ++l) block.block(k * r, l * r, r, r) = lags.at(static_cast<long>(l - k));
  return block;
}

std::vector<Eigen::MatrixXd> solve_block_system(const LagMatrixSet& lags, std::size_t order,
                                                double* condition) {
  const auto r = static_cast<Eigen::Index>(lags.dim());
  const auto p = static_cast<Eigen::Index>(order);
  const Eigen::MatrixXd block = assemble_block_matrix(lags, order);
  Eigen::MatrixXd rhs(r, p * r);
  for (Eigen::Index l = 0; l < p; ++l) rhs.block(0, l * r, r, r) = lags.at(static_cast<long>(l + 1));

  // [A_1 ... A_p] Block = rhs  <=>  Block^T [A]^T = rhs^T.
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(block.transpose());
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (condition != nullptr) *condition = cond;
  if (!(cond <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "lag moment block matrix [[G0 .. G" << (order - 1) << "]; ...; [G" << (1 - static_cast<long>(order))
        << " .. G0]] (" << p * r << "x" << p * r << ") is singular or ill-conditioned (condition "
        << cond << " > " << kMaxCondition << ")";
    throw SingularSystemError(msg.str(), cond);
  }
  const Eigen::MatrixXd solution = lu.solve(rhs.transpose()).transpose();
  std::vector<Eigen::MatrixXd> coeffs;
  coeffs.reserve(order);
  for (Eigen::Index k = 0; k < p; ++k) coeffs.push_back(solution.block(0, k * r, r, r));
  return coeffs;
}

namespace {

void require_order(std::size_t order) {
  if (order == 0) throw ValidationError("order must be >= 1");
}

void require_nonconstant(const SeriesMatrix& centered) {
  for (std::size_t j = 0; j < centered.dim(); ++j) {
    const auto col = centered.column(j);
    if (std::all_of(col.begin(), col.end(), [](double v) { return v == 0.0; })) {
      throw DegenerateInputError("column " + std::to_string(j + 1) +
                                 " is constant; the lag-0 moment matrix is singular");
    }
  }
}

EstimationReport moment_estimate(Method method, const SeriesMatrix& series, std::size_t order,
                                 const FlocConfig& cfg, Normalizer normalizer) {
  require_order(order);
  cfg.validate();
  const std::size_t min_len = 2 * order * series.dim();
  if (series.length() <= min_len) {
    throw ValidationError("series length " + std::to_string(series.length()) +
                          " too short: need more than 2 p r = " + std::to_string(min_len));
  }
  EstimationReport report;
  report.method = method;
  report.normalizer = normalizer;
  if (method == Method::Floc) report.cfg = cfg;
  const SeriesMatrix centered = mean_correct(series, &report.means);
  require_nonconstant(centered);
  const LagMatrixSet lags = lag_matrix_set(centered, order, cfg, normalizer);
  report.coeffs = solve_block_system(lags, order, &report.condition);
  report.residuals = residuals(centered, report.coeffs);
  return report;
}

}  // namespace

EstimationReport estimate_floc(const SeriesMatrix& series, std::size_t order,
                               const FlocConfig& cfg, Normalizer normalizer) {
  return moment_estimate(Method::Floc, series, order, cfg, normalizer);
}

EstimationReport estimate_yw(const SeriesMatrix& series, std::size_t order,
                             Normalizer normalizer) {
  return moment_estimate(Method::YuleWalker, series, order, FlocConfig{1.0, 1.0, std::nullopt},
                         normalizer);
}

EstimationReport estimate_ls(const SeriesMatrix& series, std::size_t order) {
  require_order(order);
  const std::size_t r = series.dim();
  if (series.length() <= order * r + order) {
    throw ValidationError("series length " + std::to_string(series.length()) +
                          " too short for least squares: need more than p r + p = " +
                          std::to_string(order * r + order));
  }
  EstimationReport report;
  report.method = Method::LeastSquares;
  report.normalizer = Normalizer::Full;
  const SeriesMatrix centered = mean_correct(series, &report.means);
  require_nonconstant(centered);

  const auto n = static_cast<Eigen::Index>(series.length());
  const auto p = static_cast<Eigen::Index>(order);
  const auto ri = static_cast<Eigen::Index>(r);
  const Eigen::Index rows = n - p;
  Eigen::MatrixXd design(rows, p * ri);
  for (Eigen::Index k = 0; k < p; ++k) {
    design.block(0, k * ri, rows, ri) = centered.values().middleRows(p - 1 - k, rows);
  }
  const Eigen::MatrixXd target = centered.values().bottomRows(rows);

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(design);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  report.condition = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  if (qr.rank() < design.cols() || !(report.condition <= kMaxCondition)) {
    std::ostringstream msg;
    msg << "least-squares regressor matrix (" << rows << "x" << design.cols()
        << ") is rank-deficient (condition " << report.condition << ")";
    throw SingularSystemError(msg.str(), report.condition);
  }
  // design * B = target, B is (p r) x r with block k = A_{k+1}^T.
  const Eigen::MatrixXd b = qr.solve(target);
  for (Eigen::Index k = 0; k < p; ++k) report.coeffs.push_back(b.block(k * ri, 0, ri, ri).transpose());
  report.residuals = residuals(centered, report.coeffs);
  return report;
}

EstimationReport estimate(Method method, const SeriesMatrix& series, std::size_t order,
                          const FlocConfig& cfg) {
  switch (method) {
    case Method::Floc: return estimate_floc(series, order, cfg);
    case Method::LeastSquares: return estimate_ls(series, order);
    case Method::YuleWalker: return estimate_yw(series, order);
  }
  throw ValidationError("unknown method");
}

SeriesMatrix residuals(const SeriesMatrix& series, std::span<const Eigen::MatrixXd> coeffs) {
  if (coeffs.empty()) throw ValidationError("residuals need at least one coefficient matrix");
  const auto r = static_cast<Eigen::Index>(series.dim());
  for (const auto& a : coeffs) {
    if (a.rows() != r || a.cols() != r) {
      throw ValidationError("coefficient matrix shape does not match series dimension");
    }
  }
  const auto p = static_cast<Eigen::Index>(coeffs.size());
  const auto n = static_cast<Eigen::Index>(series.length());
  if (n <= p) throw ValidationError("residuals need a series longer than the model order");
  const Eigen::MatrixXd& x = series.values();
  Eigen::MatrixXd z = x.bottomRows(n - p);
  for (Eigen::Index k = 1; k <= p; ++k) {
    z.noalias() -= x.middleRows(p - k, n - p) * coeffs[static_cast<std::size_t>(k - 1)].transpose();
  }
  return SeriesMatrix(std::move(z));
}

double default_b_exponent(double alpha) { return std::max(0.0, alpha - 1.05); }

void write_report_csv(const EstimationReport& report, std::ostream& out) {
  out << "method,k,i,j,value\n";
  const auto name = method_name(report.method);
  for (std::size_t k = 0; k < report.coeffs.size(); ++k) {
    const auto& a = report.coeffs[k];
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out << name << ',' << (k + 1) << ',' << (i + 1) << ',' << (j + 1) << ','
            << format_double(a(i, j)) << '\n';
  }
}

ReportCoefficients read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty report CSV");
  const auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"method", "k", "i", "j", "value"}) {
    throw ValidationError("report CSV header must be method,k,i,j,value");
  }
  std::map<std::tuple<long, long, long>, double> entries;
  std::optional<Method> method;
  long max_k = 0;
  long max_ij = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    const std::string where = "report CSV line " + std::to_string(line_no);
    if (f.size() != 5) throw ValidationError(where + ": expected 5 fields");
    const Method m = parse_method(f[0]);
    if (method && *method != m) throw ValidationError(where + ": mixed methods");
    method = m;
    const auto as_index = [&](const std::string& s) {
      const double v = parse_double(s, where);
      if (v < 1.0 || v != std::floor(v)) throw ValidationError(where + ": bad index " + s);
      return static_cast<long>(v);
    };
    const long k = as_index(f[1]);
    const long i = as_index(f[2]);
    const long j = as_index(f[3]);
    if (!entries.emplace(std::tuple{k, i, j}, parse_double(f[4], where)).second) {
      throw ValidationError(where + ": duplicate entry");
    }
    max_k = std::max(max_k, k);
    max_ij = std::max({max_ij, i, j});
  }
  if (!method) throw ValidationError("report CSV has no coefficients");
  if (entries.size() != static_cast<std::size_t>(max_k * max_ij * max_ij)) {
    throw ValidationError("report CSV does not contain complete coefficient matrices");
  }
  ReportCoefficients out;
  out.method = *method;
  for (long k = 1; k <= max_k; ++k) {
    Eigen::MatrixXd a(max_ij, max_ij);
    for (long i = 1; i <= max_ij; ++i)
      for (long j = 1; j <= max_ij; ++j) a(i - 1, j - 1) = entries.at({k, i, j});
    out.coeffs.push_back(std::move(a));
  }
  return out;
}

std::string report_summary(const EstimationReport& report) {
  std::ostringstream out;
  out << "method: " << method_name(report.method) << '\n';
  out << "order: " << report.order() << '\n';
  out << "dim: " << report.dim() << '\n';
  if (report.cfg) {
    out << "floc_a: " << format_double(report.cfg->exp_a) << '\n';
    out << "floc_b: " << format_double(report.cfg->exp_b) << '\n';
  }
  out << "normalizer: " << (report.normalizer == Normalizer::Window ? "window" : "full") << '\n';
  out << "condition: " << format_double(report.condition) << '\n';
  out << "means:";
  for (Eigen::Index j = 0; j < report.means.size(); ++j) out << ' ' << format_double(report.means(j));
  out << '\n';
  out << "residual_rows: " << report.residuals.length() << '\n';
  const Eigen::IOFormat fmt(6, 0, ", ", "\n", "  [", "]");
  for (std::size_t k = 0; k < report.coeffs.size(); ++k) {
    out << "A" << (k + 1) << ":\n" << report.coeffs[k].format(fmt) << '\n';
  }
  return out.str();
}

}  // namespace flocvar
