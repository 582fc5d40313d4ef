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

#ifndef FLOCVAR_SERIES_HPP_
#define FLOCVAR_SERIES_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flocvar {

// An n x r multivariate sample path: row t is the observation X_t, column j
// is component j. Storage is column-major so each component is contiguous.
class SeriesMatrix {
 public:
  SeriesMatrix() = default;
  // Throws ValidationError on non-finite entries.
  explicit SeriesMatrix(Eigen::MatrixXd values);

  static SeriesMatrix zeros(std::size_t n, std::size_t dim);

  std::size_t length() const { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
  bool empty() const { return values_.size() == 0; }

  const Eigen::MatrixXd& values() const { return values_; }
  double operator()(std::size_t t, std::size_t j) const {
    return values_(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j));
  }

  std::span<const double> column(std::size_t j) const {
    return {values_.col(static_cast<Eigen::Index>(j)).data(), length()};
  }

  // Rows [first, first + count).
  SeriesMatrix rows(std::size_t first, std::size_t count) const;

  friend bool operator==(const SeriesMatrix& a, const SeriesMatrix& b) {
    return a.values_.rows() == b.values_.rows() && a.values_.cols() == b.values_.cols() &&
           a.values_ == b.values_;
  }

 private:
  Eigen::MatrixXd values_;
};

// CSV layout: header `t,x1,...,xr`, one row per time index (t from 1), values
// printed with 17 significant digits so a write/read cycle is lossless.
void write_series_csv(const SeriesMatrix& series, std::ostream& out);
void write_series_csv(const SeriesMatrix& series, const std::filesystem::path& path);

// Reads a header line plus numeric rows. A leading column named `t` (or
// `time`, `date`, `index`) is treated as a row label and dropped; every other
// column must parse as a finite number.
SeriesMatrix read_series_csv(std::istream& in);
SeriesMatrix read_series_csv(const std::filesystem::path& path);

// `%.17g` formatting: enough digits to round-trip any double.
std::string format_double(double value);

// Splits one CSV line on commas, trimming surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

// Parses a finite double or throws ValidationError naming `what`.
double parse_double(const std::string& text, const std::string& what);

}  // namespace flocvar

#endif  // FLOCVAR_SERIES_HPP_
