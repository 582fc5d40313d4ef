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

#include "flocvar/series.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "flocvar/error.hpp"

namespace flocvar {

SeriesMatrix::SeriesMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) {
    throw ValidationError("series contains non-finite values");
  }
}

SeriesMatrix SeriesMatrix::zeros(std::size_t n, std::size_t dim) {
  return SeriesMatrix(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(dim)));
}

SeriesMatrix SeriesMatrix::rows(std::size_t first, std::size_t count) const {
  if (first + count > length()) {
    throw ValidationError("row range exceeds series length");
  }
  return SeriesMatrix(values_.middleRows(static_cast<Eigen::Index>(first),
                                         static_cast<Eigen::Index>(count)));
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  auto flush = [&] {
    auto first = field.find_first_not_of(" \t\r");
    auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? std::string{}
                                                : field.substr(first, last - first + 1));
    field.clear();
  };
  for (char c : line) {
    if (c == ',') {
      flush();
    } else {
      field.push_back(c);
    }
  }
  flush();
  return fields;
}

double parse_double(const std::string& text, const std::string& what) {
  // strtod rather than from_chars: accepts a leading '+' and "1e-3" alike.
  const char* begin = text.c_str();
  char* end = nullptr;
  double value = std::strtod(begin, &end);
  if (text.empty() || end != begin + text.size() || !std::isfinite(value)) {
    throw ValidationError("cannot parse '" + text + "' as a number (" + what + ")");
  }
  return value;
}

void write_series_csv(const SeriesMatrix& series, std::ostream& out) {
  out << 't';
  for (std::size_t j = 0; j < series.dim(); ++j) out << ",x" << (j + 1);
  out << '\n';
  for (std::size_t t = 0; t < series.length(); ++t) {
    out << (t + 1);
    for (std::size_t j = 0; j < series.dim(); ++j) out << ',' << format_double(series(t, j));
    out << '\n';
  }
}

void write_series_csv(const SeriesMatrix& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  write_series_csv(series, out);
  if (!out) throw Error("write failed: " + path.string());
}

namespace {

bool is_label_column(std::string name) {
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name == "t" || name == "time" || name == "date" || name == "index";
}

}  // namespace

SeriesMatrix read_series_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty CSV input");
  const auto header = split_csv_line(line);
  const bool skip_first = !header.empty() && is_label_column(header.front());
  const std::size_t dim = header.size() - (skip_first ? 1 : 0);
  if (dim == 0) throw ValidationError("CSV header has no data columns");

  std::vector<double> flat;
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ValidationError("CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    }
    for (std::size_t f = skip_first ? 1 : 0; f < fields.size(); ++f) {
      flat.push_back(parse_double(fields[f], "CSV line " + std::to_string(line_no)));
    }
    ++rows;
  }
  if (rows == 0) throw ValidationError("CSV has no data rows");

  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  for (std::size_t t = 0; t < rows; ++t)
    for (std::size_t j = 0; j < dim; ++j)
      values(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(j)) = flat[t * dim + j];
  return SeriesMatrix(std::move(values));
}

SeriesMatrix read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  return read_series_csv(in);
}

}  // namespace flocvar
