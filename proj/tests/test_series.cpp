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
#include <limits>
#include <sstream>

#include "flocvar/error.hpp"
#include "flocvar/series.hpp"

using namespace flocvar;

TEST_CASE("series construction") {
  Eigen::MatrixXd v(3, 2);
  v << 1, 2, 3, 4, 5, 6;
  const SeriesMatrix s(v);
  CHECK(s.length() == 3);
  CHECK(s.dim() == 2);
  CHECK(s(2, 1) == 6.0);
  CHECK(s.column(1)[1] == 4.0);
  CHECK(s.rows(1, 2)(0, 0) == 3.0);
  CHECK(SeriesMatrix::zeros(4, 3).values().isZero());
  v(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(SeriesMatrix{v}, ValidationError);
}

TEST_CASE("CSV round trip keeps every bit") {
  Eigen::MatrixXd v(3, 2);
  v << 0.1, -1e-300, 1.0 / 3.0, 12345.678, -0.0, 2.5e17;
  const SeriesMatrix s(v);
  std::stringstream buf;
  write_series_csv(s, buf);
  CHECK(buf.str().rfind("t,x1,x2\n1,0.10000000000000001,", 0) == 0);
  CHECK(read_series_csv(buf) == s);
}

TEST_CASE("CSV reader variants and errors") {
  std::istringstream plain("a,b\n1,2\n3,4\n");
  const auto p = read_series_csv(plain);
  CHECK(p.dim() == 2);
  CHECK(p(1, 0) == 3.0);
  std::istringstream dated("date,ibm,sp\n2001-01,0.5,0.25\n2001-02,-0.5,1\n");
  const auto d = read_series_csv(dated);
  CHECK(d.dim() == 2);
  CHECK(d(0, 1) == 0.25);
  std::istringstream ragged("x,y\n1,2\n3\n");
  CHECK_THROWS_AS(read_series_csv(ragged), ValidationError);
  std::istringstream text("x\nabc\n");
  CHECK_THROWS_AS(read_series_csv(text), ValidationError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_series_csv(empty), ValidationError);
}
