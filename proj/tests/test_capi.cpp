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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "flocvar/flocvar.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "flocvar_capi_test";
  fs::create_directories(dir);
  return dir / name;
}

flv_model* sweep_model() {
  const double coeffs[] = {0.1, 0.3, 0.2, 0.1, 0.2, 0.2, 0.05, 0.1};
  const double alphas[] = {1.6, 1.6};
  const double sigmas[] = {1.0, 1.0};
  flv_model* model = nullptr;
  REQUIRE(flv_model_create(2, 2, coeffs, alphas, sigmas, &model) == FLV_OK);
  return model;
}

}  // namespace

TEST_CASE("series handles") {
  const double values[] = {1, 4, 3, 8};
  flv_series* s = nullptr;
  REQUIRE(flv_series_create(2, 2, values, &s) == FLV_OK);
  CHECK(flv_series_length(s) == 2);
  CHECK(flv_series_dim(s) == 2);
  double out[4];
  CHECK(flv_series_copy(s, out, 4) == FLV_OK);
  CHECK(out[1] == 4.0);
  CHECK(flv_series_copy(s, out, 3) == FLV_ERR_VALIDATION);
  CHECK(std::string(flv_last_error()).find("too small") != std::string::npos);
  flv_series_destroy(s);

  const double bad[] = {1, NAN};
  flv_series* b = nullptr;
  CHECK(flv_series_create(1, 2, bad, &b) == FLV_ERR_VALIDATION);
  CHECK(b == nullptr);
  CHECK(flv_series_read_csv("/nonexistent/flocvar.csv", &b) == FLV_ERR_IO);
  flv_series_destroy(nullptr);
}

TEST_CASE("simulate, estimate and round-trip through files") {
  flv_model* model = sweep_model();
  int causal = 0;
  double radius = 0.0;
  CHECK(flv_model_is_causal(model, 1e-8, &causal, &radius) == FLV_OK);
  CHECK(causal == 1);
  CHECK(radius < 1.0);

  flv_series* x = nullptr;
  REQUIRE(flv_simulate(model, 700, 500, 42, &x) == FLV_OK);
  const auto csv = scratch("series.csv").string();
  REQUIRE(flv_series_write_csv(x, csv.c_str()) == FLV_OK);
  flv_series* y = nullptr;
  REQUIRE(flv_series_read_csv(csv.c_str(), &y) == FLV_OK);

  flv_estimate_options opts;
  flv_estimate_options_default(&opts);
  opts.b_exp = 0.55;
  flv_report* rx = nullptr;
  flv_report* ry = nullptr;
  REQUIRE(flv_estimate(x, &opts, &rx) == FLV_OK);
  REQUIRE(flv_estimate(y, &opts, &ry) == FLV_OK);
  double cx[8], cy[8];
  REQUIRE(flv_report_coeffs(rx, cx, 8) == FLV_OK);
  REQUIRE(flv_report_coeffs(ry, cy, 8) == FLV_OK);
  for (int k = 0; k < 8; ++k) CHECK(cx[k] == cy[k]);
  CHECK(flv_report_method(rx) == FLV_METHOD_FLOC);
  CHECK(flv_report_b_exp(rx) == 0.55);
  CHECK(flv_report_condition(rx) > 1.0);

  const auto rep_csv = scratch("report.csv").string();
  REQUIRE(flv_report_write_csv(rx, rep_csv.c_str()) == FLV_OK);
  REQUIRE(flv_report_write_summary(rx, scratch("report.txt").string().c_str()) == FLV_OK);
  flv_report* loaded = nullptr;
  REQUIRE(flv_report_load_csv(rep_csv.c_str(), &loaded) == FLV_OK);
  CHECK(flv_report_order(loaded) == 2);
  CHECK(flv_report_dim(loaded) == 2);
  double cl[8];
  REQUIRE(flv_report_coeffs(loaded, cl, 8) == FLV_OK);
  for (int k = 0; k < 8; ++k) CHECK(cl[k] == cx[k]);
  CHECK(std::isnan(flv_report_condition(loaded)));
  flv_series* res = nullptr;
  CHECK(flv_report_residuals(loaded, &res) == FLV_ERR_VALIDATION);
  REQUIRE(flv_report_residuals(rx, &res) == FLV_OK);
  CHECK(flv_series_length(res) == 698);

  flv_diag_options dopts;
  flv_diag_options_default(&dopts);
  dopts.band_replicates = 20;
  flv_diagnostics* diag = nullptr;
  REQUIRE(flv_diagnose(x, loaded, &dopts, &diag) == FLV_OK);
  CHECK(flv_diagnostics_columns(diag) == 2);
  double stat = 0.0, p = -1.0, params[4];
  REQUIRE(flv_diagnostics_ks(diag, 1, &stat, &p, params) == FLV_OK);
  CHECK(stat > 0.0);
  CHECK(p >= 0.0);
  CHECK(params[0] > 1.0);
  CHECK(flv_diagnostics_ks(diag, 2, &stat, &p, params) == FLV_ERR_VALIDATION);
  REQUIRE(flv_diagnostics_write(diag, scratch("diag").string().c_str()) == FLV_OK);
  CHECK(fs::exists(scratch("diag") / "ks.txt"));

  opts.method = FLV_METHOD_YW;
  flv_report* yw = nullptr;
  REQUIRE(flv_estimate(x, &opts, &yw) == FLV_OK);
  CHECK(std::isnan(flv_report_b_exp(yw)));

  opts.method = FLV_METHOD_FLOC;
  opts.b_exp = NAN;
  flv_report* auto_b = nullptr;
  REQUIRE(flv_estimate(x, &opts, &auto_b) == FLV_OK);
  CHECK(flv_report_b_exp(auto_b) > 0.3);
  CHECK(flv_report_b_exp(auto_b) < 0.9);

  for (auto* r : {rx, ry, loaded, yw, auto_b}) flv_report_destroy(r);
  flv_diagnostics_destroy(diag);
  for (auto* s : {x, y, res}) flv_series_destroy(s);
  flv_model_destroy(model);
  fs::remove_all(scratch("").parent_path());
}

TEST_CASE("status codes") {
  const double explosive[] = {1.5};
  const double alpha[] = {1.5};
  const double sigma[] = {1.0};
  flv_model* m = nullptr;
  REQUIRE(flv_model_create(1, 1, explosive, alpha, sigma, &m) == FLV_OK);
  flv_series* x = nullptr;
  CHECK(flv_simulate(m, 10, 0, 1, &x) == FLV_ERR_VALIDATION);
  flv_model_destroy(m);

  const double bad_alpha[] = {2.5};
  CHECK(flv_model_create(1, 1, explosive, bad_alpha, sigma, &m) == FLV_ERR_VALIDATION);

  // Perfectly collinear columns make the moment block singular.
  std::vector<double> values(200);
  for (std::size_t t = 0; t < 100; ++t) {
    values[2 * t] = std::sin(0.3 * static_cast<double>(t * t));
    values[2 * t + 1] = 2.0 * values[2 * t];
  }
  flv_series* s = nullptr;
  REQUIRE(flv_series_create(100, 2, values.data(), &s) == FLV_OK);
  flv_estimate_options opts;
  flv_estimate_options_default(&opts);
  opts.order = 1;
  opts.b_exp = 1.0;
  flv_report* r = nullptr;
  CHECK(flv_estimate(s, &opts, &r) == FLV_ERR_NUMERICAL);
  CHECK(std::string(flv_last_error()).find("singular") != std::string::npos);
  flv_series_destroy(s);

  CHECK(flv_montecarlo_run("/nonexistent/flocvar.cfg", nullptr, nullptr) == FLV_ERR_VALIDATION);
  flv_mc_report* mc = nullptr;
  CHECK(flv_montecarlo_run("/nonexistent/flocvar.cfg", nullptr, &mc) == FLV_ERR_IO);
}

TEST_CASE("Monte Carlo through the C API") {
  const auto cfg = scratch("mc.cfg");
  {
    std::ofstream out(cfg);
    out << "dim = 2\norder = 2\nA1 = 0.1, 0.3, 0.2, 0.1\nA2 = 0.2, 0.2, 0.05, 0.1\n"
           "alpha = 1.6\nn = 200\nb_values = 0.55\nreplications = 5\nseed = 3\nmethods = FLOC, LS\n";
  }
  flv_mc_overrides ov{};
  ov.has_replications = 1;
  ov.replications = 7;
  flv_mc_report* mc = nullptr;
  REQUIRE(flv_montecarlo_run(cfg.string().c_str(), &ov, &mc) == FLV_OK);
  REQUIRE(flv_mc_report_cell_count(mc) == 16);
  flv_mc_cell cell;
  REQUIRE(flv_mc_report_cell(mc, 1, &cell) == FLV_OK);
  CHECK(cell.method == FLV_METHOD_FLOC);
  CHECK(cell.k == 1);
  CHECK(cell.i == 2);
  CHECK(cell.j == 1);
  CHECK(cell.coefficient == 2);
  CHECK(cell.truth == 0.2);
  CHECK(cell.count == 7);
  REQUIRE(flv_mc_report_cell(mc, 8, &cell) == FLV_OK);
  CHECK(cell.method == FLV_METHOD_LS);
  CHECK(flv_mc_report_cell(mc, 16, &cell) == FLV_ERR_VALIDATION);
  REQUIRE(flv_mc_report_write(mc, scratch("table.csv").string().c_str(), nullptr) == FLV_OK);
  flv_mc_report_destroy(mc);
  fs::remove_all(cfg.parent_path());
}

TEST_CASE("stable helpers") {
  const double gauss[] = {2.0, 0.0, 1.0, 0.0};
  double f = 0.0;
  REQUIRE(flv_stable_cdf(gauss, 0.0, &f) == FLV_OK);
  CHECK(f == doctest::Approx(0.5));
  std::vector<double> draws(5000);
  REQUIRE(flv_stable_sample(gauss, draws.size(), 1, draws.data()) == FLV_OK);
  double fitted[4];
  REQUIRE(flv_stable_fit(draws.data(), draws.size(), fitted) == FLV_OK);
  CHECK(fitted[0] > 1.85);
  CHECK(fitted[2] == doctest::Approx(1.0).epsilon(0.1));
  const double bad[] = {0.0, 0.0, 1.0, 0.0};
  CHECK(flv_stable_cdf(bad, 0.0, &f) == FLV_ERR_VALIDATION);
  CHECK(std::string(flv_version()).size() > 0);
}
