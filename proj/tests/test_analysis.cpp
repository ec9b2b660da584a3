// Copyright 2026 The photonfuse authors
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

#include "doctest.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "photonfuse/analysis.hpp"

using namespace photonfuse;

TEST_CASE("threshold oracle values") {
  CHECK(*threshold_eta_d_min(0.0) == 0.5);
  CHECK(*threshold_eta_d_min(0.25) == 2.0 / 3.0);
  CHECK_FALSE(threshold_eta_d_min(0.5).has_value());
  CHECK_FALSE(threshold_eta_d_min(0.6).has_value());
  CHECK_THROWS_AS(threshold_eta_d_min(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(threshold_eta_d_min(1.0), std::invalid_argument);

  CHECK(*threshold_from_kappa(0.0) == 0.5);
  CHECK(*threshold_from_kappa(1.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_FALSE(threshold_from_kappa(1.0).has_value());
  CHECK_THROWS_AS(threshold_from_kappa(-0.2), std::invalid_argument);
}

TEST_CASE("threshold forms agree through the parameter conversion") {
  for (double fa : {0.0, 0.1, 0.2, 0.3, 0.45}) {
    LossParams l{0.15, fa, 0.25};
    EmissionParams e = emission_from_loss(l);
    CHECK(std::abs(*threshold_from_kappa(e.eta_b / e.eta_s) - *threshold_eta_d_min(fa)) < 1e-12);
  }
}

TEST_CASE("threshold grows monotonically and stays near one below one half") {
  double prev = *threshold_eta_d_min(0.0);
  for (double fa = 0.01; fa < 0.5; fa += 0.01) {
    const double cur = *threshold_eta_d_min(fa);
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(*threshold_eta_d_min(0.5 - 1e-6) > 0.99999);
}

TEST_CASE("tolerance report oracle values") {
  ThresholdReport lossless = tolerance_report(EmissionParams{1.0, 0.0, 0.0}, 0.51);
  CHECK(lossless.tolerant);
  CHECK(lossless.margin == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(lossless.epsilon == doctest::Approx(0.0));

  ThresholdReport below = tolerance_report(LossParams{0.0, 0.2, 0.0}, 0.6);
  CHECK_FALSE(below.tolerant);
  CHECK(below.margin == doctest::Approx(-0.02).epsilon(1e-12));

  // any source with f_a < 1/4 clears the prior threshold plus a margin
  for (double fa : {0.0, 0.1, 0.2, 0.24}) {
    ThresholdReport r = tolerance_report(LossParams{0.3, fa, 0.2}, 2.0 / 3.0 + 0.01);
    CHECK(r.tolerant);
    CHECK(*r.eta_d_min < kPriorThreshold);
  }

  CHECK_THROWS_AS(tolerance_report(EmissionParams{0.0, 0.3, 0.3}, 0.9), std::invalid_argument);
}

TEST_CASE("default sweep reproduces the threshold curve") {
  SweepSpec spec;
  std::vector<SweepRow> rows = sweep(spec);
  REQUIRE(rows.size() == 50);
  CHECK(rows.front().f_a == doctest::Approx(0.0));
  CHECK(*rows.front().eta_d_min == 0.5);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(*rows[i].eta_d_min > *rows[i - 1].eta_d_min);
  }
  for (const auto& row : rows) {
    CHECK(row.improved == (row.f_a < 0.25 - 1e-12));
  }
}

TEST_CASE("single-point sweeps match frozen values") {
  SweepSpec spec;
  spec.axes = {{SweepVar::FA, 0.0, 0.0, 1.0}};
  std::vector<SweepRow> rows = sweep(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].p_success == doctest::Approx(0.125).epsilon(1e-12));

  spec.axes = {{SweepVar::FA, 0.25, 0.25, 1.0}};
  rows = sweep(spec);
  CHECK(*rows[0].eta_d_min == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_FALSE(rows[0].improved);

  spec.axes = {{SweepVar::FA, 0.6, 0.6, 1.0}};
  rows = sweep(spec);
  CHECK_FALSE(rows[0].eta_d_min.has_value());
  CHECK(sweep_csv(rows).find("unattainable") != std::string::npos);
}

TEST_CASE("sweep validates its grid") {
  SweepSpec spec;
  spec.axes = {{SweepVar::FA, 0.2, 0.1, 0.05}};
  CHECK_THROWS_AS(sweep(spec), std::invalid_argument);
  spec.axes = {{SweepVar::FA, 0.0, 0.4, 0.0}};
  CHECK_THROWS_AS(sweep(spec), std::invalid_argument);
  spec.axes = {{SweepVar::EtaD, 0.0, 0.0, 0.1}};  // eta_d = 0 is outside the domain
  CHECK_THROWS_AS(sweep(spec), std::invalid_argument);
  CHECK_THROWS_AS(sweep_var_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("slow-path sweep fits the simulated loss rate") {
  SweepSpec spec;
  spec.slow_path = true;
  spec.eta_d = 0.8;
  spec.axes = {{SweepVar::FA, 0.2, 0.2, 1.0}};
  std::vector<SweepRow> rows = sweep(spec);
  REQUIRE(rows.size() == 1);
  REQUIRE(rows[0].sim_epsilon.has_value());
  CHECK(*rows[0].sim_epsilon == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(*rows[0].sim_residual < 1e-9);
}

TEST_CASE("csv and json outputs carry the contract columns") {
  SweepSpec spec;
  spec.axes = {{SweepVar::FA, 0.0, 0.02, 0.01}};
  std::vector<SweepRow> rows = sweep(spec);
  std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("f_a,kappa,epsilon,eta_d_min,p_success,tolerant,margin,improved\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows

  nlohmann::json mirror = sweep_json(rows);
  REQUIRE(mirror.size() == 3);
  for (const char* key : {"f_a", "kappa", "epsilon", "eta_d_min", "p_success", "tolerant",
                          "margin", "improved", "eta_s", "eta_b", "eta_d"}) {
    CHECK(mirror[0].contains(key));
  }
}
