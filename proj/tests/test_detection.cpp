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

#include <cmath>

#include "photonfuse/detection.hpp"
#include "photonfuse/metrics.hpp"
#include "photonfuse/protocol.hpp"
#include "photonfuse/sources.hpp"

using namespace photonfuse;

namespace {
MixedState n_photons(const ModeId& mode, int n) {
  return MixedState::pure(PureState::basis(OccupationState(std::map<ModeId, int>{{mode, n}})));
}
}  // namespace

TEST_CASE("click probability oracle values") {
  const ModeId target = mode_h("t");
  DetectorSpec det{"D", target, 0.5};

  CHECK(click_probability(MixedState::vacuum(), det) == doctest::Approx(0.0));
  CHECK(click_probability(n_photons(target, 1), DetectorSpec{"D", target, 0.8}) ==
        doctest::Approx(0.8).epsilon(1e-12));
  CHECK(click_probability(n_photons(target, 2), det) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK_THROWS_AS(click_probability(MixedState::vacuum(), DetectorSpec{"D", target, 1.4}),
                  std::invalid_argument);
}

TEST_CASE("povm equivalence between formula and loss-projection routes") {
  CHECK(povm_equivalence_check(kPhotonBudget, 1.0) < 1e-12);
  CHECK(povm_equivalence_check(kPhotonBudget, 0.3) < 1e-12);
  CHECK(povm_equivalence_check(kPhotonBudget, 0.0) < 1e-12);

  // frozen point: three photons, eta_d = 0.3 clicks with 1 - 0.7^3 = 0.657
  const ModeId target = mode_h("t");
  auto res = measure_on_off(n_photons(target, 3), {{"D", target, 0.3}}, {Outcome::Click});
  CHECK(res.prob == doctest::Approx(0.657).epsilon(1e-12));
}

TEST_CASE("measurement is destructive and conditions correctly") {
  const ModeId target = mode_h("t");

  auto clicked = measure_on_off(n_photons(target, 1), {{"D", target, 1.0}}, {Outcome::Click});
  CHECK(clicked.prob == doctest::Approx(1.0));
  CHECK(diagonal_weight(clicked.conditional, OccupationState::vacuum()) == doctest::Approx(1.0));

  auto missed = measure_on_off(n_photons(target, 1), {{"D", target, 0.8}}, {Outcome::Off});
  CHECK(missed.prob == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(diagonal_weight(missed.conditional, OccupationState::vacuum()) ==
        doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("port click on an entangled partner leaves the partner maximally mixed") {
  PureState entangled = bell_pair("a", "t");
  auto result = measure_port_or(MixedState::pure(entangled), "t", 1.0);
  CHECK(result.prob == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(result.conditional, hv_mixture({"a"})) < 1e-12);
}

TEST_CASE("duplicate detector targets are rejected") {
  const ModeId target = mode_h("t");
  std::vector<DetectorSpec> dets = {{"D1", target, 1.0}, {"D2", target, 1.0}};
  CHECK_THROWS_AS(measure_all_patterns(n_photons(target, 1), dets), std::invalid_argument);
}

TEST_CASE("joint patterns partition probability and stay positive") {
  MixedState joint = tensor(lossy_pair({0.6, 0.1, 0.2}, "a", "b"),
                            lossy_pair({0.6, 0.1, 0.2}, "c", "d"));
  std::vector<DetectorSpec> dets = {{"Da", mode_h("b"), 0.7},
                                    {"Db", mode_v("b"), 0.7},
                                    {"Dc", mode_h("d"), 0.4}};
  auto all = measure_all_patterns(joint, dets);
  double sum = 0.0;
  for (const auto& [mask, res] : all) {
    sum += res.prob;
    CHECK(res.conditional.trace() == doctest::Approx(res.prob).epsilon(1e-12));
    CHECK(min_eigenvalue(res.conditional) > -1e-9);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("herald pattern serialization") {
  HeraldPattern pattern;
  pattern.outcomes = {{"D1c+", Outcome::Click}, {"D1c-", Outcome::Off}};
  CHECK(pattern.str() == "D1c+=click,D1c-=off");
}
