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

#include <cmath>

#include "photonfuse/elements.hpp"
#include "photonfuse/metrics.hpp"
#include "photonfuse/protocol.hpp"

using namespace photonfuse;

namespace {

MixedState summed_step1(const ProtocolConfig& cfg) {
  MixedState summed;
  for (const auto& outcome : step1_fuse(cfg, 0)) {
    for (const auto& b : outcome.state.branches()) summed.add_branch(b.weight, b.state);
  }
  return summed;
}

double empty_survivor_weight(const MixedState& s, const std::string& beam) {
  double w = 0.0;
  for (const auto& b : s.branches()) {
    for (const auto& [occ, amp] : b.state.amplitudes()) {
      if (occ.count_spatial(beam) == 0) w += b.weight * std::norm(amp);
    }
  }
  return w;
}

}  // namespace

TEST_CASE("step one with perfect sources heralds a pure three-photon GHZ component") {
  ProtocolConfig cfg{{1.0, 0.0, 0.0}, 1.0};
  auto outcomes = step1_fuse(cfg, 0);
  REQUIRE(outcomes.size() == 2);

  // Both one-click patterns are equally likely. Each carries the GHZ sector
  // (1/4) plus the both-photons-at-the-detector event (1/8) whose survivor
  // beam is empty; the latter only dies at the second fusion.
  CHECK(outcomes[0].prob == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(outcomes[1].prob == doctest::Approx(0.375).epsilon(1e-12));

  MixedState summed = summed_step1(cfg);
  CHECK(summed.trace() == doctest::Approx(0.75).epsilon(1e-12));

  PureState ghz3 = ghz_state({"1a", "2a", "1d"});
  const double ghz_weight = expectation(summed, ghz3);
  CHECK(ghz_weight == doctest::Approx(0.5).epsilon(1e-9));          // eta_s^2 eta_d / 2
  CHECK(sector_weight(summed, 3) == doctest::Approx(ghz_weight));   // sector is pure GHZ
  CHECK(empty_survivor_weight(summed, "1d") == doctest::Approx(0.25).epsilon(1e-12));

  // feedforward equalizes the two sign patterns
  CHECK(trace_distance(outcomes[0].state.normalized(), outcomes[1].state.normalized()) < 1e-9);
}

TEST_CASE("step one component weights for a lossy source") {
  ProtocolConfig cfg{{0.6, 0.1, 0.2}, 0.8};
  MixedState summed = summed_step1(cfg);

  PureState ghz3 = ghz_state({"1a", "2a", "1d"});
  CHECK(expectation(summed, ghz3) == doctest::Approx(0.144).epsilon(1e-9));

  const double two_photon = 0.25 * 0.6 * 0.2 * 0.8;
  OccupationState hh(std::map<ModeId, int>{{mode_h("1a"), 1}, {mode_h("1d"), 1}});
  OccupationState vv(std::map<ModeId, int>{{mode_v("2a"), 1}, {mode_v("1d"), 1}});
  CHECK(diagonal_weight(summed, hh) == doctest::Approx(two_photon).epsilon(1e-9));
  CHECK(diagonal_weight(summed, vv) == doctest::Approx(two_photon).epsilon(1e-9));

  const double one_photon = 0.25 * 0.2 * 0.2 * 0.8;
  CHECK(diagonal_weight(summed, OccupationState::single(mode_h("1d"))) ==
        doctest::Approx(one_photon).epsilon(1e-9));
}

TEST_CASE("step one without pair emission has no GHZ component") {
  ProtocolConfig cfg{{0.0, 0.3, 0.3}, 1.0};
  EmissionParams e{0.0, 0.3, 0.3};
  e.validate();  // eta_s = 0 is a valid source, only the protocol report needs kappa
  MixedState summed = summed_step1(cfg);
  CHECK(expectation(summed, ghz_state({"1a", "2a", "1d"})) == doctest::Approx(0.0));
  CHECK(sector_weight(summed, 3) == doctest::Approx(0.0));
}

TEST_CASE("tracing the survivor beam kills the GHZ coherence") {
  ProtocolConfig cfg{{1.0, 0.0, 0.0}, 1.0};
  MixedState reduced = trace_out_spatial(summed_step1(cfg), {"1d"});
  OccupationState hh(std::map<ModeId, int>{{mode_h("1a"), 1}, {mode_h("2a"), 1}});
  OccupationState vv(std::map<ModeId, int>{{mode_v("1a"), 1}, {mode_v("2a"), 1}});
  DensityView view = density_view(reduced);
  std::size_t row = view.dim(), col = view.dim();
  for (std::size_t i = 0; i < view.dim(); ++i) {
    if (view.basis[i] == hh) row = i;
    if (view.basis[i] == vv) col = i;
  }
  REQUIRE(row < view.dim());
  REQUIRE(col < view.dim());
  CHECK(std::abs(view.at(row, col)) < 1e-12);       // no cross coherence
  CHECK(std::abs(view.at(row, row) - 0.25) < 1e-12);
}

TEST_CASE("step two with perfect sources heralds a pure four-photon GHZ state") {
  ProtocolConfig cfg{{1.0, 0.0, 0.0}, 1.0};
  FusionResult fusion = step2_fuse(cfg);
  CHECK(fusion.p_success == doctest::Approx(0.125).epsilon(1e-12));
  REQUIRE(fusion.patterns.size() == 16);
  for (const auto& o : fusion.patterns) {
    CHECK(o.prob == doctest::Approx(1.0 / 128.0).epsilon(1e-9));
  }
  CHECK(fidelity(fusion.normalized_rho(), ghz_state({"1a", "2a", "3a", "4a"})) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("step two success probability and loss rate at a frozen point") {
  ProtocolConfig cfg{{0.5, 0.2, 0.1}, 0.9};
  FusionResult fusion = step2_fuse(cfg);
  CHECK(fusion.p_success == doctest::Approx(0.01062882).epsilon(1e-9));

  IdDecomposition dec = id_decompose(fusion.normalized_rho(), ghz_state({"1a", "2a", "3a", "4a"}));
  CHECK(dec.epsilon == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(dec.residual < 1e-9);
}

TEST_CASE("all sixteen herald patterns agree after feedforward") {
  ProtocolConfig cfg{{0.5, 0.2, 0.1}, 0.9};
  FusionResult fusion = step2_fuse(cfg);
  MixedState first = fusion.patterns.front().state.normalized();
  for (const auto& o : fusion.patterns) {
    CHECK(o.prob == doctest::Approx(fusion.p_success / 16.0).epsilon(1e-9));
    CHECK(trace_distance(first, o.state.normalized()) < 1e-9);
  }
}

TEST_CASE("injected reflection phase corrupts the state but not pattern agreement") {
  // A reflection phase multiplies every amplitude term identically in every
  // herald pattern, so the sigma_z-corrected conditionals still agree with
  // each other; what breaks is agreement with the canonical convention.
  ProtocolConfig injected{{1.0, 0.0, 0.0}, 1.0, 0.3};
  FusionResult fusion = step2_fuse(injected);
  MixedState first = fusion.patterns.front().state.normalized();
  double pattern_spread = 0.0;
  for (const auto& o : fusion.patterns) {
    pattern_spread = std::max(pattern_spread, trace_distance(first, o.state.normalized()));
  }
  CHECK(pattern_spread < 1e-9);

  ProtocolConfig canonical{{1.0, 0.0, 0.0}, 1.0};
  MixedState reference = step2_fuse(canonical).patterns.front().state.normalized();
  CHECK(trace_distance(reference, first) > 1e-3);
}

TEST_CASE("lossless a-arm yields a pure GHZ state regardless of the rest") {
  for (double ea : {0.0, 0.2, 0.5}) {
    for (double ed : {0.4, 1.0}) {
      ProtocolConfig cfg{{1.0 - ea, ea, 0.0}, ed};
      CHECK(fidelity(step2_fuse(cfg).normalized_rho(), ghz_state({"1a", "2a", "3a", "4a"})) >
            1.0 - 1e-9);
    }
  }
}

TEST_CASE("independent loss oracle values") {
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});

  CHECK(trace_distance(id_loss(ghz4, 0.0), MixedState::pure(ghz4)) < 1e-12);

  MixedState gone = id_loss(ghz4, 1.0);
  CHECK(diagonal_weight(gone, OccupationState::vacuum()) == doctest::Approx(1.0).epsilon(1e-12));

  MixedState half = id_loss(ghz4, 0.5);
  CHECK(diagonal_weight(half, OccupationState::vacuum()) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(fidelity(half, ghz4) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  CHECK(fidelity(id_loss(ghz4, 0.3), ghz4) == doctest::Approx(std::pow(0.7, 4)).epsilon(1e-12));

  CHECK_THROWS_AS(id_loss(ghz4, 1.5), std::invalid_argument);
}

TEST_CASE("independent loss equals the explicit loss hierarchy") {
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});
  ReferenceStates refs = reference_states();
  CHECK(refs.rho1.trace() == doctest::Approx(4.0));
  CHECK(refs.rho2.trace() == doctest::Approx(6.0));
  CHECK(refs.rho3.trace() == doctest::Approx(4.0));

  const double eps = 0.35;
  MixedState expected;
  expected.add_branch(std::pow(1.0 - eps, 4), ghz4);
  auto add_scaled = [&expected](const MixedState& part, double scale) {
    for (const auto& b : part.branches()) expected.add_branch(scale * b.weight, b.state);
  };
  add_scaled(refs.rho1, std::pow(1.0 - eps, 3) * eps);
  add_scaled(refs.rho2, std::pow(1.0 - eps, 2) * eps * eps);
  add_scaled(refs.rho3, (1.0 - eps) * std::pow(eps, 3));
  expected.add_branch(std::pow(eps, 4), PureState::vacuum());

  CHECK(trace_distance(expected, id_loss(ghz4, eps)) < 1e-12);
}

TEST_CASE("loss-rate fit recovers constructed inputs") {
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});

  IdDecomposition clean = id_decompose(MixedState::pure(ghz4), ghz4);
  CHECK(clean.epsilon == doctest::Approx(0.0));
  CHECK(clean.residual < 1e-12);

  IdDecomposition quarter = id_decompose(id_loss(ghz4, 0.25), ghz4);
  CHECK(quarter.epsilon == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(quarter.residual < 1e-12);
  double weight_sum = 0.0;
  for (double w : quarter.weights) weight_sum += w;
  CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(quarter.weights[0] == doctest::Approx(std::pow(0.75, 4)).epsilon(1e-12));
  CHECK(quarter.weights[4] == doctest::Approx(std::pow(0.25, 4)).epsilon(1e-12));

  MixedState elsewhere = MixedState::pure(bell_pair("9z", "8y"));
  CHECK_THROWS_AS(id_decompose(elsewhere, ghz4), std::invalid_argument);
}

TEST_CASE("fitted loss rate ignores eta_a and detector efficiency") {
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});
  double reference = -1.0;
  for (double ea : {0.0, 0.2}) {
    for (double ed : {0.3, 0.6, 1.0}) {
      ProtocolConfig cfg{{0.5, ea, 0.1}, ed};
      IdDecomposition dec = id_decompose(step2_fuse(cfg).normalized_rho(), ghz4);
      if (reference < 0.0) reference = dec.epsilon;
      CHECK(std::abs(dec.epsilon - reference) < 1e-9);
    }
  }
  CHECK(reference == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("resource state is symmetric under beam exchange") {
  ProtocolConfig cfg{{0.5, 0.2, 0.1}, 0.8};
  MixedState rho = step2_fuse(cfg).normalized_rho();
  MixedState swapped = relabel_spatial(
      rho, std::map<std::string, std::string>{{"1a", "3a"}, {"3a", "1a"}});
  CHECK(trace_distance(rho, swapped) < 1e-9);
}

TEST_CASE("protocol report carries the full contract") {
  ProtocolConfig cfg{{0.5, 0.2, 0.1}, 0.9};
  nlohmann::json report = protocol_report(cfg);
  CHECK(report.contains("p_success"));
  CHECK(report.contains("epsilon"));
  CHECK(report.contains("sector_weights"));
  CHECK(report.contains("ghz4_fidelity"));
  CHECK(report.contains("residual"));
  CHECK(report["patterns"].size() == 16);
  CHECK(report["p_success"].get<double>() == doctest::Approx(0.01062882).epsilon(1e-9));
  CHECK(report["epsilon"].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
  CHECK(report["sector_weights"].size() == 5);

  ProtocolConfig bad{{0.0, 0.3, 0.3}, 0.9};
  CHECK_THROWS_WITH_AS(protocol_report(bad), "eta_s must be positive", std::invalid_argument);
}
