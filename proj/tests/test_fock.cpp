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
#include <random>

#include "photonfuse/fock.hpp"
#include "photonfuse/metrics.hpp"
#include "photonfuse/mode_map.hpp"
#include "photonfuse/protocol.hpp"
#include "photonfuse/sources.hpp"

using namespace photonfuse;

namespace {

PureState random_pure(const std::vector<ModeId>& modes, int total, int terms, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
  PureState s;
  for (int t = 0; t < terms; ++t) {
    std::map<ModeId, int> counts;
    for (int p = 0; p < total; ++p) counts[modes[pick(rng)]]++;
    s.add(OccupationState(counts), Complex(unif(rng), unif(rng)));
  }
  return s.normalized();
}

}  // namespace

TEST_CASE("occupation state canonical form") {
  OccupationState occ(std::map<ModeId, int>{{mode_h("1a"), 1}, {mode_v("1d"), 2}, {mode_h("x"), 0}});
  CHECK(occ.total() == 3);
  CHECK(occ.entries().size() == 2);  // zero-count entry never stored
  CHECK(occ.count(mode_h("x")) == 0);
  CHECK(occ.count(mode_v("1d")) == 2);
  CHECK(occ.count_spatial("1d") == 2);
}

TEST_CASE("occupation state serialization golden") {
  OccupationState occ(std::map<ModeId, int>{{mode_v("1d"), 2}, {mode_h("1a"), 1}});
  CHECK(occ.str() == "1a.H:1,1d.V:2");
  CHECK(OccupationState::parse("1a.H:1,1d.V:2") == occ);
  CHECK(OccupationState::parse("").is_vacuum());
  CHECK(OccupationState::vacuum().str() == "");
  CHECK_THROWS_AS(OccupationState::parse("1a.X:1"), std::invalid_argument);
  CHECK_THROWS_AS(OccupationState::parse("1a.H:1,1a.H:1"), std::invalid_argument);
}

TEST_CASE("occupation state parse round trip") {
  std::mt19937 rng(11);
  const std::vector<ModeId> modes = {mode_h("1a"), mode_v("1a"), mode_h("2b"), mode_v("2b")};
  std::uniform_int_distribution<int> count(0, 2);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<ModeId, int> counts;
    for (const auto& m : modes) counts[m] = count(rng);
    OccupationState occ(counts);
    CHECK(OccupationState::parse(occ.str()) == occ);
  }
}

TEST_CASE("photon budget is enforced, never truncated") {
  CHECK_THROWS_AS(OccupationState(std::map<ModeId, int>{{mode_h("a"), kPhotonBudget + 1}}),
                  std::invalid_argument);
  CHECK_NOTHROW(OccupationState(std::map<ModeId, int>{{mode_h("a"), kPhotonBudget}}));
  CHECK_THROWS_AS(OccupationState(std::map<ModeId, int>{{mode_h("a"), -1}}),
                  std::invalid_argument);
}

TEST_CASE("tensor of vacua is the vacuum") {
  MixedState v = tensor(MixedState::vacuum(), MixedState::vacuum());
  CHECK(v.trace() == doctest::Approx(1.0));
  CHECK(v.branches().size() == 1);
  CHECK(v.branches()[0].state.amplitude(OccupationState::vacuum()) == Complex(1.0, 0.0));
}

TEST_CASE("tensor of two bell pairs expands to four equal terms") {
  PureState product = tensor(bell_pair("1a", "1b"), bell_pair("2a", "2b"));
  CHECK(product.term_count() == 4);
  for (const auto& [occ, amp] : product.amplitudes()) {
    CHECK(occ.total() == 4);
    CHECK(amp.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(amp.imag() == 0.0);
  }
}

TEST_CASE("tensor branch count is the product of branch counts") {
  EmissionParams params{0.6, 0.1, 0.2};
  MixedState one = lossy_pair(params, "1a", "1b");
  MixedState two = lossy_pair(params, "2a", "2b");
  MixedState joint = tensor(one, two);
  CHECK(joint.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(joint.branch_count() == one.branch_count() * two.branch_count());
  CHECK(joint.branch_count() == 36);  // 6 pure branches per source
}

TEST_CASE("tensor rejects overlapping mode sets") {
  MixedState s = MixedState::pure(bell_pair("a", "b"));
  CHECK_THROWS_AS(tensor(s, s), std::invalid_argument);
}

TEST_CASE("identity and swap mode maps") {
  const std::vector<ModeId> modes = {mode_h("a"), mode_h("b")};
  PureState s;
  s.add(OccupationState(std::map<ModeId, int>{{mode_h("a"), 1}}), Complex(0.8, 0.0));
  s.add(OccupationState(std::map<ModeId, int>{{mode_h("b"), 1}}), Complex(0.0, 0.6));

  PureState same = apply_mode_map(s, ModeMap::identity(modes));
  CHECK(std::abs(same.amplitude(OccupationState::single(mode_h("a"))) - Complex(0.8, 0.0)) < 1e-15);

  ModeMap swap = ModeMap::permutation({mode_h("a"), mode_h("b")}, {mode_h("b"), mode_h("a")});
  PureState swapped = apply_mode_map(PureState::basis(OccupationState::single(mode_h("a"))), swap);
  CHECK(swapped.amplitude(OccupationState::single(mode_h("b"))) == Complex(1.0, 0.0));
}

TEST_CASE("balanced splitter bunches an indistinguishable pair") {
  // a -> (c+d)/sqrt2, b -> (c-d)/sqrt2 on |1,1>_{a,b}
  ModeMap m;
  m.inputs = {mode_h("a"), mode_h("b")};
  m.outputs = {mode_h("c"), mode_h("d")};
  const double r = 1.0 / std::sqrt(2.0);
  m.coeffs = {{Complex(r, 0), Complex(r, 0)}, {Complex(r, 0), Complex(-r, 0)}};

  PureState in = PureState::basis(
      OccupationState(std::map<ModeId, int>{{mode_h("a"), 1}, {mode_h("b"), 1}}));
  PureState out = apply_mode_map(in, m);

  OccupationState two_c(std::map<ModeId, int>{{mode_h("c"), 2}});
  OccupationState two_d(std::map<ModeId, int>{{mode_h("d"), 2}});
  OccupationState one_each(std::map<ModeId, int>{{mode_h("c"), 1}, {mode_h("d"), 1}});
  CHECK(std::abs(out.amplitude(two_c) - Complex(r, 0)) < 1e-12);
  CHECK(std::abs(out.amplitude(two_d) - Complex(-r, 0)) < 1e-12);
  CHECK(std::abs(out.amplitude(one_each)) < 1e-12);
  CHECK(out.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-unitary substitution is rejected") {
  ModeMap m;
  m.inputs = {mode_h("a"), mode_h("b")};
  m.outputs = {mode_h("c"), mode_h("d")};
  m.coeffs = {{Complex(1, 0), Complex(0, 0)}, {Complex(1, 0), Complex(0, 0)}};
  CHECK_THROWS_AS(apply_mode_map(PureState::vacuum(), m), std::invalid_argument);
}

TEST_CASE("mode map preserves norm and photon number on random unitaries") {
  std::mt19937 rng(5);
  const std::vector<ModeId> modes = {mode_h("a"), mode_v("a"), mode_h("b"), mode_v("b")};
  std::uniform_real_distribution<double> angle(0.1, 1.3);
  for (int trial = 0; trial < 12; ++trial) {
    // ladder of rotations between polarization modes plus a splitter-like mix
    PureState in = random_pure(modes, 2 + trial % 6, 4, rng);
    ModeMap m;
    m.inputs = modes;
    m.outputs = modes;
    const double t1 = angle(rng), t2 = angle(rng);
    const double c1 = std::cos(t1), s1 = std::sin(t1), c2 = std::cos(t2), s2 = std::sin(t2);
    m.coeffs = {{Complex(c1, 0), Complex(s1, 0), 0.0, 0.0},
                {Complex(-s1, 0), Complex(c1, 0), 0.0, 0.0},
                {0.0, 0.0, Complex(c2, 0), Complex(s2, 0)},
                {0.0, 0.0, Complex(-s2, 0), Complex(c2, 0)}};
    PureState out = apply_mode_map(in, m);
    CHECK(std::abs(out.norm_squared() - 1.0) < 1e-12);
    for (const auto& [occ, a] : out.amplitudes()) CHECK(occ.total() == (2 + trial % 6));
  }
}

TEST_CASE("serial and parallel mode map kernels agree") {
  std::mt19937 rng(17);
  const std::vector<ModeId> modes = {mode_h("a"), mode_v("a"), mode_h("b"), mode_v("b")};
  PureState in = random_pure(modes, 5, 150, rng);  // large enough for the parallel path
  ModeMap m;
  m.inputs = modes;
  m.outputs = modes;
  const double c = std::cos(0.7), s = std::sin(0.7);
  m.coeffs = {{Complex(c, 0), 0.0, Complex(s, 0), 0.0},
              {0.0, Complex(c, 0), 0.0, Complex(s, 0)},
              {Complex(-s, 0), 0.0, Complex(c, 0), 0.0},
              {0.0, Complex(-s, 0), 0.0, Complex(c, 0)}};
  PureState serial = apply_mode_map_serial(in, m);
  PureState parallel = apply_mode_map(in, m);
  double dev = 0.0;
  for (const auto& [occ, amp] : serial.amplitudes()) {
    dev = std::max(dev, std::abs(amp - parallel.amplitude(occ)));
  }
  for (const auto& [occ, amp] : parallel.amplitudes()) {
    dev = std::max(dev, std::abs(amp - serial.amplitude(occ)));
  }
  CHECK(dev < 1e-12);
}

TEST_CASE("partial trace leaves unoccupied modes alone") {
  MixedState s = MixedState::pure(bell_pair("a", "b"));
  MixedState same = partial_trace(s, {mode_h("zz"), mode_v("zz")});
  CHECK(trace_distance(s, same) < 1e-12);
}

TEST_CASE("partial trace of a bell pair is maximally mixed") {
  MixedState s = MixedState::pure(bell_pair("a", "b"));
  MixedState reduced = trace_out_spatial(s, {"b"});
  CHECK(reduced.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(reduced, hv_mixture({"a"})) < 1e-12);
}

TEST_CASE("tensor then partial trace returns the first factor") {
  std::mt19937 rng(23);
  const std::vector<ModeId> left = {mode_h("a"), mode_v("a")};
  const std::vector<ModeId> right = {mode_h("b"), mode_v("b")};
  for (int trial = 0; trial < 5; ++trial) {
    MixedState a = MixedState::pure(random_pure(left, 2, 3, rng));
    MixedState b = MixedState::pure(random_pure(right, 2, 3, rng));
    CHECK(trace_distance(partial_trace(tensor(a, b), {mode_h("b"), mode_v("b")}), a) < 1e-12);
  }
}

TEST_CASE("density view is hermitian and positive semidefinite") {
  std::mt19937 rng(31);
  const std::vector<ModeId> modes = {mode_h("a"), mode_v("a"), mode_h("b")};
  for (int trial = 0; trial < 5; ++trial) {
    MixedState s;
    s.add_branch(0.4, random_pure(modes, 2, 3, rng));
    s.add_branch(0.6, random_pure(modes, 1, 2, rng));
    CHECK(hermiticity_defect(s) < 1e-12);
    CHECK(min_eigenvalue(s) > -1e-9);
  }
}

TEST_CASE("fidelity oracle values") {
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});
  CHECK(fidelity(MixedState::pure(ghz4), ghz4) == doctest::Approx(1.0).epsilon(1e-12));

  // single surviving photon is orthogonal to the four-photon sector
  CHECK(fidelity(hv_mixture({"1a"}), ghz4) == doctest::Approx(0.0));

  MixedState unnormalized = MixedState::pure(ghz4, 0.5);
  CHECK_THROWS_AS(fidelity(unnormalized, ghz4), std::invalid_argument);
}

TEST_CASE("trace distance separates orthogonal states and vanishes on equals") {
  MixedState a = MixedState::pure(PureState::basis(OccupationState::single(mode_h("a"))));
  MixedState b = MixedState::pure(PureState::basis(OccupationState::single(mode_v("a"))));
  CHECK(trace_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trace_distance(a, a) < 1e-12);
}

TEST_CASE("relabeling rejects collisions") {
  PureState s = PureState::basis(
      OccupationState(std::map<ModeId, int>{{mode_h("a"), 1}, {mode_h("b"), 1}}));
  std::map<std::string, std::string> collide = {{"a", "b"}};
  CHECK_THROWS_AS(relabel_spatial(s, collide), std::invalid_argument);
  std::map<std::string, std::string> ok = {{"a", "c"}};
  PureState renamed = relabel_spatial(s, ok);
  CHECK(renamed.amplitude(OccupationState(
            std::map<ModeId, int>{{mode_h("c"), 1}, {mode_h("b"), 1}})) == Complex(1.0, 0.0));
}
