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

#include "photonfuse/detection.hpp"

#include <cmath>
#include <stdexcept>

#include "photonfuse/elements.hpp"

namespace photonfuse {

void DetectorSpec::validate() const {
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in [0,1]");
  }
}

std::string to_string(Outcome o) { return o == Outcome::Click ? "click" : "off"; }

std::string HeraldPattern::str() const {
  std::string out;
  for (const auto& [label, outcome] : outcomes) {
    if (!out.empty()) out += ",";
    out += label + "=" + to_string(outcome);
  }
  return out;
}

double click_probability(const MixedState& s, const DetectorSpec& d) {
  d.validate();
  double p = 0.0;
  for (const auto& b : s.branches()) {
    for (const auto& [occ, a] : b.state.amplitudes()) {
      const int n = occ.count(d.target);
      p += b.weight * std::norm(a) * (1.0 - std::pow(1.0 - d.eta_d, n));
    }
  }
  return p;
}

std::map<std::uint32_t, MeasureResult> measure_all_patterns(
    const MixedState& s, const std::vector<DetectorSpec>& detectors) {
  if (detectors.empty()) throw std::invalid_argument("no detectors given");
  if (detectors.size() > 31) throw std::invalid_argument("too many detectors");
  std::set<ModeId> targets;
  for (const auto& d : detectors) {
    d.validate();
    if (!targets.insert(d.target).second) {
      throw std::invalid_argument("duplicate detector target " + d.target.str());
    }
  }

  MixedState attenuated = s;
  for (const auto& d : detectors) attenuated = loss_mode(attenuated, d.target, d.eta_d);

  std::map<std::uint32_t, MixedState> conditionals;
  for (const auto& b : attenuated.branches()) {
    // Split each branch by click signature, and within a signature by the
    // exact occupation of the detected modes (distinct photon records at the
    // detectors decohere the survivors).
    std::map<std::pair<std::uint32_t, OccupationState>, PureState> buckets;
    for (const auto& [occ, a] : b.state.amplitudes()) {
      std::uint32_t mask = 0;
      for (std::size_t i = 0; i < detectors.size(); ++i) {
        if (occ.count(detectors[i].target) > 0) mask |= (1u << i);
      }
      buckets[{mask, occ.restricted_to(targets)}].add(occ.without(targets), a);
    }
    for (const auto& [key, kept] : buckets) {
      conditionals[key.first].add(kept, b.weight);
    }
  }

  std::map<std::uint32_t, MeasureResult> out;
  for (auto& [mask, state] : conditionals) {
    MeasureResult r;
    r.conditional = state.pruned();
    r.prob = r.conditional.trace();
    if (r.prob >= kWeightPrune) out[mask] = std::move(r);
  }
  return out;
}

MeasureResult measure_on_off(const MixedState& s, const std::vector<DetectorSpec>& detectors,
                             const std::vector<Outcome>& pattern) {
  if (pattern.size() != detectors.size()) {
    throw std::invalid_argument("pattern length must match detector count");
  }
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == Outcome::Click) mask |= (1u << i);
  }
  auto all = measure_all_patterns(s, detectors);
  auto it = all.find(mask);
  if (it == all.end()) return {};
  return it->second;
}

MeasureResult measure_port_or(const MixedState& s, const std::string& spatial, double eta_d) {
  std::vector<DetectorSpec> dets = {{spatial + ".H", mode_h(spatial), eta_d},
                                    {spatial + ".V", mode_v(spatial), eta_d}};
  auto all = measure_all_patterns(s, dets);
  MeasureResult r;
  for (const auto& [mask, res] : all) {
    if (mask == 0) continue;  // both off
    r.prob += res.prob;
    for (const auto& b : res.conditional.branches()) r.conditional.add_branch(b.weight, b.state);
  }
  return r;
}

double povm_equivalence_check(int n_max, double eta_d) {
  if (n_max < 0 || n_max > kPhotonBudget) {
    throw std::invalid_argument("n_max must lie within the photon budget");
  }
  const ModeId mode = mode_h("probe");
  double worst = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    MixedState s = MixedState::pure(PureState::basis(OccupationState({{mode, n}})));
    std::vector<DetectorSpec> det = {{"D", mode, eta_d}};
    auto all = measure_all_patterns(s, det);
    double clicked = 0.0;
    if (auto it = all.find(1u); it != all.end()) clicked = it->second.prob;
    const double formula = 1.0 - std::pow(1.0 - eta_d, n);
    worst = std::max(worst, std::abs(clicked - formula));
  }
  return worst;
}

}  // namespace photonfuse
