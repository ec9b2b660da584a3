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

#ifndef PHOTONFUSE_DETECTION_HPP
#define PHOTONFUSE_DETECTION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "photonfuse/fock.hpp"

namespace photonfuse {

/// A non-photon-number-resolving, inefficient, dark-count-free detector on
/// one mode. It reports only CLICK (at least one photon seen) or OFF.
struct DetectorSpec {
  std::string label;
  ModeId target;
  double eta_d = 1.0;

  void validate() const;
};

enum class Outcome : std::uint8_t { Off = 0, Click = 1 };

std::string to_string(Outcome o);

/// A joint detector outcome record plus the feedforward it implies.
struct HeraldPattern {
  std::vector<std::pair<std::string, Outcome>> outcomes;  // one entry per detector
  std::vector<std::string> sigma_z_targets;               // beams to correct

  /// "label=click,label=off,..." in listed order.
  std::string str() const;
};

struct MeasureResult {
  double prob = 0.0;
  MixedState conditional;  // trace equals prob; detected modes traced out
};

/// Click probability straight from the on/off POVM:
/// sum_n P(n in target) * (1 - (1-eta_d)^n). Absent modes read as vacuum.
double click_probability(const MixedState& s, const DetectorSpec& d);

/// Destructive joint measurement of k detectors, computed the operational
/// way: loss eta_d on each target, ideal presence/absence projection, then
/// trace over the target modes. Returns every outcome with nonzero weight,
/// keyed by a bitmask (bit i set = detectors[i] clicked). The probabilities
/// over all 2^k patterns sum to 1.
std::map<std::uint32_t, MeasureResult> measure_all_patterns(
    const MixedState& s, const std::vector<DetectorSpec>& detectors);

/// Single-pattern view of measure_all_patterns.
MeasureResult measure_on_off(const MixedState& s, const std::vector<DetectorSpec>& detectors,
                             const std::vector<Outcome>& pattern);

/// A whole-beam click: OR of the two polarization-mode detectors of one
/// spatial port, each with efficiency eta_d.
MeasureResult measure_port_or(const MixedState& s, const std::string& spatial, double eta_d);

/// Max deviation between the operational click probability on |n> and the
/// closed-form POVM expression, over n <= n_max.
double povm_equivalence_check(int n_max, double eta_d);

}  // namespace photonfuse

#endif  // PHOTONFUSE_DETECTION_HPP
