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

#ifndef PHOTONFUSE_PROTOCOL_HPP
#define PHOTONFUSE_PROTOCOL_HPP

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "photonfuse/detection.hpp"
#include "photonfuse/sources.hpp"

namespace photonfuse {

// Beam layout of the two-step fusion circuit. Four identical pair sources
// emit into (1a,1b), (2a,2b), (3a,3b), (4a,4b). Step one fuses 1b/2b (3b/4b)
// on a PBS into ports 1c/1d (3c/3d) and analyzes 1c (3c) in the ±45° basis.
// Step two fuses the surviving 1d/3d into 1e/1f and analyzes both. A run is
// accepted when every analyzed port fires exactly one of its two detectors;
// a sigma_z feedforward per "minus" click makes all accepted outcomes equal.

/// One protocol setting: four identical sources and one detector efficiency.
struct ProtocolConfig {
  EmissionParams source;
  double eta_d = 1.0;

  /// Fault-injection hook for the verification suite: extra phase on every
  /// PBS reflection. Zero for the physical protocol.
  double pbs_reflection_phase = 0.0;

  void validate() const;  // source valid, eta_d in (0,1]
};

/// One accepted herald outcome with its probability and the feedforward-
/// corrected conditional state (unnormalized; trace == prob).
struct HeraldOutcome {
  HeraldPattern pattern;
  double prob = 0.0;
  MixedState state;
};

/// First fusion of one source pair. `pair_index` 0 uses sources 1,2 and
/// beams 1b,2b -> 1c,1d; 1 uses sources 3,4 and 3b,4b -> 3c,3d. Returns the
/// two accepted one-click patterns (D+ only, D- only) with the sigma_z
/// correction already applied to the D- branch.
std::vector<HeraldOutcome> step1_fuse(const ProtocolConfig& cfg, int pair_index);

/// The pre-measurement joint state and the ± analyzer detectors of a step-1
/// round; exposed for completeness checks.
std::pair<MixedState, std::vector<DetectorSpec>> step1_premeasure(const ProtocolConfig& cfg,
                                                                  int pair_index);

struct FusionResult {
  double p_success = 0.0;
  MixedState rho_r;                      // unnormalized; trace == p_success
  std::vector<HeraldOutcome> patterns;   // the 16 accepted herald outcomes

  MixedState normalized_rho() const { return rho_r.normalized(); }
};

/// Full two-step pipeline over all 16 accepted herald patterns.
FusionResult step2_fuse(const ProtocolConfig& cfg);

/// N-beam GHZ state (|H..H> + |V..V>)/sqrt(2).
PureState ghz_state(const std::vector<std::string>& beams);

/// The explicit photon-loss hierarchy of the four-beam GHZ state: the
/// equal-weight H/V mixtures left after losing one, two, or three photons.
struct ReferenceStates {
  PureState ghz3;   // on 1a, 2a, 1d
  PureState ghz4;   // on 1a, 2a, 3a, 4a
  MixedState rho1;  // sum of the four three-beam mixtures (trace 4)
  MixedState rho2;  // sum of the six two-beam mixtures (trace 6)
  MixedState rho3;  // sum of the four one-beam mixtures (trace 4)
};

ReferenceStates reference_states();

/// Equal-weight H/V mixture on the listed beams (one photon per beam).
MixedState hv_mixture(const std::vector<std::string>& beams);

/// Independent whole-qubit loss: every spatial label of `reference` passes
/// a loss channel of transmissivity 1-epsilon (both polarization modes, so
/// a one-photon polarization qubit is lost as a unit).
MixedState id_loss(const PureState& reference, double epsilon);

/// Fit of a state against the independent-loss form of a pure reference.
struct IdDecomposition {
  double epsilon = 0.0;
  std::vector<double> weights;  // photon-sector traces, index = photons lost
  double residual = 0.0;        // trace distance to id_loss(reference, epsilon)
};

/// Sector split plus epsilon fit. Uses the closed form from the vacuum
/// sector when it reproduces the input; otherwise golden-section minimizes
/// the residual over [0,1].
IdDecomposition id_decompose(const MixedState& rho, const PureState& reference);

/// Success probability closed form: (1/8) eta_d^4 (eta_b + eta_s)^4.
double success_probability_formula(const EmissionParams& e, double eta_d);

/// epsilon closed form: eta_b / (eta_b + eta_s).
double id_loss_rate_formula(const EmissionParams& e);

/// Full run summary: p_success, fitted epsilon, sector weights, fidelity
/// with the four-beam GHZ state, fit residual, and per-pattern probabilities.
nlohmann::json protocol_report(const ProtocolConfig& cfg);

}  // namespace photonfuse

#endif  // PHOTONFUSE_PROTOCOL_HPP
