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

#ifndef PHOTONFUSE_ELEMENTS_HPP
#define PHOTONFUSE_ELEMENTS_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "photonfuse/mode_map.hpp"

namespace photonfuse {

/// Polarizing beam splitter: H transmits straight through, V crosses.
///   a†(in1,H) -> a†(out1,H)    a†(in2,H) -> a†(out2,H)
///   a†(in1,V) -> a†(out2,V)    a†(in2,V) -> a†(out1,V)
/// The map is a mode permutation; `reflection_phase` multiplies the two V
/// (reflected) entries by exp(i*phase) and exists as a fault-injection hook
/// for the verification suite. The physical element has phase 0.
ModeMap pbs_map(const std::string& in1, const std::string& in2, const std::string& out1,
                const std::string& out2, double reflection_phase = 0.0);

PureState pbs(const PureState& s, const std::string& in1, const std::string& in2,
              const std::string& out1, const std::string& out2, double reflection_phase = 0.0);
MixedState pbs(const MixedState& s, const std::string& in1, const std::string& in2,
               const std::string& out1, const std::string& out2, double reflection_phase = 0.0);

/// Polarization rotation on one beam:
///   a†_H -> cos(t) a†_H + sin(t) a†_V,   a†_V -> -sin(t) a†_H + cos(t) a†_V.
/// At t = pi/4 this takes |H> to |+>; rotating by -pi/4 before an H/V split
/// realizes a ±45° analyzer with the H-side detector reporting "+".
ModeMap pol_rotation_map(const std::string& spatial, double angle);
PureState pol_rotation(const PureState& s, const std::string& spatial, double angle);
MixedState pol_rotation(const MixedState& s, const std::string& spatial, double angle);

/// Sign flip per V photon on one beam; self-inverse.
PureState pauli_z(const PureState& s, const std::string& spatial);
MixedState pauli_z(const MixedState& s, const std::string& spatial);

/// Photon loss with transmissivity eta on a single mode. Branch-wise Kraus
/// split: losing k of n photons carries weight C(n,k) eta^(n-k) (1-eta)^k.
/// Trace preserving; the environment mode is never materialized.
MixedState loss_mode(const MixedState& s, const ModeId& mode, double eta);

/// Loss applied to both polarization modes of a beam, each with
/// transmissivity eta.
MixedState loss_channel(const MixedState& s, const std::string& spatial, double eta);

enum class ElementKind { PBS, POL_ROT, LOSS, PAULI_Z };

/// One entry of a JSON circuit description. PBS ports are ordered
/// [in1, in2, out1, out2]; the single-beam elements take one port.
/// `parameter` is the rotation angle (radians) or the transmissivity.
struct ElementSpec {
  ElementKind kind;
  std::vector<std::string> ports;
  double parameter = 0.0;

  void validate() const;
};

ElementSpec element_from_json(const nlohmann::json& j);
nlohmann::json element_to_json(const ElementSpec& spec);

/// Parses and validates an ordered circuit description (a JSON array).
std::vector<ElementSpec> parse_circuit(const nlohmann::json& j);

MixedState apply_element(const MixedState& s, const ElementSpec& spec);
MixedState run_circuit(const MixedState& s, const std::vector<ElementSpec>& circuit);

}  // namespace photonfuse

#endif  // PHOTONFUSE_ELEMENTS_HPP
