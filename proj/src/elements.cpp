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

#include "photonfuse/elements.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace photonfuse {

ModeMap pbs_map(const std::string& in1, const std::string& in2, const std::string& out1,
                const std::string& out2, double reflection_phase) {
  if (in1 == in2 || out1 == out2) {
    throw std::invalid_argument("pbs ports must be distinct spatial labels");
  }
  const Complex refl = std::polar(1.0, reflection_phase);
  ModeMap m;
  m.inputs = {mode_h(in1), mode_v(in1), mode_h(in2), mode_v(in2)};
  m.outputs = {mode_h(out1), mode_v(out1), mode_h(out2), mode_v(out2)};
  m.coeffs.assign(4, std::vector<Complex>(4, Complex(0.0, 0.0)));
  m.coeffs[0][0] = 1.0;   // in1 H -> out1 H
  m.coeffs[1][3] = refl;  // in1 V -> out2 V
  m.coeffs[2][2] = 1.0;   // in2 H -> out2 H
  m.coeffs[3][1] = refl;  // in2 V -> out1 V
  return m;
}

PureState pbs(const PureState& s, const std::string& in1, const std::string& in2,
              const std::string& out1, const std::string& out2, double reflection_phase) {
  return apply_mode_map(s, pbs_map(in1, in2, out1, out2, reflection_phase));
}

MixedState pbs(const MixedState& s, const std::string& in1, const std::string& in2,
               const std::string& out1, const std::string& out2, double reflection_phase) {
  return apply_mode_map(s, pbs_map(in1, in2, out1, out2, reflection_phase));
}

ModeMap pol_rotation_map(const std::string& spatial, double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("rotation angle must be finite");
  ModeMap m;
  m.inputs = {mode_h(spatial), mode_v(spatial)};
  m.outputs = m.inputs;
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  m.coeffs = {{Complex(c, 0.0), Complex(sn, 0.0)}, {Complex(-sn, 0.0), Complex(c, 0.0)}};
  return m;
}

PureState pol_rotation(const PureState& s, const std::string& spatial, double angle) {
  return apply_mode_map(s, pol_rotation_map(spatial, angle));
}

MixedState pol_rotation(const MixedState& s, const std::string& spatial, double angle) {
  return apply_mode_map(s, pol_rotation_map(spatial, angle));
}

PureState pauli_z(const PureState& s, const std::string& spatial) {
  PureState out;
  const ModeId v = mode_v(spatial);
  for (const auto& [occ, amp] : s.amplitudes()) {
    out.add(occ, (occ.count(v) % 2 == 0) ? amp : -amp);
  }
  return out;
}

MixedState pauli_z(const MixedState& s, const std::string& spatial) {
  MixedState out;
  for (const auto& b : s.branches()) out.add_branch(b.weight, pauli_z(b.state, spatial));
  return out;
}

MixedState loss_mode(const MixedState& s, const ModeId& mode, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("transmissivity must lie in [0,1]");
  }
  MixedState out;
  for (const auto& b : s.branches()) {
    int max_n = 0;
    for (const auto& [occ, a] : b.state.amplitudes()) max_n = std::max(max_n, occ.count(mode));
    for (int lost = 0; lost <= max_n; ++lost) {
      PureState survivor;
      for (const auto& [occ, a] : b.state.amplitudes()) {
        const int n = occ.count(mode);
        if (n < lost) continue;
        // Kraus amplitude for losing `lost` of n photons.
        const double binom = factorial(n) / (factorial(lost) * factorial(n - lost));
        const double kraus = std::sqrt(binom * std::pow(eta, n - lost) * std::pow(1.0 - eta, lost));
        if (kraus == 0.0) continue;
        std::map<ModeId, int> counts;
        for (const auto& [m2, c2] : occ.entries()) counts[m2] = c2;
        counts[mode] = n - lost;
        survivor.add(OccupationState(counts), a * kraus);
      }
      out.add(survivor, b.weight);
    }
  }
  return out.pruned();
}

MixedState loss_channel(const MixedState& s, const std::string& spatial, double eta) {
  return loss_mode(loss_mode(s, mode_h(spatial), eta), mode_v(spatial), eta);
}

void ElementSpec::validate() const {
  switch (kind) {
    case ElementKind::PBS:
      if (ports.size() != 4) throw std::invalid_argument("PBS takes ports [in1,in2,out1,out2]");
      if (ports[0] == ports[1] || ports[2] == ports[3]) {
        throw std::invalid_argument("PBS ports must be distinct");
      }
      break;
    case ElementKind::POL_ROT:
      if (ports.size() != 1) throw std::invalid_argument("POL_ROT acts on one spatial label");
      if (!std::isfinite(parameter)) throw std::invalid_argument("rotation angle must be finite");
      break;
    case ElementKind::LOSS:
      if (ports.size() != 1) throw std::invalid_argument("LOSS acts on one spatial label");
      if (!(parameter >= 0.0 && parameter <= 1.0)) {
        throw std::invalid_argument("transmissivity must lie in [0,1]");
      }
      break;
    case ElementKind::PAULI_Z:
      if (ports.size() != 1) throw std::invalid_argument("PAULI_Z acts on one spatial label");
      break;
  }
  for (const auto& p : ports) {
    if (p.empty()) throw std::invalid_argument("empty spatial label in element ports");
  }
}

namespace {

ElementKind kind_from_string(const std::string& s) {
  if (s == "PBS") return ElementKind::PBS;
  if (s == "POL_ROT") return ElementKind::POL_ROT;
  if (s == "LOSS") return ElementKind::LOSS;
  if (s == "PAULI_Z") return ElementKind::PAULI_Z;
  throw std::invalid_argument("unknown element kind '" + s + "'");
}

std::string kind_to_string(ElementKind k) {
  switch (k) {
    case ElementKind::PBS: return "PBS";
    case ElementKind::POL_ROT: return "POL_ROT";
    case ElementKind::LOSS: return "LOSS";
    case ElementKind::PAULI_Z: return "PAULI_Z";
  }
  return "?";
}

}  // namespace

ElementSpec element_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("element spec must be a JSON object");
  ElementSpec spec;
  spec.kind = kind_from_string(j.at("kind").get<std::string>());
  spec.ports = j.at("ports").get<std::vector<std::string>>();
  if (j.contains("parameter")) spec.parameter = j.at("parameter").get<double>();
  spec.validate();
  return spec;
}

nlohmann::json element_to_json(const ElementSpec& spec) {
  nlohmann::json j;
  j["kind"] = kind_to_string(spec.kind);
  j["ports"] = spec.ports;
  if (spec.kind == ElementKind::POL_ROT || spec.kind == ElementKind::LOSS) {
    j["parameter"] = spec.parameter;
  }
  return j;
}

std::vector<ElementSpec> parse_circuit(const nlohmann::json& j) {
  if (!j.is_array()) throw std::invalid_argument("circuit description must be a JSON array");
  std::vector<ElementSpec> circuit;
  circuit.reserve(j.size());
  for (const auto& entry : j) circuit.push_back(element_from_json(entry));
  return circuit;
}

MixedState apply_element(const MixedState& s, const ElementSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ElementKind::PBS:
      return pbs(s, spec.ports[0], spec.ports[1], spec.ports[2], spec.ports[3]);
    case ElementKind::POL_ROT:
      return pol_rotation(s, spec.ports[0], spec.parameter);
    case ElementKind::LOSS:
      return loss_channel(s, spec.ports[0], spec.parameter);
    case ElementKind::PAULI_Z:
      return pauli_z(s, spec.ports[0]);
  }
  throw std::logic_error("unreachable element kind");
}

MixedState run_circuit(const MixedState& s, const std::vector<ElementSpec>& circuit) {
  MixedState state = s;
  for (const auto& spec : circuit) state = apply_element(state, spec);
  return state;
}

}  // namespace photonfuse
