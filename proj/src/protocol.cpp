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

#include "photonfuse/protocol.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "photonfuse/elements.hpp"
#include "photonfuse/metrics.hpp"

namespace photonfuse {

namespace {

constexpr double kAnalyzerAngle = -std::numbers::pi / 4.0;  // maps |+> onto the H mode

struct PairLayout {
  std::string beam_a1, beam_b1, beam_a2, beam_b2, port_det, port_keep;
};

PairLayout pair_layout(int pair_index) {
  if (pair_index == 0) return {"1a", "1b", "2a", "2b", "1c", "1d"};
  if (pair_index == 1) return {"3a", "3b", "4a", "4b", "3c", "3d"};
  throw std::invalid_argument("pair_index must be 0 or 1");
}

/// ± analyzer on a port: rotate so |+> lands on H, then watch both modes.
std::vector<DetectorSpec> analyzer_detectors(const std::string& port, double eta_d) {
  return {{"D" + port + "+", mode_h(port), eta_d}, {"D" + port + "-", mode_v(port), eta_d}};
}

}  // namespace

void ProtocolConfig::validate() const {
  source.validate();
  if (!(eta_d > 0.0 && eta_d <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in (0,1]");
  }
  if (!std::isfinite(pbs_reflection_phase)) {
    throw std::invalid_argument("reflection phase must be finite");
  }
}

std::pair<MixedState, std::vector<DetectorSpec>> step1_premeasure(const ProtocolConfig& cfg,
                                                                  int pair_index) {
  cfg.validate();
  const PairLayout lay = pair_layout(pair_index);
  MixedState joint = tensor(lossy_pair(cfg.source, lay.beam_a1, lay.beam_b1),
                            lossy_pair(cfg.source, lay.beam_a2, lay.beam_b2));
  joint = pbs(joint, lay.beam_b1, lay.beam_b2, lay.port_det, lay.port_keep,
              cfg.pbs_reflection_phase);
  joint = pol_rotation(joint, lay.port_det, kAnalyzerAngle);
  return {std::move(joint), analyzer_detectors(lay.port_det, cfg.eta_d)};
}

std::vector<HeraldOutcome> step1_fuse(const ProtocolConfig& cfg, int pair_index) {
  const PairLayout lay = pair_layout(pair_index);
  auto [joint, detectors] = step1_premeasure(cfg, pair_index);
  auto all = measure_all_patterns(joint, detectors);

  std::vector<HeraldOutcome> accepted;
  for (int minus_click : {0, 1}) {
    const std::uint32_t mask = minus_click ? 0b10u : 0b01u;
    HeraldOutcome out;
    out.pattern.outcomes = {{detectors[0].label, minus_click ? Outcome::Off : Outcome::Click},
                            {detectors[1].label, minus_click ? Outcome::Click : Outcome::Off}};
    if (auto it = all.find(mask); it != all.end()) {
      out.prob = it->second.prob;
      out.state = it->second.conditional;
    }
    if (minus_click) {
      out.pattern.sigma_z_targets.push_back(lay.port_keep);
      out.state = pauli_z(out.state, lay.port_keep);
    }
    accepted.push_back(std::move(out));
  }
  return accepted;
}

FusionResult step2_fuse(const ProtocolConfig& cfg) {
  cfg.validate();
  auto side1 = step1_fuse(cfg, 0);
  auto side2 = step1_fuse(cfg, 1);

  FusionResult result;
  for (const auto& o1 : side1) {
    for (const auto& o2 : side2) {
      MixedState joint = tensor(o1.state, o2.state);
      joint = pbs(joint, "1d", "3d", "1e", "1f", cfg.pbs_reflection_phase);
      joint = pol_rotation(joint, "1e", kAnalyzerAngle);
      joint = pol_rotation(joint, "1f", kAnalyzerAngle);

      std::vector<DetectorSpec> detectors = analyzer_detectors("1e", cfg.eta_d);
      auto det_f = analyzer_detectors("1f", cfg.eta_d);
      detectors.insert(detectors.end(), det_f.begin(), det_f.end());
      auto all = measure_all_patterns(joint, detectors);

      // Twofold coincidence: exactly one click at 1e and one at 1f.
      for (int e_minus : {0, 1}) {
        for (int f_minus : {0, 1}) {
          const std::uint32_t mask = (e_minus ? 0b0010u : 0b0001u) | (f_minus ? 0b1000u : 0b0100u);
          HeraldOutcome out;
          out.pattern.outcomes = o1.pattern.outcomes;
          out.pattern.outcomes.insert(out.pattern.outcomes.end(), o2.pattern.outcomes.begin(),
                                      o2.pattern.outcomes.end());
          out.pattern.outcomes.push_back({detectors[0].label, e_minus ? Outcome::Off : Outcome::Click});
          out.pattern.outcomes.push_back({detectors[1].label, e_minus ? Outcome::Click : Outcome::Off});
          out.pattern.outcomes.push_back({detectors[2].label, f_minus ? Outcome::Off : Outcome::Click});
          out.pattern.outcomes.push_back({detectors[3].label, f_minus ? Outcome::Click : Outcome::Off});
          out.pattern.sigma_z_targets = o1.pattern.sigma_z_targets;
          out.pattern.sigma_z_targets.insert(out.pattern.sigma_z_targets.end(),
                                             o2.pattern.sigma_z_targets.begin(),
                                             o2.pattern.sigma_z_targets.end());

          if (auto it = all.find(mask); it != all.end()) {
            out.prob = it->second.prob;
            out.state = it->second.conditional;
          }
          // One sigma_z per minus click, on a beam entangled with the rest.
          for (int i = 0; i < e_minus + f_minus; ++i) {
            out.pattern.sigma_z_targets.push_back("4a");
            out.state = pauli_z(out.state, "4a");
          }

          result.p_success += out.prob;
          for (const auto& b : out.state.branches()) result.rho_r.add_branch(b.weight, b.state);
          result.patterns.push_back(std::move(out));
        }
      }
    }
  }
  result.rho_r = result.rho_r.pruned();
  return result;
}

PureState ghz_state(const std::vector<std::string>& beams) {
  if (beams.size() < 2) throw std::invalid_argument("a GHZ state needs at least two beams");
  std::map<ModeId, int> all_h, all_v;
  for (const auto& b : beams) {
    if (!all_h.emplace(mode_h(b), 1).second) {
      throw std::invalid_argument("duplicate beam label " + b);
    }
    all_v.emplace(mode_v(b), 1);
  }
  PureState s;
  const double amp = 1.0 / std::sqrt(2.0);
  s.add(OccupationState(all_h), amp);
  s.add(OccupationState(all_v), amp);
  return s;
}

MixedState hv_mixture(const std::vector<std::string>& beams) {
  std::map<ModeId, int> all_h, all_v;
  for (const auto& b : beams) {
    all_h[mode_h(b)] = 1;
    all_v[mode_v(b)] = 1;
  }
  MixedState s;
  s.add_branch(0.5, PureState::basis(OccupationState(all_h)));
  s.add_branch(0.5, PureState::basis(OccupationState(all_v)));
  return s;
}

ReferenceStates reference_states() {
  ReferenceStates r;
  r.ghz3 = ghz_state({"1a", "2a", "1d"});
  r.ghz4 = ghz_state({"1a", "2a", "3a", "4a"});
  const std::vector<std::string> beams = {"1a", "2a", "3a", "4a"};
  auto add_all = [](MixedState& acc, const MixedState& part) {
    for (const auto& b : part.branches()) acc.add_branch(b.weight, b.state);
  };
  for (std::size_t drop = 0; drop < 4; ++drop) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < 4; ++i) {
      if (i != drop) kept.push_back(beams[i]);
    }
    add_all(r.rho1, hv_mixture(kept));
    add_all(r.rho3, hv_mixture({beams[drop]}));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      add_all(r.rho2, hv_mixture({beams[i], beams[j]}));
    }
  }
  return r;
}

MixedState id_loss(const PureState& reference, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("loss rate must lie in [0,1]");
  }
  if (!reference.is_normalized()) {
    throw std::invalid_argument("reference state must be normalized");
  }
  std::set<std::string> beams;
  for (const auto& m : reference.occupied_modes()) beams.insert(m.spatial);
  MixedState s = MixedState::pure(reference);
  for (const auto& beam : beams) s = loss_channel(s, beam, 1.0 - epsilon);
  return s;
}

IdDecomposition id_decompose(const MixedState& rho, const PureState& reference) {
  if (std::abs(rho.trace() - 1.0) > kNormTol) {
    throw std::invalid_argument("decomposition input must be normalized");
  }
  std::set<std::string> ref_beams;
  for (const auto& m : reference.occupied_modes()) ref_beams.insert(m.spatial);
  const int n_qubits = static_cast<int>(ref_beams.size());
  for (const auto& m : rho.occupied_modes()) {
    if (!ref_beams.count(m.spatial)) {
      throw std::invalid_argument("state occupies beam " + m.spatial +
                                  " outside the reference qubits");
    }
  }

  IdDecomposition dec;
  dec.weights.assign(n_qubits + 1, 0.0);
  for (const auto& b : rho.branches()) {
    for (const auto& [occ, a] : b.state.amplitudes()) {
      const int present = occ.total();
      if (present > n_qubits) {
        throw std::invalid_argument("photon count exceeds the reference qubit number");
      }
      dec.weights[n_qubits - present] += b.weight * std::norm(a);
    }
  }

  auto residual_at = [&](double eps) { return trace_distance(rho, id_loss(reference, eps)); };

  // Vacuum-sector closed form; exact whenever the state truly has the
  // independent-loss structure.
  const double closed =
      std::clamp(std::pow(dec.weights[n_qubits], 1.0 / n_qubits), 0.0, 1.0);
  const double closed_residual = residual_at(closed);
  dec.epsilon = closed;
  dec.residual = closed_residual;
  if (closed_residual <= kNormTol) return dec;

  // Golden-section fallback for inputs away from the independent-loss form.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = residual_at(x1), f2 = residual_at(x2);
  while (hi - lo > 1e-12) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = residual_at(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = residual_at(x2);
    }
  }
  const double fitted = 0.5 * (lo + hi);
  const double fitted_residual = residual_at(fitted);
  if (fitted_residual < closed_residual) {
    dec.epsilon = fitted;
    dec.residual = fitted_residual;
  }
  return dec;
}

double success_probability_formula(const EmissionParams& e, double eta_d) {
  return std::pow(eta_d, 4) * std::pow(e.eta_b + e.eta_s, 4) / 8.0;
}

double id_loss_rate_formula(const EmissionParams& e) {
  if (!(e.eta_b + e.eta_s > 0.0)) {
    throw std::invalid_argument("eta_s + eta_b must be positive");
  }
  return e.eta_b / (e.eta_b + e.eta_s);
}

nlohmann::json protocol_report(const ProtocolConfig& cfg) {
  cfg.validate();
  if (!(cfg.source.eta_s > 0.0)) throw std::invalid_argument("eta_s must be positive");

  FusionResult fusion = step2_fuse(cfg);
  MixedState rho = fusion.normalized_rho();
  PureState ghz4 = ghz_state({"1a", "2a", "3a", "4a"});
  IdDecomposition dec = id_decompose(rho, ghz4);
  LossParams loss = loss_from_emission(cfg.source);

  nlohmann::json j;
  j["config"] = {{"eta_s", cfg.source.eta_s}, {"eta_a", cfg.source.eta_a},
                 {"eta_b", cfg.source.eta_b}, {"f_c", loss.f_c},
                 {"f_a", loss.f_a},           {"f_b", loss.f_b},
                 {"eta_d", cfg.eta_d}};
  j["p_success"] = fusion.p_success;
  j["epsilon"] = dec.epsilon;
  j["sector_weights"] = dec.weights;
  j["ghz4_fidelity"] = fidelity(rho, ghz4);
  j["residual"] = dec.residual;
  nlohmann::json patterns = nlohmann::json::object();
  for (const auto& o : fusion.patterns) patterns[o.pattern.str()] = o.prob;
  j["patterns"] = patterns;
  return j;
}

}  // namespace photonfuse
