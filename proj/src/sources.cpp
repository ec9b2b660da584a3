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

#include "photonfuse/sources.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

#include "photonfuse/elements.hpp"

namespace photonfuse {

namespace {
// Slack for sums assembled from user-entered decimals; rejection is strict
// beyond it (values are never clamped).
constexpr double kParamSlack = 1e-12;
}  // namespace

void EmissionParams::validate() const {
  for (double p : {eta_s, eta_a, eta_b}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("emission probabilities must lie in [0,1]");
    }
  }
  if (eta_s + eta_a + eta_b > 1.0 + kParamSlack) {
    throw std::invalid_argument("emission probabilities must satisfy eta_s+eta_a+eta_b <= 1");
  }
}

void LossParams::validate() const {
  for (double p : {f_c, f_a, f_b}) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw std::invalid_argument("loss rates must lie in [0,1)");
    }
  }
}

EmissionParams emission_from_loss(const LossParams& l) {
  l.validate();
  EmissionParams e;
  e.eta_s = (1.0 - l.f_c) * (1.0 - l.f_a) * (1.0 - l.f_b);
  e.eta_a = (1.0 - l.f_c) * (1.0 - l.f_a) * l.f_b;
  e.eta_b = (1.0 - l.f_c) * (1.0 - l.f_b) * l.f_a;
  return e;
}

LossParams loss_from_emission(const EmissionParams& e) {
  e.validate();
  if (!(e.eta_s > 0.0)) {
    throw std::invalid_argument("eta_s must be positive to invert the parameterization");
  }
  LossParams l;
  l.f_a = e.eta_b / (e.eta_b + e.eta_s);
  l.f_b = e.eta_a / (e.eta_a + e.eta_s);
  l.f_c = 1.0 - (e.eta_a + e.eta_s) * (e.eta_b + e.eta_s) / e.eta_s;
  if (l.f_c < -kParamSlack) {
    throw std::invalid_argument(
        "emission parameters are not representable as loss rates (implied f_c < 0)");
  }
  l.f_c = std::max(l.f_c, 0.0);
  return l;
}

PureState bell_pair(const std::string& a, const std::string& b) {
  if (a == b) throw std::invalid_argument("bell pair requires distinct beams");
  const double amp = 1.0 / std::sqrt(2.0);
  PureState s;
  s.add(OccupationState({{mode_h(a), 1}, {mode_h(b), 1}}), amp);
  s.add(OccupationState({{mode_v(a), 1}, {mode_v(b), 1}}), amp);
  return s;
}

MixedState lossy_pair(const EmissionParams& params, const std::string& a, const std::string& b) {
  params.validate();
  if (a == b) throw std::invalid_argument("lossy pair requires distinct beams");
  MixedState s;
  s.add_branch(std::max(params.vacuum_weight(), 0.0), PureState::vacuum());
  s.add_branch(params.eta_s, bell_pair(a, b));
  s.add_branch(params.eta_a / 2.0, PureState::basis(OccupationState::single(mode_h(a))));
  s.add_branch(params.eta_a / 2.0, PureState::basis(OccupationState::single(mode_v(a))));
  s.add_branch(params.eta_b / 2.0, PureState::basis(OccupationState::single(mode_h(b))));
  s.add_branch(params.eta_b / 2.0, PureState::basis(OccupationState::single(mode_v(b))));
  return s;
}

MixedState lossy_pair_via_channels(const LossParams& l, const std::string& a, const std::string& b) {
  l.validate();
  // Correlated split first: both photons kept or both dropped.
  MixedState s;
  s.add_branch(1.0 - l.f_c, bell_pair(a, b));
  s.add_branch(l.f_c, PureState::vacuum());
  s = loss_channel(s, a, 1.0 - l.f_a);
  s = loss_channel(s, b, 1.0 - l.f_b);
  return s;
}

EmissionParams SourceSpec::emission() const {
  if (has_emission) return emission_params;
  if (has_loss) return emission_from_loss(loss_params);
  throw std::invalid_argument("source configuration is empty");
}

LossParams SourceSpec::loss() const {
  if (has_loss) return loss_params;
  if (has_emission) return loss_from_emission(emission_params);
  throw std::invalid_argument("source configuration is empty");
}

SourceSpec source_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("source configuration must be a JSON object");
  const bool any_eta = j.contains("eta_s") || j.contains("eta_a") || j.contains("eta_b");
  const bool any_f = j.contains("f_c") || j.contains("f_a") || j.contains("f_b");
  if (any_eta && any_f) {
    throw std::invalid_argument("supply either emission probabilities or loss rates, not both");
  }
  if (!any_eta && !any_f) {
    throw std::invalid_argument("source configuration missing (eta_s/eta_a/eta_b or f_c/f_a/f_b)");
  }
  SourceSpec spec;
  if (any_eta) {
    spec.has_emission = true;
    spec.emission_params.eta_s = j.value("eta_s", 0.0);
    spec.emission_params.eta_a = j.value("eta_a", 0.0);
    spec.emission_params.eta_b = j.value("eta_b", 0.0);
    spec.emission_params.validate();
  } else {
    spec.has_loss = true;
    spec.loss_params.f_c = j.value("f_c", 0.0);
    spec.loss_params.f_a = j.value("f_a", 0.0);
    spec.loss_params.f_b = j.value("f_b", 0.0);
    spec.loss_params.validate();
  }
  return spec;
}

}  // namespace photonfuse
