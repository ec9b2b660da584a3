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

#ifndef PHOTONFUSE_SOURCES_HPP
#define PHOTONFUSE_SOURCES_HPP

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "photonfuse/fock.hpp"

namespace photonfuse {

/// Emission-probability view of a photon-pair source: a full pair with
/// probability eta_s, a lone photon in beam a (b) with probability eta_a
/// (eta_b), vacuum otherwise.
struct EmissionParams {
  double eta_s = 1.0;
  double eta_a = 0.0;
  double eta_b = 0.0;

  double vacuum_weight() const { return 1.0 - eta_s - eta_a - eta_b; }
  void validate() const;  // each in [0,1], sum <= 1
};

/// Loss-rate view of the same source: a perfect pair suffers a correlated
/// loss f_c (both photons together) and independent arm losses f_a, f_b.
struct LossParams {
  double f_c = 0.0;
  double f_a = 0.0;
  double f_b = 0.0;

  void validate() const;  // each in [0,1)
};

EmissionParams emission_from_loss(const LossParams& l);

/// Inverse of emission_from_loss. Requires eta_s > 0; rejects emission
/// triples outside the image of the loss parameterization (where the
/// implied f_c would be negative).
LossParams loss_from_emission(const EmissionParams& e);

/// (|HH> + |VV>)/sqrt(2) on two distinct beams.
PureState bell_pair(const std::string& a, const std::string& b);

/// The source mixture: vacuum, Bell pair, and the two lone-photon components
/// (each split evenly between H and V). Trace 1.
MixedState lossy_pair(const EmissionParams& params, const std::string& a, const std::string& b);

/// Same state built the operational way: a Bell pair through a correlated
/// keep-both/drop-both split (rate f_c) followed by independent arm losses.
/// Kept as the second route for the parameterization-equivalence checks.
MixedState lossy_pair_via_channels(const LossParams& l, const std::string& a, const std::string& b);

/// Source configuration holding exactly one of the two parameterizations.
struct SourceSpec {
  bool has_emission = false;
  bool has_loss = false;
  EmissionParams emission_params;
  LossParams loss_params;

  EmissionParams emission() const;
  LossParams loss() const;  // requires eta_s > 0 when converting
};

/// Accepts {"eta_s":..,"eta_a":..,"eta_b":..} or {"f_c":..,"f_a":..,"f_b":..}.
/// Mixing the two families, or supplying an incomplete family, is an error.
SourceSpec source_from_json(const nlohmann::json& j);

}  // namespace photonfuse

#endif  // PHOTONFUSE_SOURCES_HPP
