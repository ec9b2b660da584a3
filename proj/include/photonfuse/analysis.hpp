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

#ifndef PHOTONFUSE_ANALYSIS_HPP
#define PHOTONFUSE_ANALYSIS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "photonfuse/sources.hpp"

namespace photonfuse {

/// Minimum detector efficiency for loss-tolerant operation given the a-arm
/// loss rate: 1/(2(1-f_a)). Empty when f_a >= 1/2 (no efficiency <= 1 works).
std::optional<double> threshold_eta_d_min(double f_a);

/// Same threshold from the lone-photon-to-pair ratio kappa = eta_b/eta_s:
/// (kappa+1)/2, attainable only for kappa < 1.
std::optional<double> threshold_from_kappa(double kappa);

/// The detector threshold the parity-encoded predecessor scheme requires;
/// this pipeline beats it exactly when f_a < 1/4.
inline constexpr double kPriorThreshold = 2.0 / 3.0;

struct ThresholdReport {
  double epsilon = 0.0;  // per-qubit loss rate of the heralded resource
  double eta_d = 1.0;
  double kappa = 0.0;
  double margin = 0.0;   // (1-epsilon)*eta_d - 1/2
  bool tolerant = false;
  std::optional<double> eta_d_min;  // empty = unattainable
};

ThresholdReport tolerance_report(const EmissionParams& source, double eta_d);
ThresholdReport tolerance_report(const LossParams& source, double eta_d);

enum class SweepVar { FA, EtaD, EtaS, EtaB };

SweepVar sweep_var_from_string(const std::string& name);
std::string to_string(SweepVar v);

struct GridAxis {
  SweepVar var;
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  std::vector<double> values() const;  // inclusive endpoints, validated
};

struct SweepSpec {
  LossParams base;        // swept variables override these
  double eta_d = 1.0;
  std::vector<GridAxis> axes;  // row order = row-major over the axes
  bool slow_path = false;      // also simulate and fit epsilon per row

  static GridAxis default_axis();  // f_a from 0 to 0.49, step 0.01
};

struct SweepRow {
  double f_a = 0.0;
  double kappa = 0.0;
  double epsilon = 0.0;
  std::optional<double> eta_d_min;
  double p_success = 0.0;
  bool tolerant = false;
  double margin = 0.0;
  bool improved = false;  // eta_d_min beats the prior 2/3 threshold
  std::optional<double> sim_epsilon;
  std::optional<double> sim_residual;

  // inputs echoed for the JSON mirror
  double eta_s = 0.0, eta_a = 0.0, eta_b = 0.0, f_c = 0.0, f_b = 0.0, eta_d = 1.0;
};

/// Evaluates every grid point in deterministic row-major order. Slow-path
/// rows are independent and evaluated in parallel; ordering is by grid
/// index regardless of completion order.
std::vector<SweepRow> sweep(const SweepSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);
nlohmann::json sweep_json(const std::vector<SweepRow>& rows);

}  // namespace photonfuse

#endif  // PHOTONFUSE_ANALYSIS_HPP
