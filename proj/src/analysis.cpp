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

#include "photonfuse/analysis.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "photonfuse/metrics.hpp"
#include "photonfuse/protocol.hpp"

namespace photonfuse {

std::optional<double> threshold_eta_d_min(double f_a) {
  if (!(f_a >= 0.0 && f_a < 1.0)) throw std::invalid_argument("f_a must lie in [0,1)");
  if (f_a >= 0.5) return std::nullopt;
  return 1.0 / (2.0 * (1.0 - f_a));
}

std::optional<double> threshold_from_kappa(double kappa) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  if (kappa >= 1.0) return std::nullopt;
  return (kappa + 1.0) / 2.0;
}

ThresholdReport tolerance_report(const EmissionParams& source, double eta_d) {
  source.validate();
  if (!(source.eta_s > 0.0)) throw std::invalid_argument("eta_s must be positive");
  if (!(eta_d > 0.0 && eta_d <= 1.0)) {
    throw std::invalid_argument("detector efficiency must lie in (0,1]");
  }
  ThresholdReport r;
  r.epsilon = id_loss_rate_formula(source);
  r.eta_d = eta_d;
  r.kappa = source.eta_b / source.eta_s;
  r.margin = (1.0 - r.epsilon) * eta_d - 0.5;
  r.tolerant = r.margin > 0.0;
  r.eta_d_min = (r.epsilon < 0.5) ? std::optional<double>(1.0 / (2.0 * (1.0 - r.epsilon)))
                                  : std::nullopt;
  return r;
}

ThresholdReport tolerance_report(const LossParams& source, double eta_d) {
  return tolerance_report(emission_from_loss(source), eta_d);
}

SweepVar sweep_var_from_string(const std::string& name) {
  if (name == "f_a") return SweepVar::FA;
  if (name == "eta_d") return SweepVar::EtaD;
  if (name == "eta_s") return SweepVar::EtaS;
  if (name == "eta_b") return SweepVar::EtaB;
  throw std::invalid_argument("unknown sweep variable '" + name +
                              "' (expected f_a, eta_d, eta_s, or eta_b)");
}

std::string to_string(SweepVar v) {
  switch (v) {
    case SweepVar::FA: return "f_a";
    case SweepVar::EtaD: return "eta_d";
    case SweepVar::EtaS: return "eta_s";
    case SweepVar::EtaB: return "eta_b";
  }
  return "?";
}

std::vector<double> GridAxis::values() const {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  if (!(stop >= start)) throw std::invalid_argument("grid stop must not precede start");
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 1e-12) break;
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

GridAxis SweepSpec::default_axis() { return {SweepVar::FA, 0.0, 0.49, 0.01}; }

namespace {

struct PointInputs {
  LossParams loss;
  EmissionParams emission;
  double eta_d;
};

PointInputs assemble_point(const SweepSpec& spec, const std::vector<GridAxis>& axes,
                           const std::vector<std::size_t>& index) {
  LossParams loss = spec.base;
  double eta_d = spec.eta_d;
  bool eta_form = false;
  EmissionParams emission = emission_from_loss(spec.base);
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const double v = axes[k].values()[index[k]];
    switch (axes[k].var) {
      case SweepVar::FA: loss.f_a = v; break;
      case SweepVar::EtaD: eta_d = v; break;
      case SweepVar::EtaS:
        emission.eta_s = v;
        eta_form = true;
        break;
      case SweepVar::EtaB:
        emission.eta_b = v;
        eta_form = true;
        break;
    }
  }
  PointInputs p;
  if (eta_form) {
    emission.validate();
    p.emission = emission;
    p.loss = loss_from_emission(emission);
  } else {
    loss.validate();
    p.loss = loss;
    p.emission = emission_from_loss(loss);
  }
  if (!(eta_d > 0.0 && eta_d <= 1.0)) {
    throw std::invalid_argument("swept eta_d must lie in (0,1]");
  }
  p.eta_d = eta_d;
  return p;
}

}  // namespace

std::vector<SweepRow> sweep(const SweepSpec& spec) {
  spec.base.validate();
  std::vector<GridAxis> axes = spec.axes;
  if (axes.empty()) axes.push_back(SweepSpec::default_axis());

  std::vector<std::vector<double>> axis_values;
  std::size_t total = 1;
  for (const auto& ax : axes) {
    axis_values.push_back(ax.values());
    total *= axis_values.back().size();
  }
  if (total == 0) throw std::invalid_argument("empty grid");

  std::vector<SweepRow> rows(total);
  // Row-major index order keeps output deterministic.
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::size_t> index(axes.size());
    std::size_t rem = flat;
    for (std::size_t k = axes.size(); k-- > 0;) {
      index[k] = rem % axis_values[k].size();
      rem /= axis_values[k].size();
    }
    const PointInputs p = assemble_point(spec, axes, index);
    const ThresholdReport t = tolerance_report(p.emission, p.eta_d);

    SweepRow& row = rows[flat];
    row.f_a = p.loss.f_a;
    row.kappa = t.kappa;
    row.epsilon = t.epsilon;
    row.eta_d_min = t.eta_d_min;
    row.p_success = success_probability_formula(p.emission, p.eta_d);
    row.tolerant = t.tolerant;
    row.margin = t.margin;
    row.improved = t.eta_d_min.has_value() && *t.eta_d_min < kPriorThreshold;
    row.eta_s = p.emission.eta_s;
    row.eta_a = p.emission.eta_a;
    row.eta_b = p.emission.eta_b;
    row.f_c = p.loss.f_c;
    row.f_b = p.loss.f_b;
    row.eta_d = p.eta_d;
  }

  if (spec.slow_path) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows.size()); ++i) {
      SweepRow& row = rows[i];
      ProtocolConfig cfg;
      cfg.source = {row.eta_s, row.eta_a, row.eta_b};
      cfg.eta_d = row.eta_d;
      FusionResult fusion = step2_fuse(cfg);
      IdDecomposition dec =
          id_decompose(fusion.normalized_rho(), ghz_state({"1a", "2a", "3a", "4a"}));
      row.sim_epsilon = dec.epsilon;
      row.sim_residual = dec.residual;
    }
  }
  return rows;
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  const bool slow = !rows.empty() && rows.front().sim_epsilon.has_value();
  std::string out = "f_a,kappa,epsilon,eta_d_min,p_success,tolerant,margin,improved";
  if (slow) out += ",sim_epsilon,sim_residual";
  out += "\n";
  for (const auto& r : rows) {
    out += fmt17(r.f_a) + "," + fmt17(r.kappa) + "," + fmt17(r.epsilon) + ",";
    out += r.eta_d_min ? fmt17(*r.eta_d_min) : std::string("unattainable");
    out += "," + fmt17(r.p_success) + "," + (r.tolerant ? "true" : "false") + "," +
           fmt17(r.margin) + "," + (r.improved ? "true" : "false");
    if (slow) {
      out += "," + fmt17(r.sim_epsilon.value_or(0.0)) + "," + fmt17(r.sim_residual.value_or(0.0));
    }
    out += "\n";
  }
  return out;
}

nlohmann::json sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["f_a"] = r.f_a;
    j["kappa"] = r.kappa;
    j["epsilon"] = r.epsilon;
    if (r.eta_d_min) {
      j["eta_d_min"] = *r.eta_d_min;
    } else {
      j["eta_d_min"] = "unattainable";
    }
    j["p_success"] = r.p_success;
    j["tolerant"] = r.tolerant;
    j["margin"] = r.margin;
    j["improved"] = r.improved;
    if (r.sim_epsilon) j["sim_epsilon"] = *r.sim_epsilon;
    if (r.sim_residual) j["sim_residual"] = *r.sim_residual;
    j["eta_s"] = r.eta_s;
    j["eta_a"] = r.eta_a;
    j["eta_b"] = r.eta_b;
    j["f_c"] = r.f_c;
    j["f_b"] = r.f_b;
    j["eta_d"] = r.eta_d;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace photonfuse
