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

#include "photonfuse/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "photonfuse/analysis.hpp"
#include "photonfuse/detection.hpp"
#include "photonfuse/elements.hpp"
#include "photonfuse/metrics.hpp"
#include "photonfuse/mode_map.hpp"
#include "photonfuse/protocol.hpp"
#include "photonfuse/sources.hpp"

namespace photonfuse {

namespace {

const std::vector<std::string> kGhzBeams = {"1a", "2a", "3a", "4a"};

struct Recorder {
  std::vector<CheckResult> results;

  void push(std::string name, int criterion, double deviation, double tolerance) {
    results.push_back({std::move(name), criterion, deviation, tolerance,
                       deviation <= tolerance});
  }
};

// ---- random generators (deterministic for a fixed seed) --------------------

PureState random_pure(const std::vector<ModeId>& modes, int total, int terms, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
  PureState s;
  for (int t = 0; t < terms; ++t) {
    std::map<ModeId, int> counts;
    for (int p = 0; p < total; ++p) counts[modes[pick(rng)]]++;
    s.add(OccupationState(counts), Complex(unif(rng), unif(rng)));
  }
  if (s.norm_squared() == 0.0) s.add(OccupationState::vacuum(), 1.0);
  return s.normalized();
}

MixedState random_mixed(const std::vector<ModeId>& modes, int max_total, int branches,
                        std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  std::uniform_int_distribution<int> total(0, max_total);
  MixedState s;
  double sum = 0.0;
  std::vector<double> weights;
  for (int b = 0; b < branches; ++b) {
    weights.push_back(unif(rng));
    sum += weights.back();
  }
  for (int b = 0; b < branches; ++b) {
    s.add_branch(weights[b] / sum, random_pure(modes, total(rng), 3, rng));
  }
  return s;
}

ModeMap random_unitary_map(const std::vector<ModeId>& modes, std::mt19937& rng) {
  const Eigen::Index k = static_cast<Eigen::Index>(modes.size());
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd a(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  }
  Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(a).householderQ();
  ModeMap m;
  m.inputs = modes;
  m.outputs = modes;
  m.coeffs.assign(modes.size(), std::vector<Complex>(modes.size()));
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) m.coeffs[i][j] = q(i, j);
  }
  return m;
}

ModeMap compose(const ModeMap& first, const ModeMap& second) {
  ModeMap m;
  m.inputs = first.inputs;
  m.outputs = second.outputs;
  m.coeffs.assign(first.inputs.size(), std::vector<Complex>(second.outputs.size(), Complex(0, 0)));
  for (std::size_t i = 0; i < first.inputs.size(); ++i) {
    for (std::size_t j = 0; j < second.outputs.size(); ++j) {
      for (std::size_t k = 0; k < second.inputs.size(); ++k) {
        m.coeffs[i][j] += first.coeffs[i][k] * second.coeffs[k][j];
      }
    }
  }
  return m;
}

double max_amp_diff(const PureState& a, const PureState& b) {
  double d = 0.0;
  for (const auto& [occ, amp] : a.amplitudes()) d = std::max(d, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.amplitudes()) d = std::max(d, std::abs(amp - a.amplitude(occ)));
  return d;
}

// ---- shared protocol grid ---------------------------------------------------

struct GridPoint {
  EmissionParams e;
  double eta_d = 1.0;
  double p_success = 0.0;
  double epsilon_fit = 0.0;
  double fit_residual = 0.0;
  double id_form_distance = 0.0;  // vs id_loss(ghz4, closed-form epsilon)
};

std::vector<GridPoint> protocol_grid(double inject_phase) {
  const std::vector<double> etas = {0.2, 0.35, 0.5, 0.65, 0.8};
  const std::vector<double> singles = {0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<GridPoint> points;
  for (double es : etas) {
    for (double ea : singles) {
      for (double eb : singles) {
        if (es + ea + eb > 1.0) continue;
        for (double ed : {0.5, 1.0}) {
          points.push_back({{es, ea, eb}, ed});
        }
      }
    }
  }
  const PureState ghz4 = ghz_state(kGhzBeams);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(points.size()); ++i) {
    GridPoint& pt = points[i];
    ProtocolConfig cfg{pt.e, pt.eta_d, inject_phase};
    FusionResult fusion = step2_fuse(cfg);
    pt.p_success = fusion.p_success;
    MixedState rho = fusion.normalized_rho();
    IdDecomposition dec = id_decompose(rho, ghz4);
    pt.epsilon_fit = dec.epsilon;
    pt.fit_residual = dec.residual;
    pt.id_form_distance = trace_distance(rho, id_loss(ghz4, id_loss_rate_formula(pt.e)));
  }
  return points;
}

// ---- module property sections ----------------------------------------------

void check_fock_core(Recorder& rec, const VerifyOptions& opt, std::mt19937& rng) {
  const std::vector<ModeId> modes = {mode_h("p"), mode_v("p"), mode_h("q"), mode_v("q")};

  {
    double dev = 0.0;
    std::uniform_int_distribution<int> total(1, kPhotonBudget);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = total(rng);
      PureState in = random_pure(modes, n, 4, rng);
      PureState out = apply_mode_map(in, random_unitary_map(modes, rng));
      dev = std::max(dev, std::abs(out.norm_squared() - in.norm_squared()));
      for (const auto& [occ, a] : out.amplitudes()) {
        if (occ.total() != n) dev = std::max(dev, 1.0);
      }
    }
    rec.push("mode map preserves norm and photon number", 0, dev, 1e-12);
  }

  {
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      PureState in = random_pure(modes, 4, 4, rng);
      ModeMap u = random_unitary_map(modes, rng);
      ModeMap v = random_unitary_map(modes, rng);
      dev = std::max(dev, max_amp_diff(apply_mode_map(apply_mode_map(in, u), v),
                                       apply_mode_map(in, compose(u, v))));
    }
    rec.push("mode map composition matches matrix product", 0, dev, 1e-10);
  }

  {
    double dev = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
      PureState in = random_pure(modes, 6, 200, rng);
      ModeMap u = random_unitary_map(modes, rng);
      dev = std::max(dev, max_amp_diff(apply_mode_map(in, u), apply_mode_map_serial(in, u)));
    }
    rec.push("serial and parallel mode map kernels agree", 0, dev, 1e-12);
  }

  {
    const std::vector<ModeId> other = {mode_h("r"), mode_v("r")};
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      MixedState a = random_mixed(modes, 3, 3, rng);
      MixedState b = random_mixed(other, 2, 2, rng);
      std::set<ModeId> drop(other.begin(), other.end());
      dev = std::max(dev, trace_distance(partial_trace(tensor(a, b), drop), a));
    }
    rec.push("tensor then partial trace returns the first factor", 0, dev, 1e-12);
  }

  {
    double herm = 0.0, neg = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      MixedState s = random_mixed(modes, 4, 4, rng);
      herm = std::max(herm, hermiticity_defect(s));
      neg = std::max(neg, std::max(0.0, -min_eigenvalue(s)));
    }
    rec.push("density view hermitian", 0, herm, 1e-12);
    rec.push("density view positive semidefinite", 0, neg, opt.tol);
  }
}

void check_elements(Recorder& rec, const VerifyOptions& opt, std::mt19937& rng) {
  const std::vector<ModeId> two_beams = {mode_h("p"), mode_v("p"), mode_h("q"), mode_v("q")};

  {
    double dev = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      PureState in = random_pure(two_beams, 3, 4, rng);
      PureState back = pbs(pbs(in, "p", "q", "u", "w"), "u", "w", "p", "q");
      dev = std::max(dev, max_amp_diff(in, back));
    }
    rec.push("pbs applied twice is the identity", 0, dev, 1e-12);
  }

  {
    double dev = 0.0;
    std::uniform_real_distribution<double> angle(-3.0, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
      const double t = angle(rng);
      PureState in = random_pure({mode_h("p"), mode_v("p")}, 2, 3, rng);
      dev = std::max(dev, max_amp_diff(in, pol_rotation(pol_rotation(in, "p", t), "p", -t)));
    }
    rec.push("polarization rotation inverts with the opposite angle", 0, dev, 1e-12);
  }

  {
    PureState in = random_pure(two_beams, 3, 4, rng);
    rec.push("pauli-z is an involution", 0, max_amp_diff(in, pauli_z(pauli_z(in, "p"), "p")),
             1e-12);
  }

  {
    double dev = 0.0;
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      MixedState s = random_mixed(two_beams, 4, 3, rng);
      dev = std::max(dev, std::abs(loss_channel(s, "p", eta(rng)).trace() - s.trace()));
    }
    rec.push("loss channel preserves the trace", 0, dev, 1e-12);
  }

  {
    double dev = 0.0;
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      const double e1 = eta(rng), e2 = eta(rng);
      MixedState s = random_mixed(two_beams, 4, 3, rng);
      dev = std::max(dev, trace_distance(loss_channel(loss_channel(s, "p", e1), "p", e2),
                                         loss_channel(s, "p", e1 * e2)));
    }
    rec.push("loss channels compose multiplicatively", 8, dev, 1e-12);
  }
  (void)opt;
}

void check_sources(Recorder& rec, const VerifyOptions& opt, std::mt19937& rng) {
  std::uniform_real_distribution<double> rate(0.0, 0.85);

  {
    double dev = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      LossParams l{rate(rng), rate(rng), rate(rng)};
      LossParams back = loss_from_emission(emission_from_loss(l));
      dev = std::max({dev, std::abs(back.f_c - l.f_c), std::abs(back.f_a - l.f_a),
                      std::abs(back.f_b - l.f_b)});
      EmissionParams e = emission_from_loss(l);
      EmissionParams fwd = emission_from_loss(loss_from_emission(e));
      dev = std::max({dev, std::abs(fwd.eta_s - e.eta_s), std::abs(fwd.eta_a - e.eta_a),
                      std::abs(fwd.eta_b - e.eta_b)});
    }
    rec.push("source parameterizations round-trip", 0, dev, 1e-12);
  }

  {
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      LossParams l{rate(rng), rate(rng), rate(rng)};
      dev = std::max(dev, trace_distance(lossy_pair(emission_from_loss(l), "a", "b"),
                                         lossy_pair_via_channels(l, "a", "b")));
    }
    rec.push("pair source equals correlated split plus arm losses", 0, dev, 1e-12);
  }

  {
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      LossParams l{rate(rng), rate(rng), rate(rng)};
      dev = std::max(dev, std::abs(lossy_pair(emission_from_loss(l), "a", "b").trace() - 1.0));
    }
    rec.push("pair source has unit trace", 0, dev, 1e-12);
  }
  (void)opt;
}

void check_detection(Recorder& rec, const VerifyOptions& opt, std::mt19937& rng) {
  {
    double dev = 0.0;
    for (double eta : {0.0, 0.3, 0.5, 0.8, 1.0}) {
      dev = std::max(dev, povm_equivalence_check(kPhotonBudget, eta));
    }
    rec.push("on/off click probability matches the POVM closed form", 4, dev, 1e-12);
  }

  const std::vector<ModeId> modes = {mode_h("p"), mode_v("p"), mode_h("q")};
  {
    double dev = 0.0;
    std::uniform_real_distribution<double> eta(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      MixedState s = random_mixed(modes, 4, 3, rng);
      DetectorSpec d{"D", mode_h("p"), eta(rng)};
      auto all = measure_all_patterns(s, {d});
      double p_click = 0.0, p_off = 0.0;
      for (const auto& [mask, res] : all) (mask ? p_click : p_off) += res.prob;
      dev = std::max(dev, std::abs(p_click + p_off - 1.0));
      // dual route: POVM formula against the loss-then-projection pipeline
      dev = std::max(dev, std::abs(click_probability(s, d) - p_click));
    }
    rec.push("click and off outcomes are complete", 4, dev, 1e-12);
  }

  {
    double dev = 0.0;
    std::uniform_real_distribution<double> eta(0.1, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      MixedState s = random_mixed(modes, 4, 3, rng);
      std::vector<DetectorSpec> dets = {{"D0", mode_h("p"), eta(rng)},
                                        {"D1", mode_v("p"), eta(rng)},
                                        {"D2", mode_h("q"), eta(rng)}};
      auto all = measure_all_patterns(s, dets);
      double sum = 0.0, neg = 0.0;
      for (const auto& [mask, res] : all) {
        sum += res.prob;
        neg = std::max(neg, std::max(0.0, -min_eigenvalue(res.conditional)));
        dev = std::max(dev, std::abs(res.conditional.trace() - res.prob));
      }
      dev = std::max(dev, std::abs(sum - 1.0));
      dev = std::max(dev, neg);
    }
    rec.push("joint detector patterns partition probability", 0, dev, 1e-12);
  }
  (void)opt;
}

void check_step1(Recorder& rec, const VerifyOptions& opt) {
  const PureState ghz3 = ghz_state({"1a", "2a", "1d"});
  double dev_coeff = 0.0, dev_residual = 0.0;
  for (double es : {0.2, 0.5, 0.7}) {
    for (double ea : {0.0, 0.1, 0.2}) {
      for (double eb : {0.0, 0.1, 0.2}) {
        if (es + ea + eb > 1.0) continue;
        for (double ed : {0.6, 1.0}) {
          ProtocolConfig cfg{{es, ea, eb}, ed, opt.inject_pbs_phase};
          auto outcomes = step1_fuse(cfg, 0);
          MixedState summed;
          for (const auto& o : outcomes) {
            for (const auto& b : o.state.branches()) summed.add_branch(b.weight, b.state);
          }
          const double w_ghz = expectation(summed, ghz3);
          dev_coeff = std::max(dev_coeff, std::abs(w_ghz - 0.5 * es * es * ed));
          // three-photon survivors must be exactly the GHZ component
          dev_coeff = std::max(dev_coeff, std::abs(sector_weight(summed, 3) - w_ghz));

          double named = w_ghz;
          const double two_photon = 0.25 * es * eb * ed;
          for (const auto& beam : {"1a", "2a"}) {
            for (Pol pol : {Pol::H, Pol::V}) {
              OccupationState occ({{ModeId(beam, pol), 1}, {ModeId("1d", pol), 1}});
              const double w = diagonal_weight(summed, occ);
              dev_coeff = std::max(dev_coeff, std::abs(w - two_photon));
              named += w;
            }
          }
          const double one_photon = 0.25 * eb * eb * ed;
          for (Pol pol : {Pol::H, Pol::V}) {
            const double w = diagonal_weight(summed, OccupationState::single(ModeId("1d", pol)));
            dev_coeff = std::max(dev_coeff, std::abs(w - one_photon));
            named += w;
          }

          // everything else must carry no photon in the survivor beam
          double empty_1d = 0.0;
          for (const auto& b : summed.branches()) {
            for (const auto& [occ, a] : b.state.amplitudes()) {
              if (occ.count_spatial("1d") == 0) empty_1d += b.weight * std::norm(a);
            }
          }
          dev_residual = std::max(dev_residual, std::abs(summed.trace() - named - empty_1d));
        }
      }
    }
  }
  rec.push("step-1 heralded component weights match the source model", 1, dev_coeff, opt.tol);
  rec.push("step-1 residual weight confined to the empty survivor beam", 1, dev_residual,
           opt.tol);
}

void check_fusion_grid(Recorder& rec, const VerifyOptions& opt,
                       const std::vector<GridPoint>& grid) {
  double dev_form = 0.0, dev_eps = 0.0, dev_success = 0.0;
  std::map<std::pair<double, double>, std::pair<double, double>> eps_range;
  for (const auto& pt : grid) {
    dev_form = std::max(dev_form, pt.id_form_distance);
    dev_eps = std::max(dev_eps, std::abs(pt.epsilon_fit - id_loss_rate_formula(pt.e)));
    dev_success =
        std::max(dev_success, std::abs(pt.p_success - success_probability_formula(pt.e, pt.eta_d)));
    auto key = std::make_pair(pt.e.eta_s, pt.e.eta_b);
    auto it = eps_range.find(key);
    if (it == eps_range.end()) {
      eps_range[key] = {pt.epsilon_fit, pt.epsilon_fit};
    } else {
      it->second.first = std::min(it->second.first, pt.epsilon_fit);
      it->second.second = std::max(it->second.second, pt.epsilon_fit);
    }
  }
  rec.push("resource state matches the independent-loss form", 2, dev_form, opt.tol);
  rec.push("fitted loss rate matches eta_b/(eta_b+eta_s)", 2, dev_eps, opt.tol);

  double spread = 0.0;
  for (const auto& [key, range] : eps_range) spread = std::max(spread, range.second - range.first);
  // extra detector efficiencies at a fixed source
  {
    const PureState ghz4 = ghz_state(kGhzBeams);
    double lo = 1.0, hi = 0.0;
    for (double ed : {0.3, 0.6, 1.0}) {
      ProtocolConfig cfg{{0.5, 0.2, 0.1}, ed, opt.inject_pbs_phase};
      IdDecomposition dec = id_decompose(step2_fuse(cfg).normalized_rho(), ghz4);
      lo = std::min(lo, dec.epsilon);
      hi = std::max(hi, dec.epsilon);
    }
    spread = std::max(spread, hi - lo);
  }
  rec.push("fitted loss rate independent of eta_a and detector efficiency", 2, spread, opt.tol);

  rec.push("success probability matches the closed form on the grid", 3, dev_success, opt.tol);

  {
    ProtocolConfig cfg{{1.0, 0.0, 0.0}, 1.0, opt.inject_pbs_phase};
    rec.push("success probability is 1/8 at perfect parameters", 3,
             std::abs(step2_fuse(cfg).p_success - 0.125), 1e-12);
  }
}

void check_pure_heralding(Recorder& rec, const VerifyOptions& opt) {
  const PureState ghz4 = ghz_state(kGhzBeams);
  double dev = 0.0;
  for (double ea : {0.0, 0.2, 0.5}) {
    for (double ed : {0.4, 1.0}) {
      ProtocolConfig cfg{{1.0 - ea, ea, 0.0}, ed, opt.inject_pbs_phase};
      dev = std::max(dev, 1.0 - fidelity(step2_fuse(cfg).normalized_rho(), ghz4));
    }
  }
  rec.push("lossless a-arm heralds a pure GHZ state", 6, dev, opt.tol);
}

void check_loss_shift(Recorder& rec, const VerifyOptions& opt) {
  const PureState ghz4 = ghz_state(kGhzBeams);
  double dev = 0.0;
  const std::vector<std::pair<double, double>> pairs = {{0.1, 0.9}, {0.2, 0.8}, {0.3, 1.0}};
  for (const auto& [fa, ed] : pairs) {
    ProtocolConfig shifted{emission_from_loss({0.1, fa, 0.2}), ed, opt.inject_pbs_phase};
    const double ed_eff = (1.0 - fa) * ed;
    ProtocolConfig clean{emission_from_loss({0.1, 0.0, 0.2}), ed_eff, opt.inject_pbs_phase};

    FusionResult fus_shifted = step2_fuse(shifted);
    FusionResult fus_clean = step2_fuse(clean);
    const double eps_shifted = id_decompose(fus_shifted.normalized_rho(), ghz4).epsilon;
    const double eps_clean = id_decompose(fus_clean.normalized_rho(), ghz4).epsilon;

    dev = std::max(dev, std::abs(eps_shifted - fa));
    dev = std::max(dev, eps_clean);
    dev = std::max(dev, std::abs((1.0 - eps_shifted) * ed - (1.0 - eps_clean) * ed_eff));
    dev = std::max(dev,
                   std::abs(fus_clean.p_success - std::pow(1.0 - fa, 4) * fus_shifted.p_success));
  }
  rec.push("a-arm loss shifts onto the detector efficiency", 7, dev, opt.tol);
}

void check_herald_properties(Recorder& rec, const VerifyOptions& opt) {
  double dev_complete = 0.0, dev_psd = 0.0, dev_feedforward = 0.0;
  for (const EmissionParams& e :
       {EmissionParams{0.5, 0.2, 0.1}, EmissionParams{0.7, 0.0, 0.2}}) {
    for (double ed : {0.8, 1.0}) {
      ProtocolConfig cfg{e, ed, opt.inject_pbs_phase};

      for (int pair : {0, 1}) {
        auto [state, detectors] = step1_premeasure(cfg, pair);
        auto all = measure_all_patterns(state, detectors);
        double sum = 0.0;
        for (const auto& [mask, res] : all) {
          sum += res.prob;
          dev_psd = std::max(dev_psd, std::max(0.0, -min_eigenvalue(res.conditional)));
        }
        dev_complete = std::max(dev_complete, std::abs(sum - state.trace()));
      }

      auto side1 = step1_fuse(cfg, 0);
      auto side2 = step1_fuse(cfg, 1);
      for (const auto& o1 : side1) {
        for (const auto& o2 : side2) {
          MixedState joint = tensor(o1.state, o2.state);
          const double in_trace = joint.trace();
          joint = pbs(joint, "1d", "3d", "1e", "1f", cfg.pbs_reflection_phase);
          joint = pol_rotation(joint, "1e", -std::acos(-1.0) / 4.0);
          joint = pol_rotation(joint, "1f", -std::acos(-1.0) / 4.0);
          std::vector<DetectorSpec> dets = {{"D1e+", mode_h("1e"), ed},
                                            {"D1e-", mode_v("1e"), ed},
                                            {"D1f+", mode_h("1f"), ed},
                                            {"D1f-", mode_v("1f"), ed}};
          auto all = measure_all_patterns(joint, dets);
          double sum = 0.0;
          for (const auto& [mask, res] : all) sum += res.prob;
          dev_complete = std::max(dev_complete, std::abs(sum - in_trace));
        }
      }

      FusionResult fusion = step2_fuse(cfg);
      // Anchor to the all-plus conditional of the canonical (zero-phase)
      // convention: a uniform reflection phase cancels between patterns, so
      // comparing patterns only to each other could not catch an injected
      // convention fault.
      MixedState reference;
      if (cfg.pbs_reflection_phase == 0.0) {
        reference = fusion.patterns.front().state.normalized();
      } else {
        ProtocolConfig canonical = cfg;
        canonical.pbs_reflection_phase = 0.0;
        reference = step2_fuse(canonical).patterns.front().state.normalized();
      }
      for (const auto& o : fusion.patterns) {
        dev_psd = std::max(dev_psd, std::max(0.0, -min_eigenvalue(o.state)));
        if (o.prob < 1e-12) continue;
        dev_feedforward = std::max(dev_feedforward, trace_distance(reference, o.state.normalized()));
      }
    }
  }
  rec.push("herald pattern probabilities are complete", 8, dev_complete, 1e-12);
  rec.push("heralded conditional states are positive semidefinite", 8, dev_psd, opt.tol);
  rec.push("feedforward removes the herald pattern dependence", 8, dev_feedforward, opt.tol);
}

void check_permutation_symmetry(Recorder& rec, const VerifyOptions& opt) {
  double dev = 0.0;
  for (const EmissionParams& e :
       {EmissionParams{0.5, 0.2, 0.1}, EmissionParams{0.35, 0.05, 0.2}}) {
    ProtocolConfig cfg{e, 0.8, opt.inject_pbs_phase};
    MixedState rho = step2_fuse(cfg).normalized_rho();
    std::vector<std::string> perm = kGhzBeams;
    std::sort(perm.begin(), perm.end());
    do {
      std::map<std::string, std::string> renames;
      for (std::size_t i = 0; i < perm.size(); ++i) renames[kGhzBeams[i]] = perm[i];
      dev = std::max(dev, trace_distance(rho, relabel_spatial(rho, renames)));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  rec.push("resource state is permutation symmetric", 8, dev, opt.tol);
}

void check_reference_hierarchy(Recorder& rec) {
  const PureState ghz4 = ghz_state(kGhzBeams);
  const ReferenceStates refs = reference_states();
  double dev = 0.0;
  for (double eps : {0.2, 0.5}) {
    MixedState expected;
    expected.add_branch(std::pow(1.0 - eps, 4), ghz4);
    auto add_scaled = [&expected](const MixedState& part, double scale) {
      for (const auto& b : part.branches()) expected.add_branch(scale * b.weight, b.state);
    };
    add_scaled(refs.rho1, std::pow(1.0 - eps, 3) * eps);
    add_scaled(refs.rho2, std::pow(1.0 - eps, 2) * eps * eps);
    add_scaled(refs.rho3, (1.0 - eps) * std::pow(eps, 3));
    expected.add_branch(std::pow(eps, 4), PureState::vacuum());
    dev = std::max(dev, trace_distance(expected, id_loss(ghz4, eps)));
  }
  rec.push("independent loss reproduces the explicit loss hierarchy", 0, dev, 1e-12);
}

void check_id_fit_recovery(Recorder& rec) {
  const PureState ghz4 = ghz_state(kGhzBeams);
  IdDecomposition dec = id_decompose(id_loss(ghz4, 0.25), ghz4);
  const double dev = std::max(std::abs(dec.epsilon - 0.25), dec.residual);
  rec.push("loss-rate fit recovers a constructed loss rate", 0, dev, 1e-12);
}

void check_thresholds(Recorder& rec, std::mt19937& rng) {
  {
    double dev = 0.0;
    dev = std::max(dev, std::abs(*threshold_eta_d_min(0.0) - 0.5));
    dev = std::max(dev, std::abs(*threshold_eta_d_min(0.25) - 2.0 / 3.0));
    if (threshold_eta_d_min(0.5).has_value()) dev = std::max(dev, 1.0);
    if (threshold_eta_d_min(0.75).has_value()) dev = std::max(dev, 1.0);
    dev = std::max(dev, std::abs(*threshold_from_kappa(0.0) - 0.5));
    dev = std::max(dev, std::abs(*threshold_from_kappa(1.0 / 3.0) - 2.0 / 3.0));
    if (threshold_from_kappa(1.0).has_value()) dev = std::max(dev, 1.0);
    rec.push("threshold endpoints", 5, dev, 1e-12);
  }

  {
    double dev = 0.0;
    std::uniform_real_distribution<double> rate(0.0, 0.45);
    for (int trial = 0; trial < 40; ++trial) {
      LossParams l{rate(rng), rate(rng) * 2.0, rate(rng)};  // f_a up to 0.9
      EmissionParams e = emission_from_loss(l);
      auto from_kappa = threshold_from_kappa(e.eta_b / e.eta_s);
      auto from_fa = threshold_eta_d_min(l.f_a);
      if (from_kappa.has_value() != from_fa.has_value()) {
        dev = std::max(dev, 1.0);
      } else if (from_kappa) {
        dev = std::max(dev, std::abs(*from_kappa - *from_fa));
      }
    }
    rec.push("ratio form and loss-rate form of the threshold agree", 5, dev, 1e-12);
  }

  {
    double dev = 0.0;
    double prev = *threshold_eta_d_min(0.0);
    double prev_inc = 0.0;
    for (double fa = 0.01; fa < 0.5; fa += 0.01) {
      const double cur = *threshold_eta_d_min(fa);
      const double inc = cur - prev;
      if (inc <= 0.0) dev = std::max(dev, -inc + 1e-15);
      if (prev_inc > 0.0 && inc < prev_inc) dev = std::max(dev, prev_inc - inc);  // convexity
      prev_inc = inc;
      prev = cur;
    }
    dev = std::max(dev, std::max(0.0, 0.99999 - *threshold_eta_d_min(0.5 - 1e-6)));
    rec.push("threshold is increasing and convex up to one half", 0, dev, 1e-12);
  }
}

void check_sweep_slow_path(Recorder& rec, const VerifyOptions& opt) {
  SweepSpec spec;
  spec.slow_path = true;
  std::vector<SweepRow> rows = sweep(spec);
  double dev = 0.0;
  for (const auto& row : rows) {
    dev = std::max(dev, std::abs(row.sim_epsilon.value_or(1.0) - row.epsilon));
    dev = std::max(dev, row.sim_residual.value_or(1.0));
  }
  rec.push("slow-path simulated loss rate matches the fast path", 0, dev, opt.tol);
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Recorder rec;
  std::mt19937 rng(options.seed);

  check_fock_core(rec, options, rng);
  check_elements(rec, options, rng);
  check_sources(rec, options, rng);
  check_detection(rec, options, rng);

  check_step1(rec, options);
  auto grid = protocol_grid(options.inject_pbs_phase);
  check_fusion_grid(rec, options, grid);
  check_pure_heralding(rec, options);
  check_loss_shift(rec, options);
  check_herald_properties(rec, options);
  check_permutation_symmetry(rec, options);
  check_reference_hierarchy(rec);
  check_id_fit_recovery(rec);
  check_thresholds(rec, rng);
  check_sweep_slow_path(rec, options);

  return rec.results;
}

}  // namespace photonfuse
