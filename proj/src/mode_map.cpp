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

#include "photonfuse/mode_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace photonfuse {

namespace {

// Parallelizing tiny states costs more than it saves.
constexpr std::size_t kParallelTermCutoff = 64;

struct Expansion {
  const ModeMap* map;
  std::set<ModeId> output_set;
  std::vector<int> occupancy;        // photons per input mode for the current term
  std::vector<int> out_counts;       // accumulated photons per output mode
  PureState::AmplitudeMap* sink;
  OccupationState passthrough;

  void emit(Complex coeff) {
    std::map<ModeId, int> counts;
    for (const auto& [mode, n] : passthrough.entries()) counts[mode] = n;
    double fact = 1.0;
    for (std::size_t j = 0; j < out_counts.size(); ++j) {
      if (out_counts[j] == 0) continue;
      counts[map->outputs[j]] += out_counts[j];
      fact *= sqrt_factorial(out_counts[j]);
    }
    Complex amp = coeff * fact;
    OccupationState occ(counts);
    auto [it, inserted] = sink->emplace(occ, amp);
    if (!inserted) it->second += amp;
  }

  // Distribute the photons of input mode `i` over the outputs, then recurse.
  void expand_mode(std::size_t i, Complex coeff) {
    if (i == map->inputs.size()) {
      emit(coeff);
      return;
    }
    int n = occupancy[i];
    if (n == 0) {
      expand_mode(i + 1, coeff);
      return;
    }
    distribute(i, 0, n, coeff * sqrt_factorial(n));
  }

  // Choose k photons for output column j (skipping zero matrix entries),
  // carrying the multinomial 1/k! factors and the matrix-element powers.
  void distribute(std::size_t i, std::size_t j, int remaining, Complex coeff) {
    if (j == map->outputs.size()) {
      if (remaining == 0) expand_mode(i + 1, coeff);
      return;
    }
    const Complex u = map->coeffs[i][j];
    if (u == Complex(0.0, 0.0)) {
      distribute(i, j + 1, remaining, coeff);
      return;
    }
    Complex power(1.0, 0.0);
    for (int k = 0; k <= remaining; ++k) {
      out_counts[j] += (k > 0) ? 1 : 0;
      if (k > 0) power *= u;
      distribute(i, j + 1, remaining - k, coeff * power / factorial(k));
    }
    out_counts[j] -= remaining;  // undo all increments from this column
  }
};

void expand_term(const OccupationState& occ, Complex amp, const ModeMap& map,
                 const std::set<ModeId>& input_set, const std::set<ModeId>& output_set,
                 PureState::AmplitudeMap& sink) {
  Expansion ex;
  ex.map = &map;
  ex.sink = &sink;
  ex.passthrough = occ.without(input_set);
  for (const auto& [mode, n] : ex.passthrough.entries()) {
    if (output_set.count(mode)) {
      throw std::invalid_argument("mode map output " + mode.str() +
                                  " collides with an occupied passthrough mode");
    }
  }
  ex.occupancy.resize(map.inputs.size());
  for (std::size_t i = 0; i < map.inputs.size(); ++i) ex.occupancy[i] = occ.count(map.inputs[i]);
  ex.out_counts.assign(map.outputs.size(), 0);
  ex.expand_mode(0, amp);
}

PureState finalize(PureState::AmplitudeMap&& amps) {
  PureState out;
  for (auto& [occ, a] : amps) {
    if (std::abs(a) >= kAmplitudePrune) out.add(occ, a);
  }
  return out;
}

}  // namespace

double ModeMap::unitarity_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      Complex dot(0.0, 0.0);
      for (std::size_t k = 0; k < outputs.size(); ++k) dot += coeffs[i][k] * std::conj(coeffs[j][k]);
      Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      defect = std::max(defect, std::abs(dot - expect));
    }
  }
  return defect;
}

void ModeMap::validate(double tol) const {
  if (inputs.size() != outputs.size()) {
    throw std::invalid_argument("mode map must be square (inputs and outputs match in number)");
  }
  if (coeffs.size() != inputs.size()) throw std::invalid_argument("mode map coefficient rows mismatch");
  for (const auto& row : coeffs) {
    if (row.size() != outputs.size()) throw std::invalid_argument("mode map coefficient cols mismatch");
  }
  std::set<ModeId> in(inputs.begin(), inputs.end());
  if (in.size() != inputs.size()) throw std::invalid_argument("duplicate input mode in mode map");
  std::set<ModeId> out(outputs.begin(), outputs.end());
  if (out.size() != outputs.size()) throw std::invalid_argument("duplicate output mode in mode map");
  double defect = unitarity_defect();
  if (defect > tol) {
    throw std::invalid_argument("mode map is not unitary (defect " + std::to_string(defect) + ")");
  }
}

ModeMap ModeMap::identity(const std::vector<ModeId>& modes) {
  ModeMap m;
  m.inputs = modes;
  m.outputs = modes;
  m.coeffs.assign(modes.size(), std::vector<Complex>(modes.size(), Complex(0.0, 0.0)));
  for (std::size_t i = 0; i < modes.size(); ++i) m.coeffs[i][i] = Complex(1.0, 0.0);
  return m;
}

ModeMap ModeMap::permutation(const std::vector<ModeId>& from, const std::vector<ModeId>& to) {
  if (from.size() != to.size()) throw std::invalid_argument("permutation size mismatch");
  ModeMap m;
  m.inputs = from;
  m.outputs = to;
  m.coeffs.assign(from.size(), std::vector<Complex>(from.size(), Complex(0.0, 0.0)));
  for (std::size_t i = 0; i < from.size(); ++i) m.coeffs[i][i] = Complex(1.0, 0.0);
  return m;
}

PureState apply_mode_map_serial(const PureState& s, const ModeMap& map) {
  map.validate();
  std::set<ModeId> input_set(map.inputs.begin(), map.inputs.end());
  std::set<ModeId> output_set(map.outputs.begin(), map.outputs.end());
  PureState::AmplitudeMap sink;
  for (const auto& [occ, amp] : s.amplitudes()) {
    expand_term(occ, amp, map, input_set, output_set, sink);
  }
  return finalize(std::move(sink));
}

PureState apply_mode_map(const PureState& s, const ModeMap& map) {
#ifdef _OPENMP
  if (s.term_count() >= kParallelTermCutoff) {
    map.validate();
    std::set<ModeId> input_set(map.inputs.begin(), map.inputs.end());
    std::set<ModeId> output_set(map.outputs.begin(), map.outputs.end());

    std::vector<std::pair<const OccupationState*, Complex>> terms;
    terms.reserve(s.term_count());
    for (const auto& [occ, amp] : s.amplitudes()) terms.emplace_back(&occ, amp);

    const int threads = omp_get_max_threads();
    std::vector<PureState::AmplitudeMap> partial(threads);
    bool failed = false;
    std::string error;
#pragma omp parallel
    {
      const int t = omp_get_thread_num();
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(terms.size()); ++i) {
        try {
          expand_term(*terms[i].first, terms[i].second, map, input_set, output_set, partial[t]);
        } catch (const std::exception& e) {
#pragma omp critical
          {
            failed = true;
            error = e.what();
          }
        }
      }
    }
    if (failed) throw std::invalid_argument(error);

    // Merge in thread order so the accumulation order is reproducible.
    PureState::AmplitudeMap sink = std::move(partial[0]);
    for (int t = 1; t < threads; ++t) {
      for (auto& [occ, a] : partial[t]) {
        auto [it, inserted] = sink.emplace(occ, a);
        if (!inserted) it->second += a;
      }
    }
    return finalize(std::move(sink));
  }
#endif
  return apply_mode_map_serial(s, map);
}

MixedState apply_mode_map(const MixedState& s, const ModeMap& map) {
  map.validate();
  MixedState out;
  for (const auto& b : s.branches()) {
    out.add_branch(b.weight, apply_mode_map(b.state, map));
  }
  return out;
}

}  // namespace photonfuse
