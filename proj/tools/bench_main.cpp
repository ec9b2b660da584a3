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

// Timing harness for the two parallel kernels against their serial
// references: the mode-map expansion (OpenMP over amplitude terms) and the
// slow-path threshold sweep (OpenMP over grid points).

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "photonfuse/analysis.hpp"
#include "photonfuse/mode_map.hpp"

namespace {

using photonfuse::Complex;
using photonfuse::ModeId;
using photonfuse::ModeMap;
using photonfuse::OccupationState;
using photonfuse::PureState;

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

PureState random_state(const std::vector<ModeId>& modes, int photons, int terms,
                       std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
  PureState s;
  for (int t = 0; t < terms; ++t) {
    std::map<ModeId, int> counts;
    for (int p = 0; p < photons; ++p) counts[modes[pick(rng)]]++;
    s.add(OccupationState(counts), Complex(unif(rng), unif(rng)));
  }
  return s.normalized();
}

ModeMap random_rotation_ladder(const std::vector<ModeId>& modes, std::mt19937& rng) {
  // Product of Givens rotations over all mode pairs; dense enough to make
  // the expansion branch, cheap to build without a QR factorization.
  const std::size_t k = modes.size();
  std::vector<std::vector<Complex>> u(k, std::vector<Complex>(k, Complex(0, 0)));
  for (std::size_t i = 0; i < k; ++i) u[i][i] = 1.0;
  std::uniform_real_distribution<double> angle(0.1, 1.4);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      const double t = angle(rng);
      const double c = std::cos(t), sn = std::sin(t);
      for (std::size_t col = 0; col < k; ++col) {
        const Complex ua = u[a][col], ub = u[b][col];
        u[a][col] = c * ua + sn * ub;
        u[b][col] = -sn * ua + c * ub;
      }
    }
  }
  ModeMap m;
  m.inputs = modes;
  m.outputs = modes;
  m.coeffs = std::move(u);
  return m;
}

double max_diff(const PureState& a, const PureState& b) {
  double d = 0.0;
  for (const auto& [occ, amp] : a.amplitudes()) d = std::max(d, std::abs(amp - b.amplitude(occ)));
  for (const auto& [occ, amp] : b.amplitudes()) d = std::max(d, std::abs(amp - a.amplitude(occ)));
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"photonfuse-bench: serial versus OpenMP kernel timings"};
  int terms = 2000;
  int photons = 6;
  int repeats = 3;
  double sweep_stop = 0.48;
  double sweep_step = 0.02;
  app.add_option("--terms", terms, "amplitude terms in the benchmark state");
  app.add_option("--photons", photons, "photons per term (max 8)");
  app.add_option("--repeats", repeats, "timing repetitions");
  app.add_option("--sweep-stop", sweep_stop, "slow-path sweep upper bound");
  app.add_option("--sweep-step", sweep_step, "slow-path sweep step");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: disabled at build time\n");
#endif

  std::mt19937 rng(7);
  const std::vector<ModeId> modes = {photonfuse::mode_h("w"), photonfuse::mode_v("w"),
                                     photonfuse::mode_h("x"), photonfuse::mode_v("x"),
                                     photonfuse::mode_h("y"), photonfuse::mode_v("y")};
  PureState state = random_state(modes, photons, terms, rng);
  ModeMap map = random_rotation_ladder(modes, rng);

  std::printf("mode map expansion: %zu terms, %d photons\n", state.term_count(), photons);
  double best_serial = 1e300, best_parallel = 1e300;
  PureState out_serial, out_parallel;
  for (int r = 0; r < repeats; ++r) {
    double t0 = now_seconds();
    out_serial = photonfuse::apply_mode_map_serial(state, map);
    best_serial = std::min(best_serial, now_seconds() - t0);

    t0 = now_seconds();
    out_parallel = photonfuse::apply_mode_map(state, map);
    best_parallel = std::min(best_parallel, now_seconds() - t0);
  }
  std::printf("  serial:   %.4f s\n", best_serial);
  std::printf("  parallel: %.4f s  (speedup %.2fx)\n", best_parallel, best_serial / best_parallel);
  std::printf("  max amplitude deviation: %.3g\n", max_diff(out_serial, out_parallel));

  photonfuse::SweepSpec spec;
  spec.slow_path = true;
  spec.axes = {{photonfuse::SweepVar::FA, 0.0, sweep_stop, sweep_step}};
  const std::size_t rows = spec.axes[0].values().size();
  std::printf("slow-path sweep: %zu grid points\n", rows);

  double t0 = now_seconds();
  auto parallel_rows = photonfuse::sweep(spec);
  const double parallel_time = now_seconds() - t0;

#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  t0 = now_seconds();
  auto serial_rows = photonfuse::sweep(spec);
  const double serial_time = now_seconds() - t0;
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif

  double row_dev = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    row_dev = std::max(row_dev, std::abs(serial_rows[i].sim_epsilon.value_or(0.0) -
                                         parallel_rows[i].sim_epsilon.value_or(0.0)));
  }
  std::printf("  serial:   %.4f s\n", serial_time);
  std::printf("  parallel: %.4f s  (speedup %.2fx)\n", parallel_time, serial_time / parallel_time);
  std::printf("  max fitted-rate deviation: %.3g\n", row_dev);
  return 0;
}
