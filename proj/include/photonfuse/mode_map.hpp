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

#ifndef PHOTONFUSE_MODE_MAP_HPP
#define PHOTONFUSE_MODE_MAP_HPP

#include <vector>

#include "photonfuse/fock.hpp"

namespace photonfuse {

/// Linear substitution of creation operators over a mode subset:
///   a†(inputs[i]) -> sum_j coeffs[i][j] a†(outputs[j]).
/// The coefficient matrix must be square and unitary; modes of a state that
/// are not listed as inputs pass through untouched (and must not collide
/// with an output).
struct ModeMap {
  std::vector<ModeId> inputs;
  std::vector<ModeId> outputs;
  std::vector<std::vector<Complex>> coeffs;  // coeffs[input][output]

  double unitarity_defect() const;
  void validate(double tol = kUnitaryTol) const;

  static ModeMap identity(const std::vector<ModeId>& modes);
  /// Pure relabeling inputs[i] -> outputs[i].
  static ModeMap permutation(const std::vector<ModeId>& from, const std::vector<ModeId>& to);
};

/// Fock-space action of the induced unitary: multinomial expansion of the
/// substituted creation operators on each basis element, with the bosonic
/// sqrt-factorial normalization. Preserves norm and total photon number.
PureState apply_mode_map_serial(const PureState& s, const ModeMap& map);

/// Same result computed with OpenMP over input terms; falls back to the
/// serial kernel below a small term-count cutoff. Output is deterministic
/// for a fixed thread count (per-thread partials merge in thread order).
PureState apply_mode_map(const PureState& s, const ModeMap& map);

MixedState apply_mode_map(const MixedState& s, const ModeMap& map);

}  // namespace photonfuse

#endif  // PHOTONFUSE_MODE_MAP_HPP
