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

#ifndef PHOTONFUSE_METRICS_HPP
#define PHOTONFUSE_METRICS_HPP

#include <vector>

#include "photonfuse/fock.hpp"

namespace photonfuse {

/// Dense density operator on the subspace actually spanned by a state's
/// branches. Materialized only for metrics and positivity checks; evolution
/// stays branch-wise.
struct DensityView {
  std::vector<OccupationState> basis;  // canonical order
  std::vector<Complex> matrix;         // row-major, basis.size()^2

  std::size_t dim() const { return basis.size(); }
  Complex at(std::size_t row, std::size_t col) const { return matrix[row * dim() + col]; }
};

DensityView density_view(const MixedState& s);

/// <psi| rho |psi> without any normalization requirement.
double expectation(const MixedState& rho, const PureState& psi);

/// <target| rho |target> for a normalized rho and target (enforced to kNormTol).
double fidelity(const MixedState& rho, const PureState& target);

/// (1/2) || a - b ||_1 over the joint spanned subspace.
double trace_distance(const MixedState& a, const MixedState& b);

double min_eigenvalue(const MixedState& s);

/// max_ij | rho_ij - conj(rho_ji) | of the density view.
double hermiticity_defect(const MixedState& s);

/// Trace restricted to basis states matching a photon-count predicate.
double sector_weight(const MixedState& s, int total_photons);

/// Diagonal element <occ| rho |occ>.
double diagonal_weight(const MixedState& s, const OccupationState& occ);

}  // namespace photonfuse

#endif  // PHOTONFUSE_METRICS_HPP
