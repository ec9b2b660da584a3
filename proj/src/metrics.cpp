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

#include "photonfuse/metrics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <stdexcept>

namespace photonfuse {

namespace {

std::map<OccupationState, std::size_t> basis_index(const std::vector<OccupationState>& basis) {
  std::map<OccupationState, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  return index;
}

std::vector<OccupationState> spanned_basis(const MixedState& s) {
  std::set<OccupationState> occs;
  for (const auto& b : s.branches()) {
    for (const auto& [occ, a] : b.state.amplitudes()) occs.insert(occ);
  }
  return {occs.begin(), occs.end()};
}

Eigen::MatrixXcd dense_on_basis(const MixedState& s, const std::vector<OccupationState>& basis,
                                const std::map<OccupationState, std::size_t>& index) {
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(basis.size(), basis.size());
  Eigen::VectorXcd v(basis.size());
  for (const auto& b : s.branches()) {
    v.setZero();
    for (const auto& [occ, a] : b.state.amplitudes()) v(index.at(occ)) = a;
    rho.noalias() += b.weight * v * v.adjoint();
  }
  return rho;
}

}  // namespace

DensityView density_view(const MixedState& s) {
  DensityView view;
  view.basis = spanned_basis(s);
  auto index = basis_index(view.basis);
  Eigen::MatrixXcd rho = dense_on_basis(s, view.basis, index);
  view.matrix.resize(view.basis.size() * view.basis.size());
  for (std::size_t r = 0; r < view.basis.size(); ++r) {
    for (std::size_t c = 0; c < view.basis.size(); ++c) view.matrix[r * view.basis.size() + c] = rho(r, c);
  }
  return view;
}

double expectation(const MixedState& rho, const PureState& psi) {
  double acc = 0.0;
  for (const auto& b : rho.branches()) {
    acc += b.weight * std::norm(psi.inner_product(b.state));
  }
  return acc;
}

double fidelity(const MixedState& rho, const PureState& target) {
  if (std::abs(rho.trace() - 1.0) > kNormTol) {
    throw std::invalid_argument("fidelity requires a normalized density operator");
  }
  if (!target.is_normalized()) {
    throw std::invalid_argument("fidelity requires a normalized target state");
  }
  return expectation(rho, target);
}

double trace_distance(const MixedState& a, const MixedState& b) {
  std::set<OccupationState> occs;
  for (const auto& s : {&a, &b}) {
    for (const auto& br : s->branches()) {
      for (const auto& [occ, amp] : br.state.amplitudes()) occs.insert(occ);
    }
  }
  std::vector<OccupationState> basis(occs.begin(), occs.end());
  if (basis.empty()) return 0.0;
  auto index = basis_index(basis);
  Eigen::MatrixXcd diff = dense_on_basis(a, basis, index) - dense_on_basis(b, basis, index);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const MixedState& s) {
  auto basis = spanned_basis(s);
  if (basis.empty()) return 0.0;
  auto index = basis_index(basis);
  Eigen::MatrixXcd rho = dense_on_basis(s, basis, index);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double hermiticity_defect(const MixedState& s) {
  DensityView view = density_view(s);
  double defect = 0.0;
  for (std::size_t r = 0; r < view.dim(); ++r) {
    for (std::size_t c = 0; c < view.dim(); ++c) {
      defect = std::max(defect, std::abs(view.at(r, c) - std::conj(view.at(c, r))));
    }
  }
  return defect;
}

double sector_weight(const MixedState& s, int total_photons) {
  double acc = 0.0;
  for (const auto& b : s.branches()) {
    for (const auto& [occ, a] : b.state.amplitudes()) {
      if (occ.total() == total_photons) acc += b.weight * std::norm(a);
    }
  }
  return acc;
}

double diagonal_weight(const MixedState& s, const OccupationState& occ) {
  double acc = 0.0;
  for (const auto& b : s.branches()) {
    acc += b.weight * std::norm(b.state.amplitude(occ));
  }
  return acc;
}

}  // namespace photonfuse
