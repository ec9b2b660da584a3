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

#ifndef PHOTONFUSE_FOCK_HPP
#define PHOTONFUSE_FOCK_HPP

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace photonfuse {

using Complex = std::complex<double>;

/// Hard cap on total photons per basis state. The four-pair-source circuit
/// holds at most 8 photons; exceeding the cap is an error, never truncation.
inline constexpr int kPhotonBudget = 8;

/// Amplitudes with modulus below this are dropped (exact-zero artifacts only).
inline constexpr double kAmplitudePrune = 1e-14;

/// Ensemble branches with weight below this are dropped.
inline constexpr double kWeightPrune = 1e-14;

/// Default absolute tolerance for normalization and comparison checks.
inline constexpr double kNormTol = 1e-9;

inline constexpr double kUnitaryTol = 1e-9;

double factorial(int n);       // exact for n <= 2*kPhotonBudget
double sqrt_factorial(int n);

enum class Pol : std::uint8_t { H = 0, V = 1 };

Pol parse_pol(const std::string& s);
std::string to_string(Pol p);

/// One optical mode: a spatial beam label plus a polarization.
/// The canonical order (lexicographic spatial, then H before V) fixes all
/// serialization and map iteration order.
struct ModeId {
  std::string spatial;
  Pol pol = Pol::H;

  ModeId() = default;
  ModeId(std::string s, Pol p) : spatial(std::move(s)), pol(p) {}

  std::strong_ordering operator<=>(const ModeId& o) const {
    if (auto c = spatial <=> o.spatial; c != 0) return c;
    return static_cast<int>(pol) <=> static_cast<int>(o.pol);
  }
  bool operator==(const ModeId&) const = default;

  std::string str() const { return spatial + "." + to_string(pol); }
};

inline ModeId mode_h(const std::string& spatial) { return {spatial, Pol::H}; }
inline ModeId mode_v(const std::string& spatial) { return {spatial, Pol::V}; }

/// A Fock basis element: photon counts per mode, stored sparsely in canonical
/// order with no zero entries. Total photon number is cached and bounded by
/// kPhotonBudget.
class OccupationState {
 public:
  using Entry = std::pair<ModeId, int>;

  OccupationState() = default;
  explicit OccupationState(const std::map<ModeId, int>& counts);

  static OccupationState vacuum() { return {}; }
  static OccupationState single(const ModeId& m) {
    return OccupationState(std::map<ModeId, int>{{m, 1}});
  }

  int count(const ModeId& m) const;
  int total() const { return total_; }
  bool is_vacuum() const { return counts_.empty(); }
  const std::vector<Entry>& entries() const { return counts_; }

  /// Counts restricted to `modes` / to everything else.
  OccupationState restricted_to(const std::set<ModeId>& modes) const;
  OccupationState without(const std::set<ModeId>& modes) const;

  /// Total photons whose mode satisfies the spatial-label predicate.
  int count_spatial(const std::string& spatial) const;

  std::set<ModeId> modes() const;

  std::strong_ordering operator<=>(const OccupationState& o) const {
    return counts_ <=> o.counts_;
  }
  bool operator==(const OccupationState&) const = default;

  /// Canonical text form: sorted "spatial.pol:count" tokens joined by commas,
  /// e.g. "1a.H:1,1d.V:2". Vacuum serializes to the empty string.
  std::string str() const;
  static OccupationState parse(const std::string& text);

 private:
  std::vector<Entry> counts_;  // sorted, strictly positive counts
  int total_ = 0;
};

/// Combine two occupation assignments on disjoint mode sets.
OccupationState merge_disjoint(const OccupationState& a, const OccupationState& b);

/// Sparse state vector: complex amplitude per occupation basis element.
/// Global phase is not canonicalized.
class PureState {
 public:
  using AmplitudeMap = std::map<OccupationState, Complex>;

  PureState() = default;

  static PureState vacuum();
  static PureState basis(const OccupationState& occ);

  void add(const OccupationState& occ, Complex amp);

  const AmplitudeMap& amplitudes() const { return amps_; }
  Complex amplitude(const OccupationState& occ) const;
  std::size_t term_count() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }

  double norm_squared() const;
  bool is_normalized(double tol = kNormTol) const;
  PureState normalized() const;  // throws on zero norm
  PureState scaled(Complex factor) const;
  PureState pruned(double threshold = kAmplitudePrune) const;

  /// <this|other>.
  Complex inner_product(const PureState& other) const;

  std::set<ModeId> occupied_modes() const;
  std::string str() const;

 private:
  AmplitudeMap amps_;
};

/// Weighted ensemble of normalized pure states. Weights are probabilities
/// and need not sum to one: a conditional (heralded) state carries its event
/// probability as its trace.
class MixedState {
 public:
  struct Branch {
    double weight;
    PureState state;  // normalized
  };

  MixedState() = default;

  static MixedState vacuum(double weight = 1.0);

  /// Wraps a (possibly unnormalized) pure state; its squared norm folds into
  /// the branch weight.
  static MixedState pure(const PureState& psi, double weight = 1.0);

  void add_branch(double weight, const PureState& normalized_state);
  /// add(), unlike add_branch(), accepts an unnormalized state.
  void add(const PureState& psi, double weight = 1.0);

  const std::vector<Branch>& branches() const { return branches_; }
  std::size_t branch_count() const { return branches_.size(); }
  double trace() const;
  MixedState normalized() const;  // throws on zero trace
  MixedState pruned(double weight_threshold = kWeightPrune) const;

  std::set<ModeId> occupied_modes() const;
  std::string str() const;

 private:
  std::vector<Branch> branches_;
};

// ---- composition and reduction -------------------------------------------

/// Tensor product of states on disjoint occupied-mode sets.
PureState tensor(const PureState& a, const PureState& b);
MixedState tensor(const MixedState& a, const MixedState& b);

/// Trace out the given modes. Each pure branch splits into one branch per
/// occupation pattern on the dropped modes; the trace is preserved.
MixedState partial_trace(const MixedState& s, const std::set<ModeId>& drop);

/// Trace out both polarization modes of each listed spatial label.
MixedState trace_out_spatial(const MixedState& s, const std::vector<std::string>& spatials);

/// Rename spatial labels (map is identity where a label is absent). The
/// renaming must stay injective on every term's occupied labels.
PureState relabel_spatial(const PureState& s, const std::map<std::string, std::string>& renames);
MixedState relabel_spatial(const MixedState& s, const std::map<std::string, std::string>& renames);

}  // namespace photonfuse

#endif  // PHOTONFUSE_FOCK_HPP
