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

#include "photonfuse/fock.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace photonfuse {

namespace {

constexpr int kFactorialTable = 2 * kPhotonBudget + 1;

const std::array<double, kFactorialTable>& factorials() {
  static const auto table = [] {
    std::array<double, kFactorialTable> t{};
    t[0] = 1.0;
    for (int n = 1; n < kFactorialTable; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

}  // namespace

double factorial(int n) {
  if (n < 0 || n >= kFactorialTable) throw std::invalid_argument("factorial: out of range");
  return factorials()[n];
}

double sqrt_factorial(int n) { return std::sqrt(factorial(n)); }

Pol parse_pol(const std::string& s) {
  if (s == "H") return Pol::H;
  if (s == "V") return Pol::V;
  throw std::invalid_argument("polarization must be 'H' or 'V', got '" + s + "'");
}

std::string to_string(Pol p) { return p == Pol::H ? "H" : "V"; }

// ---- OccupationState -------------------------------------------------------

OccupationState::OccupationState(const std::map<ModeId, int>& counts) {
  counts_.reserve(counts.size());
  for (const auto& [mode, n] : counts) {
    if (n < 0) throw std::invalid_argument("negative photon count in mode " + mode.str());
    if (n == 0) continue;
    counts_.emplace_back(mode, n);
    total_ += n;
  }
  if (total_ > kPhotonBudget) {
    throw std::invalid_argument("photon budget exceeded: " + std::to_string(total_) + " > " +
                                std::to_string(kPhotonBudget));
  }
}

int OccupationState::count(const ModeId& m) const {
  auto it = std::lower_bound(counts_.begin(), counts_.end(), m,
                             [](const Entry& e, const ModeId& k) { return e.first < k; });
  if (it != counts_.end() && it->first == m) return it->second;
  return 0;
}

OccupationState OccupationState::restricted_to(const std::set<ModeId>& modes) const {
  std::map<ModeId, int> kept;
  for (const auto& [mode, n] : counts_) {
    if (modes.count(mode)) kept[mode] = n;
  }
  return OccupationState(kept);
}

OccupationState OccupationState::without(const std::set<ModeId>& modes) const {
  std::map<ModeId, int> kept;
  for (const auto& [mode, n] : counts_) {
    if (!modes.count(mode)) kept[mode] = n;
  }
  return OccupationState(kept);
}

int OccupationState::count_spatial(const std::string& spatial) const {
  int n = 0;
  for (const auto& [mode, c] : counts_) {
    if (mode.spatial == spatial) n += c;
  }
  return n;
}

std::set<ModeId> OccupationState::modes() const {
  std::set<ModeId> out;
  for (const auto& [mode, n] : counts_) out.insert(mode);
  return out;
}

std::string OccupationState::str() const {
  std::string out;
  for (const auto& [mode, n] : counts_) {
    if (!out.empty()) out += ",";
    out += mode.str() + ":" + std::to_string(n);
  }
  return out;
}

OccupationState OccupationState::parse(const std::string& text) {
  if (text.empty() || text == "vac") return vacuum();
  std::map<ModeId, int> counts;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto dot = token.find('.');
    auto colon = token.find(':');
    if (dot == std::string::npos || colon == std::string::npos || colon < dot) {
      throw std::invalid_argument("malformed occupation token '" + token + "'");
    }
    ModeId mode(token.substr(0, dot), parse_pol(token.substr(dot + 1, colon - dot - 1)));
    int n = std::stoi(token.substr(colon + 1));
    if (n <= 0) throw std::invalid_argument("occupation token with non-positive count: " + token);
    if (!counts.emplace(mode, n).second) {
      throw std::invalid_argument("duplicate mode in occupation text: " + mode.str());
    }
  }
  return OccupationState(counts);
}

OccupationState merge_disjoint(const OccupationState& a, const OccupationState& b) {
  std::map<ModeId, int> counts;
  for (const auto& [mode, n] : a.entries()) counts[mode] = n;
  for (const auto& [mode, n] : b.entries()) {
    if (!counts.emplace(mode, n).second) {
      throw std::invalid_argument("mode sets overlap at " + mode.str());
    }
  }
  return OccupationState(counts);
}

// ---- PureState --------------------------------------------------------------

PureState PureState::vacuum() { return basis(OccupationState::vacuum()); }

PureState PureState::basis(const OccupationState& occ) {
  PureState s;
  s.amps_[occ] = Complex(1.0, 0.0);
  return s;
}

void PureState::add(const OccupationState& occ, Complex amp) {
  auto [it, inserted] = amps_.emplace(occ, amp);
  if (!inserted) it->second += amp;
}

Complex PureState::amplitude(const OccupationState& occ) const {
  auto it = amps_.find(occ);
  return it == amps_.end() ? Complex(0.0, 0.0) : it->second;
}

double PureState::norm_squared() const {
  double n2 = 0.0;
  for (const auto& [occ, a] : amps_) n2 += std::norm(a);
  return n2;
}

bool PureState::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) < tol; }

PureState PureState::normalized() const {
  double n2 = norm_squared();
  if (n2 <= 0.0) throw std::invalid_argument("cannot normalize a zero state");
  return scaled(1.0 / std::sqrt(n2));
}

PureState PureState::scaled(Complex factor) const {
  PureState out;
  for (const auto& [occ, a] : amps_) out.amps_[occ] = a * factor;
  return out;
}

PureState PureState::pruned(double threshold) const {
  PureState out;
  for (const auto& [occ, a] : amps_) {
    if (std::abs(a) >= threshold) out.amps_[occ] = a;
  }
  return out;
}

Complex PureState::inner_product(const PureState& other) const {
  // iterate the smaller map
  const PureState* small = this;
  const PureState* big = &other;
  bool conj_small = true;
  if (other.amps_.size() < amps_.size()) {
    small = &other;
    big = this;
    conj_small = false;
  }
  Complex acc(0.0, 0.0);
  for (const auto& [occ, a] : small->amps_) {
    auto it = big->amps_.find(occ);
    if (it == big->amps_.end()) continue;
    acc += conj_small ? std::conj(a) * it->second : std::conj(it->second) * a;
  }
  return acc;
}

std::set<ModeId> PureState::occupied_modes() const {
  std::set<ModeId> out;
  for (const auto& [occ, a] : amps_) {
    for (const auto& [mode, n] : occ.entries()) out.insert(mode);
  }
  return out;
}

std::string PureState::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [occ, a] : amps_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << a.real() << (a.imag() < 0 ? "" : "+") << a.imag() << "i)|"
       << (occ.is_vacuum() ? "vac" : occ.str()) << ">";
  }
  if (first) os << "0";
  return os.str();
}

// ---- MixedState --------------------------------------------------------------

MixedState MixedState::vacuum(double weight) {
  MixedState s;
  s.add_branch(weight, PureState::vacuum());
  return s;
}

MixedState MixedState::pure(const PureState& psi, double weight) {
  MixedState s;
  s.add(psi, weight);
  return s;
}

void MixedState::add_branch(double weight, const PureState& normalized_state) {
  if (weight < 0.0) throw std::invalid_argument("branch weight must be non-negative");
  if (weight < kWeightPrune) return;
  branches_.push_back({weight, normalized_state});
}

void MixedState::add(const PureState& psi, double weight) {
  double n2 = psi.norm_squared();
  double w = weight * n2;
  if (w < kWeightPrune) return;
  add_branch(w, psi.scaled(1.0 / std::sqrt(n2)));
}

double MixedState::trace() const {
  double t = 0.0;
  for (const auto& b : branches_) t += b.weight;
  return t;
}

MixedState MixedState::normalized() const {
  double t = trace();
  if (t <= 0.0) throw std::invalid_argument("cannot normalize a zero-trace state");
  MixedState out;
  for (const auto& b : branches_) out.branches_.push_back({b.weight / t, b.state});
  return out;
}

MixedState MixedState::pruned(double weight_threshold) const {
  MixedState out;
  for (const auto& b : branches_) {
    if (b.weight >= weight_threshold) out.branches_.push_back({b.weight, b.state.pruned()});
  }
  return out;
}

std::set<ModeId> MixedState::occupied_modes() const {
  std::set<ModeId> out;
  for (const auto& b : branches_) {
    auto m = b.state.occupied_modes();
    out.insert(m.begin(), m.end());
  }
  return out;
}

std::string MixedState::str() const {
  std::ostringstream os;
  for (const auto& b : branches_) {
    os << b.weight << " * [" << b.state.str() << "]\n";
  }
  return os.str();
}

// ---- composition and reduction ------------------------------------------------

PureState tensor(const PureState& a, const PureState& b) {
  PureState out;
  for (const auto& [oa, aa] : a.amplitudes()) {
    for (const auto& [ob, ab] : b.amplitudes()) {
      out.add(merge_disjoint(oa, ob), aa * ab);
    }
  }
  return out;
}

MixedState tensor(const MixedState& a, const MixedState& b) {
  {
    auto ma = a.occupied_modes();
    auto mb = b.occupied_modes();
    for (const auto& m : mb) {
      if (ma.count(m)) throw std::invalid_argument("tensor factors overlap at mode " + m.str());
    }
  }
  MixedState out;
  for (const auto& ba : a.branches()) {
    for (const auto& bb : b.branches()) {
      out.add_branch(ba.weight * bb.weight, tensor(ba.state, bb.state));
    }
  }
  return out;
}

MixedState partial_trace(const MixedState& s, const std::set<ModeId>& drop) {
  MixedState out;
  for (const auto& b : s.branches()) {
    // Group terms by their occupation on the dropped modes; cross terms
    // between different dropped occupations vanish under the trace.
    std::map<OccupationState, PureState> groups;
    for (const auto& [occ, amp] : b.state.amplitudes()) {
      groups[occ.restricted_to(drop)].add(occ.without(drop), amp);
    }
    for (const auto& [dropped_occ, kept] : groups) {
      out.add(kept, b.weight);
    }
  }
  return out.pruned();
}

MixedState trace_out_spatial(const MixedState& s, const std::vector<std::string>& spatials) {
  std::set<ModeId> drop;
  for (const auto& sp : spatials) {
    drop.insert(mode_h(sp));
    drop.insert(mode_v(sp));
  }
  return partial_trace(s, drop);
}

PureState relabel_spatial(const PureState& s, const std::map<std::string, std::string>& renames) {
  PureState out;
  for (const auto& [occ, amp] : s.amplitudes()) {
    std::map<ModeId, int> counts;
    for (const auto& [mode, n] : occ.entries()) {
      auto it = renames.find(mode.spatial);
      ModeId renamed = it == renames.end() ? mode : ModeId(it->second, mode.pol);
      if (!counts.emplace(renamed, n).second) {
        throw std::invalid_argument("relabeling collides at " + renamed.str());
      }
    }
    out.add(OccupationState(counts), amp);
  }
  return out;
}

MixedState relabel_spatial(const MixedState& s, const std::map<std::string, std::string>& renames) {
  MixedState out;
  for (const auto& b : s.branches()) {
    out.add_branch(b.weight, relabel_spatial(b.state, renames));
  }
  return out;
}

}  // namespace photonfuse
