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

#ifndef PHOTONFUSE_VERIFY_HPP
#define PHOTONFUSE_VERIFY_HPP

#include <string>
#include <vector>

namespace photonfuse {

/// Options for the self-verification suite.
struct VerifyOptions {
  /// Comparison tolerance for the checks whose contract is the default
  /// 1e-9; checks pinned at 1e-12 keep their own bound.
  double tol = 1e-9;

  /// Fault-injection hook: extra PBS reflection phase threaded into the
  /// protocol checks. Nonzero values must make the feedforward check fail.
  double inject_pbs_phase = 0.0;

  unsigned seed = 20260809;
};

struct CheckResult {
  std::string name;
  int criterion = 0;  // grouping tag for the acceptance suite; 0 = supplementary
  double deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Runs every module's property checks and the protocol-level equation
/// checks. Deterministic for a fixed seed.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace photonfuse

#endif  // PHOTONFUSE_VERIFY_HPP
