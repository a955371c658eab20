// Copyright 2026 The cohdistill Authors
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

#pragma once

#include <cstddef>
#include <vector>

#include "cohdistill/states.hpp"

namespace cohdistill {

// Number of amplitudes with |phi_i|^2 > kZeroTol.
std::size_t coherence_rank(const PureStateVector& psi);

/// Suffix sums C_l = sum_{i >= l} |phi_i|^2 of the sorted squared moduli.
/// values[0] is C_1 (= 1 for a normalized state).
struct ClProfile {
  std::vector<double> values;
};

ClProfile cl_profile(const PureStateVector& psi);
ClProfile cl_profile(const ProbabilityVector& p);

/// p ≺ q: every descending partial sum of p is at most the matching partial
/// sum of q (within kStateTol). Shorter vectors are zero-padded.
bool majorized_by(const ProbabilityVector& p, const ProbabilityVector& q);

/// Kronecker product of two distributions, p-major order.
ProbabilityVector tensor(const ProbabilityVector& p, const ProbabilityVector& q);

/// Power mean (mean of p_i^alpha)^(1/alpha) over `dim` entries; p is
/// zero-padded to `dim`. alpha = 0 is the geometric mean, alpha = +/-inf the
/// max/min entry. Any zero entry forces the result to 0 for alpha <= 0; for
/// alpha > 0 zeros contribute nothing to the sum.
double power_mean(const ProbabilityVector& p, double alpha, std::size_t dim);
inline double power_mean(const ProbabilityVector& p, double alpha) {
  return power_mean(p, alpha, p.size());
}

/// Natural-log entropy with 0 ln 0 = 0.
double shannon_entropy(const ProbabilityVector& p);

/// min_l C_l(initial) / C_l(target) over the zero-padded sorted profiles.
///
/// Terms with C_l(target) <= kZeroTol impose no constraint; a vanishing
/// C_l(initial) against a nonzero C_l(target) makes the ratio 0. The value is
/// clamped to [0, 1]. `argmin` is the 1-based l attaining the minimum (the
/// smallest such l on ties).
struct ClRatio {
  double value = 1.0;
  std::size_t argmin = 1;
};

ClRatio min_cl_ratio(const ProbabilityVector& initial, const ProbabilityVector& target);

}  // namespace cohdistill
