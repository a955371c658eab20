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

#include <cmath>
#include <initializer_list>
#include <vector>

#include "cohdistill/states.hpp"
#include "cohdistill/subspaces.hpp"

namespace cohdistill::testing {

// Real positive amplitudes sqrt(w_i).
inline PureStateVector from_profile(std::initializer_list<double> squared) {
  Vector v(static_cast<Eigen::Index>(squared.size()));
  Eigen::Index i = 0;
  for (double w : squared) v(i++) = std::sqrt(w);
  return PureStateVector::normalized(std::move(v));
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

// Direct sum of weighted blocks: block k occupies the next block.size() indices.
inline DensityMatrix block_diagonal(const std::vector<std::pair<double, Matrix>>& blocks) {
  Eigen::Index d = 0;
  for (const auto& [w, m] : blocks) d += m.rows();
  Matrix rho = Matrix::Zero(d, d);
  Eigen::Index offset = 0;
  for (const auto& [w, m] : blocks) {
    rho.block(offset, offset, m.rows(), m.cols()) = w * m;
    offset += m.rows();
  }
  return validate_density(rho);
}

inline Matrix pure_block(std::initializer_list<double> squared) {
  return projector(from_profile(squared).amplitudes());
}

// 0.6 * pure(0.5, 0.5) on {0,1} (+) 0.4 * pure(0.3, 0.7, with a phase) on {2,3}.
inline DensityMatrix two_block_state() {
  Vector b(2);
  b << std::sqrt(0.3), std::polar(std::sqrt(0.7), 1.1);
  return block_diagonal({{0.6, pure_block({0.5, 0.5})}, {0.4, projector(b)}});
}

inline std::vector<IndexSet> index_sets(const std::vector<PureSubspace>& subs) {
  std::vector<IndexSet> out;
  for (const auto& s : subs) out.push_back(s.indices);
  return out;
}

}  // namespace cohdistill::testing
