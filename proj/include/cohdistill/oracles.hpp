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
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cohdistill/distill.hpp"
#include "cohdistill/states.hpp"
#include "cohdistill/subspaces.hpp"

namespace cohdistill {

// Exhaustive enumeration visits 2^d subsets.
inline constexpr Eigen::Index kMaxBruteDim = 16;

/// Every index subset of the support whose normalized restriction has second
/// eigenvalue <= kRankOneTol, reduced to the inclusion-maximal ones. Same
/// ordering and record layout as maximal_pure_subspaces.
/// Throws Error{DimensionTooLarge} above kMaxBruteDim.
std::vector<PureSubspace> brute_subspaces(const DensityMatrix& rho);

struct SimulationResult {
  std::uint64_t shots = 0;
  std::uint64_t successes = 0;
  double empirical_probability = 0.0;
  double standard_error = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::uint64_t> per_branch_counts;
  std::string rng = "mt19937_64+splitmix64-blocks";
};

/// Samples the selective measurement {K_n} plus its failure complement.
/// Shots are processed in fixed blocks with derived seeds, so the result is
/// bit-identical for a given seed whatever the worker count
/// (COHDISTILL_WORKERS, default: hardware concurrency).
/// Throws Error{IncompletePlan} if sum K^dagger K exceeds I by more than 1e-9.
SimulationResult simulate(const Protocol& protocol, const DensityMatrix& rho, std::uint64_t shots,
                          std::uint64_t seed);

struct BranchVerification {
  bool ok = true;
  std::string offending_branch;  // empty when ok
  double worst_fidelity = 1.0;
};

/// Checks that every branch output K rho K^dagger is proportional to phi
/// (normalized fidelity >= 1 - 1e-9). Branches that never fire pass.
BranchVerification verify_branch_outputs(const Protocol& protocol, const DensityMatrix& rho,
                                         const PureStateVector& phi);

// ---------------------------------------------------------------------------
// Structured random states with known pure subspaces
// ---------------------------------------------------------------------------

struct StructuredState {
  DensityMatrix rho;
  std::vector<IndexSet> pure_blocks;  // ground-truth maximal subspaces of size >= 2
};

/// rho = sum_k w_k |chi_k><chi_k| + lambda * diag noise. Supports of the chi_k
/// may overlap; overlapping or noisy indices break purity, the rest form the
/// recorded blocks.
StructuredState random_structured_state(std::mt19937_64& rng, std::size_t dim);

/// Mixed state with no saturated coherence: every off-diagonal A entry is at
/// most 1 - 1e-3.
DensityMatrix random_undistillable_state(std::mt19937_64& rng, std::size_t dim);

/// Haar-like pure state supported on `rank` random indices of `dim`.
PureStateVector random_pure_state(std::mt19937_64& rng, std::size_t dim, std::size_t rank);

}  // namespace cohdistill
