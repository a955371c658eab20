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
#include <span>
#include <vector>

#include "cohdistill/states.hpp"

namespace cohdistill {

// "A_ij equals 1" test on the normalized coherence matrix.
inline constexpr double kUnitTol = 1e-9;
// Second eigenvalue bound for a normalized restriction to count as pure.
inline constexpr double kRankOneTol = 1e-9;
// Diagonal entries at or below this are outside the support.
inline constexpr double kSupportTol = 1e-14;
// Clique enumeration works on 64-bit vertex masks.
inline constexpr Eigen::Index kMaxCliqueDim = 64;

using IndexSet = std::vector<std::size_t>;

/// A = (Delta rho)^{-1/2} |rho| (Delta rho)^{-1/2}, with the pseudo-inverse
/// convention: rows and columns of unsupported indices are zero.
RealMatrix a_matrix(const DensityMatrix& rho);

/// Vertices are supported indices; i ~ j iff |A_ij - 1| <= kUnitTol.
struct CoherenceSupportGraph {
  std::size_t dim = 0;
  std::uint64_t vertices = 0;
  std::vector<std::uint64_t> adjacency;  // no self-loops stored

  bool has_vertex(std::size_t i) const { return (vertices >> i) & 1u; }
  bool has_edge(std::size_t i, std::size_t j) const { return (adjacency[i] >> j) & 1u; }
};

CoherenceSupportGraph support_graph(const DensityMatrix& rho);

/// Inclusion-maximal cliques (Bron–Kerbosch with Tomita pivoting). Each clique
/// is sorted ascending; the list is sorted by size descending, then lexicographically.
std::vector<IndexSet> maximal_cliques(const CoherenceSupportGraph& graph);

/// Index set on which rho restricts to a pure state.
struct PureSubspace {
  IndexSet indices;
  double weight = 0.0;    // Tr(P rho P)
  PureStateVector state;  // dominant eigenvector of P rho P / weight, full dimension
  std::size_t coherence_rank() const noexcept { return indices.size(); }
};

/// Builds the subspace record for `indices`: weight, normalized state (phase
/// fixed so the first nonzero amplitude is real positive) and the rank-one
/// confirmation. Throws Error{InconsistentSubspace} if the restriction is not pure.
PureSubspace extract_subspace(const DensityMatrix& rho, IndexSet indices);

/// All maximal pure coherent-state subspaces, ordered like `maximal_cliques`.
/// Throws Error{DegenerateState} when rho has no supported diagonal entry.
std::vector<PureSubspace> maximal_pure_subspaces(const DensityMatrix& rho);

/// Pairwise-disjoint selection from a subspace list.
struct DisjointFamily {
  std::vector<PureSubspace> members;
  std::vector<double> scores;   // per member, as supplied
  double total_weight = 0.0;    // sum of member weights
  double value = 0.0;           // sum of weight * score
  bool overlap_detected = false;
  double unconstrained_value = 0.0;  // the same sum over every input subspace
};

/// Exact branch-and-bound over disjoint sub-families maximizing
/// sum weight_mu * score_mu. Ties (within 1e-12) prefer the larger total
/// weight, then the lexicographically smallest list of index sets.
DisjointFamily select_disjoint_family(std::span<const PureSubspace> subspaces,
                                      std::span<const double> scores);

/// Scores each subspace by its pure-state conversion probability to `target`.
DisjointFamily select_disjoint_family(std::span<const PureSubspace> subspaces,
                                      const PureStateVector& target);

/// True iff some off-diagonal A entry equals 1, i.e. rho holds a rank-2 pure
/// coherent-state subspace and therefore some coherent state can be distilled.
bool has_rank2_subspace(const DensityMatrix& rho);

}  // namespace cohdistill
