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
#include <string>
#include <vector>

#include "cohdistill/states.hpp"
#include "cohdistill/subspaces.hpp"

namespace cohdistill {

/// Maximal probability of converting pure psi into pure phi under stochastic
/// strictly incoherent operations: min_l C_l(psi) / C_l(phi).
double pmax_pure(const PureStateVector& psi, const PureStateVector& phi);

/// True iff every row and every column of `k` holds at most one nonzero entry.
bool is_strictly_incoherent(const Matrix& k);

/// A strictly incoherent Kraus operator together with its factorization
/// K = Pi * D * P: P projects onto the used source indices, D is diagonal on
/// them, and Pi is a partial permutation sending each used source index to its
/// target row.
class StrictlyIncoherentKraus {
 public:
  StrictlyIncoherentKraus() = default;

  /// Throws Error{NotStrictlyIncoherent} if a row or column has two nonzeros.
  explicit StrictlyIncoherentKraus(Matrix k);

  const Matrix& matrix() const noexcept { return k_; }
  Eigen::Index rows() const noexcept { return k_.rows(); }
  Eigen::Index cols() const noexcept { return k_.cols(); }

  /// Source column indices carrying a nonzero entry, ascending.
  const IndexSet& sources() const noexcept { return sources_; }
  /// Row hit by each entry of sources().
  const IndexSet& targets() const noexcept { return targets_; }

  Matrix permutation_part() const;  // rows() x cols(), 0/1 partial permutation
  Matrix diagonal_part() const;     // cols() x cols()
  Matrix projector_part() const;    // cols() x cols()

 private:
  Matrix k_;
  IndexSet sources_;
  IndexSet targets_;
};

/// The single-operator construction K = k diag(a) U^T P with a_r = phi_r / psi_r
/// on aligned sorted supports and |k| = 1 / max_r |a_r|. Applied to psi it
/// yields k * phi, so its success probability is min_r |psi_r|^2 / |phi_r|^2.
/// `support` selects the source indices; psi must vanish outside them.
/// Throws Error{RankDeficit} when psi has fewer nonzero amplitudes than phi.
StrictlyIncoherentKraus saturating_kraus(const PureStateVector& psi, const PureStateVector& phi,
                                         const IndexSet& support);
StrictlyIncoherentKraus saturating_kraus(const PureStateVector& psi, const PureStateVector& phi,
                                         const PureSubspace& subspace);

struct KrausBranch {
  StrictlyIncoherentKraus kraus;
  double probability = 0.0;  // ||K psi||^2
};

/// Multi-branch protocol reaching pmax_pure(psi, phi) exactly. Every branch
/// maps psi to a multiple of phi and sum_n K_n^dagger K_n <= I.
/// Throws Error{RankDeficit} as saturating_kraus does.
std::vector<KrausBranch> optimal_protocol(const PureStateVector& psi, const PureStateVector& phi);

struct BranchSummary {
  IndexSet indices;
  double weight = 0.0;     // p_mu
  double min_ratio = 0.0;  // pmax_pure(psi_mu, phi)
  std::size_t argmin_l = 1;
  double achieved = 0.0;   // weight * min_ratio
};

struct PlanBranch {
  std::string id;          // "b<member>.<k>"
  std::size_t member = 0;  // index into family.members
  StrictlyIncoherentKraus kraus;
  double probability = 0.0;  // Tr(K rho K^dagger)
};

struct DistillationPlan {
  DisjointFamily family;
  std::vector<PureSubspace> all_subspaces;
  std::vector<BranchSummary> summaries;
  std::vector<PlanBranch> branches;  // empty for pmax_mixed
  double p_max = 0.0;
  // Overlapping maximal subspaces changed the optimum relative to summing all.
  bool overlap_changes_answer = false;
};

/// Maximal distillation probability sum_mu p_mu min_l C_l(psi_mu)/C_l(phi) over
/// the best disjoint family, with a per-member breakdown (no Kraus synthesis).
/// Throws Error{TargetIncoherent} when phi has coherence rank 1.
DistillationPlan pmax_mixed(const DensityMatrix& rho, const PureStateVector& phi);

/// pmax_mixed plus an explicit protocol: each member's optimal_protocol
/// restricted to its projector.
DistillationPlan full_plan(const DensityMatrix& rho, const PureStateVector& phi);

/// Largest eigenvalue of sum_n K_n^dagger K_n (the operator is diagonal for
/// strictly incoherent branches but this does not rely on it).
double completeness_bound(const std::vector<Matrix>& kraus);

/// Serializable view of a plan: bare Kraus matrices with labels.
struct ProtocolBranch {
  std::string id;
  Matrix kraus;
  double probability = 0.0;
};

struct Protocol {
  std::vector<ProtocolBranch> branches;
  double p_max = 0.0;
  std::vector<IndexSet> family;
};

Protocol to_protocol(const DistillationPlan& plan);

}  // namespace cohdistill
