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
#include <optional>
#include <span>
#include <vector>

#include "cohdistill/distill.hpp"
#include "cohdistill/states.hpp"
#include "cohdistill/subspaces.hpp"

namespace cohdistill {

// A strict inequality counts as satisfied only above this margin.
inline constexpr double kGateTol = 1e-12;
// A catalyzed probability within this of 1 counts as deterministic.
inline constexpr double kDeterministicTol = 1e-9;

// ---------------------------------------------------------------------------
// Probabilistic enhancement gate
// ---------------------------------------------------------------------------

struct EnhancementCheck {
  IndexSet indices;
  double p_max = 0.0;  // pmax_pure(psi_mu, phi)
  double bound = 0.0;  // min{psi_n / phi_n, 1} on profiles padded to n = max(n1, n2)
  double margin = 0.0; // bound - p_max
  bool enhanceable = false;
};

struct ProbabilisticGate {
  std::vector<EnhancementCheck> cliques;  // every maximal subspace
  std::vector<EnhancementCheck> family;   // the selected disjoint family only
  bool verdict_cliques = false;
  bool verdict_family = false;
};

/// Some catalyst raises P_max(rho -> phi) iff some maximal-subspace state psi_mu
/// has pmax_pure(psi_mu, phi) < min{psi_n / phi_n, 1}.
/// Throws Error{TargetIncoherent} for rank-1 phi.
ProbabilisticGate gate_probabilistic(const DensityMatrix& rho, const PureStateVector& phi);

/// Same test on bare squared-amplitude profiles.
EnhancementCheck enhancement_check(const ProbabilityVector& initial, const ProbabilityVector& target);

// ---------------------------------------------------------------------------
// Deterministic catalysis gate
// ---------------------------------------------------------------------------

struct AlphaMargin {
  double alpha = 0.0;
  double margin = 0.0;  // oriented so that > 0 means the condition holds
};

struct CatalysisCheck {
  IndexSet indices;
  std::vector<AlphaMargin> margins;  // every sampled alpha, refinement included
  AlphaMargin worst_below_one;       // alpha in [-inf, 1)
  AlphaMargin worst_above_one;       // alpha in (1, +inf]
  double entropy_margin = 0.0;       // S(p) - S(q)
  bool zero_entry_support = false;   // p has a zero entry in the padded dimension
  bool passes = false;
};

struct DeterministicGate {
  double baseline = 0.0;
  std::vector<CatalysisCheck> members;
  bool weight_deficit = false;  // selected family does not carry all of rho's weight
  bool verdict = false;
  AlphaMargin worst;            // smallest margin over all members and alphas
};

/// `points` finite alphas split evenly over [-40,-0.01], [0.01,0.99] and
/// [1.01,40] (log-spaced in |alpha|), plus 0 and +/-infinity. Sorted ascending.
std::vector<double> default_alpha_grid(std::size_t points = 60);

/// Power-mean and entropy conditions on dephased profiles p, q padded to their
/// common dimension, refined around the minimum margin.
CatalysisCheck catalysis_check(const ProbabilityVector& initial, const ProbabilityVector& target,
                               std::span<const double> alpha_grid);

/// A catalyst making the conversion deterministic exists iff every member of
/// the family passes catalysis_check. Throws Error{TargetIncoherent} for rank-1
/// phi and Error{Precondition} when P_max(rho -> phi) is already 1.
DeterministicGate gate_deterministic(const DensityMatrix& rho, const PureStateVector& phi,
                                     std::span<const double> alpha_grid);

// ---------------------------------------------------------------------------
// Explicit catalyst search
// ---------------------------------------------------------------------------

enum class SearchMode { Probabilistic, Deterministic };

/// P_max(rho (x) c -> phi (x) c) for a pure catalyst with squared profile c,
/// using the product subspaces {(p_mu, psi_mu (x) c)}.
double catalyzed_pmax(std::span<const PureSubspace> subspaces, const PureStateVector& phi,
                      const ProbabilityVector& catalyst);

struct CatalystSearch {
  double baseline = 0.0;
  std::optional<ProbabilityVector> found;  // only when it beats the baseline
  double found_achieved = 0.0;
  ProbabilityVector best;  // best candidate examined, found or not
  double best_achieved = 0.0;
  std::vector<std::size_t> candidates_per_dim;  // index 0 is k = 2
  std::size_t evaluated = 0;
};

/// Sorted simplex-grid candidates c_1 >= ... >= c_k > 0 with entries on the
/// 1/round(1/grid_step) lattice, for k = 2..max_dim. Order: k ascending, then
/// lexicographically descending.
std::vector<ProbabilityVector> catalyst_grid(std::size_t max_dim, double grid_step);

/// Throws Error{InvalidArgument} on max_dim < 2 or grid_step outside (0, 0.5],
/// Error{Precondition} in deterministic mode when P_max is already 1.
CatalystSearch search_catalyst(const DensityMatrix& rho, const PureStateVector& phi,
                               std::size_t max_dim, double grid_step, SearchMode mode);

/// The combined outcome reported by the CLI.
struct CatalystReport {
  double baseline = 0.0;
  std::optional<ProbabilisticGate> probabilistic;
  std::optional<DeterministicGate> deterministic;
  std::optional<CatalystSearch> search;
};

}  // namespace cohdistill
