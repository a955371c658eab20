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

#include "cohdistill/subspaces.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"

namespace cohdistill {

namespace {

constexpr double kTieTol = 1e-12;

std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }

IndexSet mask_to_indices(std::uint64_t mask) {
  IndexSet out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

bool clique_order(const IndexSet& a, const IndexSet& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  return a < b;
}

void bron_kerbosch(std::uint64_t r, std::uint64_t p, std::uint64_t x,
                   const std::vector<std::uint64_t>& adj, std::vector<std::uint64_t>& out) {
  if (p == 0 && x == 0) {
    out.push_back(r);
    return;
  }
  // Tomita pivot: the vertex of P | X with the most neighbours in P.
  std::uint64_t candidates = p | x;
  std::size_t pivot = static_cast<std::size_t>(std::countr_zero(candidates));
  int best = -1;
  for (std::uint64_t c = candidates; c != 0; c &= c - 1) {
    const auto u = static_cast<std::size_t>(std::countr_zero(c));
    const int reach = std::popcount(p & adj[u]);
    if (reach > best) {
      best = reach;
      pivot = u;
    }
  }
  for (std::uint64_t rest = p & ~adj[pivot]; rest != 0; rest &= rest - 1) {
    const auto v = static_cast<std::size_t>(std::countr_zero(rest));
    bron_kerbosch(r | bit(v), p & adj[v], x & adj[v], adj, out);
    p &= ~bit(v);
    x |= bit(v);
  }
}

std::uint64_t indices_to_mask(const IndexSet& indices) {
  std::uint64_t mask = 0;
  for (std::size_t i : indices) {
    if (i >= static_cast<std::size_t>(kMaxCliqueDim))
      throw Error(Errc::DimensionTooLarge, "index beyond 64 in disjoint-family search");
    mask |= bit(i);
  }
  return mask;
}

struct Candidate {
  double value = 0.0;
  double weight = 0.0;
  std::vector<std::size_t> chosen;  // positions into the subspace list
};

class FamilySearch {
 public:
  FamilySearch(std::span<const PureSubspace> subspaces, std::span<const double> scores)
      : subspaces_(subspaces) {
    const std::size_t m = subspaces.size();
    masks_.resize(m);
    value_.resize(m);
    weight_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      masks_[i] = indices_to_mask(subspaces[i].indices);
      value_[i] = subspaces[i].weight * scores[i];
      weight_[i] = subspaces[i].weight;
    }
    value_tail_.assign(m + 1, 0.0);
    weight_tail_.assign(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) {
      value_tail_[i] = value_tail_[i + 1] + value_[i];
      weight_tail_[i] = weight_tail_[i + 1] + weight_[i];
    }
  }

  Candidate run() {
    Candidate current;
    best_ = Candidate{};
    have_best_ = false;
    descend(0, 0, current);
    return best_;
  }

 private:
  // Family key: member index sets in lexicographic order.
  std::vector<IndexSet> key(const Candidate& c) const {
    std::vector<IndexSet> out;
    for (std::size_t i : c.chosen) out.push_back(subspaces_[i].indices);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool better(const Candidate& a, const Candidate& b) const {
    if (a.value > b.value + kTieTol) return true;
    if (a.value < b.value - kTieTol) return false;
    if (a.weight > b.weight + kTieTol) return true;
    if (a.weight < b.weight - kTieTol) return false;
    return key(a) < key(b);
  }

  void descend(std::size_t i, std::uint64_t used, Candidate& current) {
    if (have_best_) {
      const double value_bound = current.value + value_tail_[i];
      const double weight_bound = current.weight + weight_tail_[i];
      if (value_bound < best_.value - kTieTol) return;
      if (value_bound <= best_.value + kTieTol && weight_bound < best_.weight - kTieTol) return;
    }
    if (i == subspaces_.size()) {
      if (!have_best_ || better(current, best_)) {
        best_ = current;
        have_best_ = true;
      }
      return;
    }
    if ((used & masks_[i]) == 0) {
      current.chosen.push_back(i);
      current.value += value_[i];
      current.weight += weight_[i];
      descend(i + 1, used | masks_[i], current);
      current.weight -= weight_[i];
      current.value -= value_[i];
      current.chosen.pop_back();
    }
    descend(i + 1, used, current);
  }

  std::span<const PureSubspace> subspaces_;
  std::vector<std::uint64_t> masks_;
  std::vector<double> value_, weight_, value_tail_, weight_tail_;
  Candidate best_;
  bool have_best_ = false;
};

}  // namespace

RealMatrix a_matrix(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  Eigen::VectorXd inv_sqrt = Eigen::VectorXd::Zero(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const double rii = rho(i, i).real();
    if (rii > kSupportTol) inv_sqrt(i) = 1.0 / std::sqrt(rii);
  }
  return inv_sqrt.asDiagonal() * entrywise_abs(rho) * inv_sqrt.asDiagonal();
}

CoherenceSupportGraph support_graph(const DensityMatrix& rho) {
  if (rho.dim() > kMaxCliqueDim) {
    std::ostringstream msg;
    msg << "dimension " << rho.dim() << " exceeds " << kMaxCliqueDim;
    throw Error(Errc::DimensionTooLarge, msg.str());
  }
  const RealMatrix a = a_matrix(rho);
  CoherenceSupportGraph g;
  g.dim = static_cast<std::size_t>(rho.dim());
  g.adjacency.assign(g.dim, 0);
  for (std::size_t i = 0; i < g.dim; ++i)
    if (rho(i, i).real() > kSupportTol) g.vertices |= bit(i);
  for (std::size_t i = 0; i < g.dim; ++i) {
    if (!g.has_vertex(i)) continue;
    for (std::size_t j = i + 1; j < g.dim; ++j) {
      if (g.has_vertex(j) && std::abs(a(i, j) - 1.0) <= kUnitTol) {
        g.adjacency[i] |= bit(j);
        g.adjacency[j] |= bit(i);
      }
    }
  }
  return g;
}

std::vector<IndexSet> maximal_cliques(const CoherenceSupportGraph& graph) {
  std::vector<std::uint64_t> masks;
  if (graph.vertices != 0) bron_kerbosch(0, graph.vertices, 0, graph.adjacency, masks);
  std::vector<IndexSet> out;
  out.reserve(masks.size());
  for (std::uint64_t m : masks) out.push_back(mask_to_indices(m));
  std::sort(out.begin(), out.end(), clique_order);
  return out;
}

PureSubspace extract_subspace(const DensityMatrix& rho, IndexSet indices) {
  std::sort(indices.begin(), indices.end());
  const auto n = static_cast<Eigen::Index>(indices.size());
  if (n == 0) throw Error(Errc::InvalidArgument, "empty index set");
  Matrix block(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) block(a, b) = rho(indices[a], indices[b]);
  const double weight = block.trace().real();
  if (!(weight > kSupportTol)) throw Error(Errc::DegenerateState, "restriction has zero weight");
  block /= weight;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
  const auto& evals = solver.eigenvalues();
  if (n >= 2 && evals(n - 2) > kRankOneTol) {
    std::ostringstream msg;
    msg.precision(6);
    msg << "restriction to " << n << " indices has second eigenvalue " << evals(n - 2);
    throw Error(Errc::InconsistentSubspace, msg.str());
  }
  Vector local = solver.eigenvectors().col(n - 1);
  for (Eigen::Index a = 0; a < n; ++a) {
    if (std::norm(local(a)) > kZeroTol) {
      local *= std::conj(local(a)) / std::abs(local(a));
      local(a) = std::abs(local(a));
      break;
    }
  }
  Vector full = Vector::Zero(rho.dim());
  for (Eigen::Index a = 0; a < n; ++a) full(indices[a]) = local(a);

  PureSubspace out;
  out.indices = std::move(indices);
  out.weight = weight;
  out.state = PureStateVector::normalized(std::move(full));
  return out;
}

std::vector<PureSubspace> maximal_pure_subspaces(const DensityMatrix& rho) {
  const CoherenceSupportGraph graph = support_graph(rho);
  if (graph.vertices == 0) throw Error(Errc::DegenerateState, "no supported diagonal entry");
  std::vector<PureSubspace> out;
  for (IndexSet& clique : maximal_cliques(graph)) out.push_back(extract_subspace(rho, std::move(clique)));
  return out;
}

DisjointFamily select_disjoint_family(std::span<const PureSubspace> subspaces,
                                      std::span<const double> scores) {
  if (scores.size() != subspaces.size())
    throw Error(Errc::InvalidArgument, "one score per subspace required");

  DisjointFamily family;
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    family.unconstrained_value += subspaces[i].weight * scores[i];
    for (std::size_t j = i + 1; j < subspaces.size() && !family.overlap_detected; ++j) {
      const auto& a = subspaces[i].indices;
      const auto& b = subspaces[j].indices;
      family.overlap_detected = std::find_first_of(a.begin(), a.end(), b.begin(), b.end()) != a.end();
    }
  }

  const Candidate best = FamilySearch(subspaces, scores).run();
  for (std::size_t i : best.chosen) {
    family.members.push_back(subspaces[i]);
    family.scores.push_back(scores[i]);
    family.total_weight += subspaces[i].weight;
    family.value += subspaces[i].weight * scores[i];
  }
  return family;
}

DisjointFamily select_disjoint_family(std::span<const PureSubspace> subspaces,
                                      const PureStateVector& target) {
  const ProbabilityVector target_profile = target.squared_moduli();
  std::vector<double> scores;
  scores.reserve(subspaces.size());
  for (const auto& s : subspaces) scores.push_back(min_cl_ratio(s.state.squared_moduli(), target_profile).value);
  return select_disjoint_family(subspaces, scores);
}

bool has_rank2_subspace(const DensityMatrix& rho) {
  const CoherenceSupportGraph graph = support_graph(rho);
  return std::any_of(graph.adjacency.begin(), graph.adjacency.end(),
                     [](std::uint64_t row) { return row != 0; });
}

}  // namespace cohdistill
