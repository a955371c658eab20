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

#include "cohdistill/distill.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"

namespace cohdistill {

namespace {

// Entries of the doubly stochastic matrix below this are treated as exhausted.
constexpr double kBirkhoffTol = 1e-14;

// Indices with |amplitude|^2 > kZeroTol, sorted by squared modulus descending
// (stable by index).
IndexSet sorted_support(const PureStateVector& psi, const IndexSet* restrict_to = nullptr) {
  IndexSet idx;
  if (restrict_to != nullptr) {
    for (std::size_t i : *restrict_to)
      if (std::norm(psi[static_cast<Eigen::Index>(i)]) > kZeroTol) idx.push_back(i);
    std::sort(idx.begin(), idx.end());
  } else {
    for (Eigen::Index i = 0; i < psi.dim(); ++i)
      if (std::norm(psi[i]) > kZeroTol) idx.push_back(static_cast<std::size_t>(i));
  }
  std::stable_sort(idx.begin(), idx.end(), [&psi](std::size_t a, std::size_t b) {
    return std::norm(psi[static_cast<Eigen::Index>(a)]) > std::norm(psi[static_cast<Eigen::Index>(b)]);
  });
  return idx;
}

void require_rank(std::size_t source_rank, std::size_t target_rank) {
  if (source_rank < target_rank) {
    std::ostringstream msg;
    msg << "source coherence rank " << source_rank << " < target rank " << target_rank;
    throw Error(Errc::RankDeficit, msg.str());
  }
}

// Level h with sum_i min(p_i, h) = total, for p sorted descending and
// total <= sum p. Returns p[0] when no capping is needed.
double water_level(const std::vector<double>& p, double total) {
  const std::size_t n = p.size();
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) tail[i] = tail[i + 1] + p[i];
  if (total >= tail[0]) return p[0];
  for (std::size_t capped = 1; capped <= n; ++capped) {
    const double h = (total - tail[capped]) / static_cast<double>(capped);
    const double next = capped < n ? p[capped] : 0.0;
    if (h >= next) return h;
  }
  return total / static_cast<double>(n);
}

// Doubly stochastic D with v = D w, for v ≺ w both sorted descending, built as
// a chain of T-transforms (each moves mass between one pair of coordinates).
Eigen::MatrixXd transfer_matrix(const std::vector<double>& v, std::vector<double> w) {
  const std::size_t n = v.size();
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double eps = 1e-15;
  for (std::size_t step = 0; step < 4 * n; ++step) {
    std::ptrdiff_t j = -1;
    for (std::size_t i = n; i-- > 0;) {
      if (w[i] > v[i] + eps) {
        j = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
    if (j < 0) break;
    std::ptrdiff_t k = -1;
    for (std::size_t i = static_cast<std::size_t>(j) + 1; i < n; ++i) {
      if (w[i] < v[i] - eps) {
        k = static_cast<std::ptrdiff_t>(i);
        break;
      }
    }
    if (k < 0) break;
    const double delta = std::min(w[j] - v[j], v[k] - w[k]);
    const double gap = w[j] - w[k];
    const double mix = delta / gap;  // weight of the swapped term
    // Row update of D for T = (1 - mix) I + mix Q_jk.
    const Eigen::RowVectorXd row_j = d.row(j);
    const Eigen::RowVectorXd row_k = d.row(k);
    d.row(j) = (1.0 - mix) * row_j + mix * row_k;
    d.row(k) = (1.0 - mix) * row_k + mix * row_j;
    const double wj = w[j];
    const double wk = w[k];
    w[j] = (1.0 - mix) * wj + mix * wk;
    w[k] = (1.0 - mix) * wk + mix * wj;
  }
  return d;
}

// Kuhn's augmenting-path matching restricted to entries >= threshold.
bool perfect_matching(const Eigen::MatrixXd& d, double threshold, std::vector<std::size_t>& row_to_col) {
  const auto n = static_cast<std::size_t>(d.rows());
  std::vector<std::ptrdiff_t> col_owner(n, -1);
  std::vector<char> seen(n);
  auto augment = [&](auto&& self, std::size_t row) -> bool {
    for (std::size_t c = 0; c < n; ++c) {
      if (d(row, c) < threshold || seen[c]) continue;
      seen[c] = 1;
      if (col_owner[c] < 0 || self(self, static_cast<std::size_t>(col_owner[c]))) {
        col_owner[c] = static_cast<std::ptrdiff_t>(row);
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, r)) return false;
  }
  row_to_col.assign(n, 0);
  for (std::size_t c = 0; c < n; ++c) row_to_col[static_cast<std::size_t>(col_owner[c])] = c;
  return true;
}

struct WeightedPermutation {
  double weight;
  std::vector<std::size_t> row_to_col;
};

// Birkhoff–von Neumann decomposition, taking the bottleneck-optimal
// permutation at every step.
std::vector<WeightedPermutation> birkhoff(Eigen::MatrixXd d) {
  std::vector<WeightedPermutation> out;
  const auto n = static_cast<std::size_t>(d.rows());
  for (std::size_t iter = 0; iter < n * n + 1; ++iter) {
    std::vector<double> levels;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (d.data()[i] > kBirkhoffTol) levels.push_back(d.data()[i]);
    if (levels.empty()) break;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::vector<std::size_t> match;
    if (!perfect_matching(d, levels.front(), match)) break;
    std::size_t lo = 0;
    std::size_t hi = levels.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi + 1) / 2;
      std::vector<std::size_t> trial;
      if (perfect_matching(d, levels[mid], trial)) {
        lo = mid;
        match = std::move(trial);
      } else {
        hi = mid - 1;
      }
    }
    double theta = 1.0;
    for (std::size_t r = 0; r < n; ++r) theta = std::min(theta, d(r, match[r]));
    for (std::size_t r = 0; r < n; ++r) d(r, match[r]) -= theta;
    out.push_back({theta, std::move(match)});
  }
  return out;
}

}  // namespace

double pmax_pure(const PureStateVector& psi, const PureStateVector& phi) {
  return min_cl_ratio(psi.squared_moduli(), phi.squared_moduli()).value;
}

bool is_strictly_incoherent(const Matrix& k) {
  for (Eigen::Index r = 0; r < k.rows(); ++r) {
    int count = 0;
    for (Eigen::Index c = 0; c < k.cols(); ++c)
      if (k(r, c) != Complex(0.0, 0.0)) ++count;
    if (count > 1) return false;
  }
  for (Eigen::Index c = 0; c < k.cols(); ++c) {
    int count = 0;
    for (Eigen::Index r = 0; r < k.rows(); ++r)
      if (k(r, c) != Complex(0.0, 0.0)) ++count;
    if (count > 1) return false;
  }
  return true;
}

StrictlyIncoherentKraus::StrictlyIncoherentKraus(Matrix k) : k_(std::move(k)) {
  if (!is_strictly_incoherent(k_))
    throw Error(Errc::NotStrictlyIncoherent, "a row or column holds more than one nonzero entry");
  for (Eigen::Index c = 0; c < k_.cols(); ++c) {
    for (Eigen::Index r = 0; r < k_.rows(); ++r) {
      if (k_(r, c) != Complex(0.0, 0.0)) {
        sources_.push_back(static_cast<std::size_t>(c));
        targets_.push_back(static_cast<std::size_t>(r));
      }
    }
  }
}

Matrix StrictlyIncoherentKraus::permutation_part() const {
  Matrix pi = Matrix::Zero(k_.rows(), k_.cols());
  for (std::size_t n = 0; n < sources_.size(); ++n) pi(targets_[n], sources_[n]) = 1.0;
  return pi;
}

Matrix StrictlyIncoherentKraus::diagonal_part() const {
  Matrix d = Matrix::Zero(k_.cols(), k_.cols());
  for (std::size_t n = 0; n < sources_.size(); ++n) d(sources_[n], sources_[n]) = k_(targets_[n], sources_[n]);
  return d;
}

Matrix StrictlyIncoherentKraus::projector_part() const {
  Matrix p = Matrix::Zero(k_.cols(), k_.cols());
  for (std::size_t s : sources_) p(s, s) = 1.0;
  return p;
}

StrictlyIncoherentKraus saturating_kraus(const PureStateVector& psi, const PureStateVector& phi,
                                         const IndexSet& support) {
  const IndexSet src = sorted_support(psi, &support);
  const IndexSet dst = sorted_support(phi);
  require_rank(src.size(), dst.size());
  std::vector<Complex> a(dst.size());
  double largest = 0.0;
  for (std::size_t r = 0; r < dst.size(); ++r) {
    a[r] = phi[static_cast<Eigen::Index>(dst[r])] / psi[static_cast<Eigen::Index>(src[r])];
    largest = std::max(largest, std::abs(a[r]));
  }
  Matrix k = Matrix::Zero(phi.dim(), psi.dim());
  for (std::size_t r = 0; r < dst.size(); ++r) k(dst[r], src[r]) = a[r] / largest;
  return StrictlyIncoherentKraus(std::move(k));
}

StrictlyIncoherentKraus saturating_kraus(const PureStateVector& psi, const PureStateVector& phi,
                                         const PureSubspace& subspace) {
  return saturating_kraus(psi, phi, subspace.indices);
}

std::vector<KrausBranch> optimal_protocol(const PureStateVector& psi, const PureStateVector& phi) {
  const IndexSet src = sorted_support(psi);
  const IndexSet dst = sorted_support(phi);
  require_rank(src.size(), dst.size());
  const double target_probability = pmax_pure(psi, phi);
  if (!(target_probability > 0.0)) return {};

  const std::size_t n = src.size();
  const std::size_t m = dst.size();
  std::vector<double> p(n);
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(psi[static_cast<Eigen::Index>(src[i])]);
  for (std::size_t j = 0; j < m; ++j) w[j] = target_probability * std::norm(phi[static_cast<Eigen::Index>(dst[j])]);

  // Capping p at the water level gives a vector v <= p that is majorized by
  // P * q, so v is a mixture of permutations of P * q.
  const double h = water_level(p, target_probability);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::min(p[i], h);

  const auto perms = birkhoff(transfer_matrix(v, w));

  // Permutations agreeing on the target support give the same Kraus shape.
  std::map<std::vector<std::size_t>, double> merged;
  std::vector<std::vector<std::size_t>> order;
  for (const auto& wp : perms) {
    std::vector<std::size_t> target_to_source(m);
    for (std::size_t i = 0; i < n; ++i)
      if (wp.row_to_col[i] < m) target_to_source[wp.row_to_col[i]] = i;
    auto [it, inserted] = merged.emplace(target_to_source, 0.0);
    if (inserted) order.push_back(target_to_source);
    it->second += wp.weight;
  }

  std::vector<Matrix> mats;
  for (const auto& shape : order) {
    const double scale = std::sqrt(target_probability * merged[shape]);
    Matrix k = Matrix::Zero(phi.dim(), psi.dim());
    for (std::size_t j = 0; j < m; ++j) {
      const auto s = static_cast<Eigen::Index>(src[shape[j]]);
      const auto t = static_cast<Eigen::Index>(dst[j]);
      k(t, s) = scale * phi[t] / psi[s];
    }
    mats.push_back(std::move(k));
  }

  // Clamp column loads to 1.
  Eigen::VectorXd column_load = Eigen::VectorXd::Zero(psi.dim());
  for (const auto& k : mats) column_load += k.colwise().squaredNorm().transpose();
  const double excess = column_load.size() > 0 ? column_load.maxCoeff() : 0.0;
  if (excess > 1.0)
    for (auto& k : mats) k /= std::sqrt(excess);

  std::vector<KrausBranch> out;
  out.reserve(mats.size());
  for (auto& k : mats) {
    const double prob = (k * psi.amplitudes()).squaredNorm();
    out.push_back({StrictlyIncoherentKraus(std::move(k)), prob});
  }
  return out;
}

DistillationPlan pmax_mixed(const DensityMatrix& rho, const PureStateVector& phi) {
  if (coherence_rank(phi) < 2)
    throw Error(Errc::TargetIncoherent, "target has coherence rank 1; conversion is free");
  DistillationPlan plan;
  plan.all_subspaces = maximal_pure_subspaces(rho);
  plan.family = select_disjoint_family(plan.all_subspaces, phi);
  const ProbabilityVector target_profile = phi.squared_moduli();
  for (const auto& member : plan.family.members) {
    const ClRatio ratio = min_cl_ratio(member.state.squared_moduli(), target_profile);
    plan.summaries.push_back({member.indices, member.weight, ratio.value, ratio.argmin, member.weight * ratio.value});
  }
  plan.p_max = plan.family.value;
  plan.overlap_changes_answer =
      plan.family.overlap_detected && std::abs(plan.family.unconstrained_value - plan.family.value) > 1e-12;
  return plan;
}

DistillationPlan full_plan(const DensityMatrix& rho, const PureStateVector& phi) {
  DistillationPlan plan = pmax_mixed(rho, phi);
  for (std::size_t mu = 0; mu < plan.family.members.size(); ++mu) {
    if (!(plan.summaries[mu].min_ratio > 0.0)) continue;
    const auto branches = optimal_protocol(plan.family.members[mu].state, phi);
    for (std::size_t b = 0; b < branches.size(); ++b) {
      const Matrix& k = branches[b].kraus.matrix();
      PlanBranch pb;
      pb.id = "b" + std::to_string(mu) + "." + std::to_string(b);
      pb.member = mu;
      pb.kraus = branches[b].kraus;
      pb.probability = (k * rho.matrix() * k.adjoint()).trace().real();
      plan.branches.push_back(std::move(pb));
    }
  }
  return plan;
}

double completeness_bound(const std::vector<Matrix>& kraus) {
  if (kraus.empty()) return 0.0;
  Matrix sum = Matrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) sum += k.adjoint() * k;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sum, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

Protocol to_protocol(const DistillationPlan& plan) {
  Protocol out;
  out.p_max = plan.p_max;
  for (const auto& b : plan.branches) out.branches.push_back({b.id, b.kraus.matrix(), b.probability});
  for (const auto& member : plan.family.members) out.family.push_back(member.indices);
  return out;
}

}  // namespace cohdistill
