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

#include "cohdistill/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"
#include "parallel.hpp"

namespace cohdistill {

namespace {

constexpr std::uint64_t kBlockShots = 65536;
constexpr double kFidelityTol = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

Complex random_phase(std::mt19937_64& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng)); }

bool restriction_is_pure(const DensityMatrix& rho, const IndexSet& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  if (n == 1) return true;
  Matrix block(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) block(a, b) = rho(idx[a], idx[b]);
  block /= block.trace().real();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(block, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(n - 2) <= kRankOneTol;
}

}  // namespace

std::vector<PureSubspace> brute_subspaces(const DensityMatrix& rho) {
  if (rho.dim() > kMaxBruteDim) {
    std::ostringstream msg;
    msg << "dimension " << rho.dim() << " exceeds " << kMaxBruteDim;
    throw Error(Errc::DimensionTooLarge, msg.str());
  }
  IndexSet support;
  for (Eigen::Index i = 0; i < rho.dim(); ++i)
    if (rho(i, i).real() > kSupportTol) support.push_back(static_cast<std::size_t>(i));
  if (support.empty()) throw Error(Errc::DegenerateState, "no supported diagonal entry");

  const std::size_t s = support.size();
  std::vector<std::uint32_t> pure;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << s); ++mask) {
    IndexSet idx;
    for (std::size_t b = 0; b < s; ++b)
      if ((mask >> b) & 1u) idx.push_back(support[b]);
    if (restriction_is_pure(rho, idx)) pure.push_back(mask);
  }
  std::vector<IndexSet> maximal;
  for (std::uint32_t m : pure) {
    const bool dominated = std::any_of(pure.begin(), pure.end(), [m](std::uint32_t o) { return o != m && (o & m) == m; });
    if (dominated) continue;
    IndexSet idx;
    for (std::size_t b = 0; b < s; ++b)
      if ((m >> b) & 1u) idx.push_back(support[b]);
    maximal.push_back(std::move(idx));
  }
  std::sort(maximal.begin(), maximal.end(), [](const IndexSet& a, const IndexSet& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  std::vector<PureSubspace> out;
  for (auto& idx : maximal) out.push_back(extract_subspace(rho, std::move(idx)));
  return out;
}

SimulationResult simulate(const Protocol& protocol, const DensityMatrix& rho, std::uint64_t shots,
                          std::uint64_t seed) {
  if (shots == 0) throw Error(Errc::InvalidArgument, "shots must be at least 1");
  std::vector<Matrix> kraus;
  for (const auto& b : protocol.branches) {
    if (b.kraus.cols() != rho.dim()) {
      std::ostringstream msg;
      msg << "branch " << b.id << " acts on dimension " << b.kraus.cols() << ", state has " << rho.dim();
      throw Error(Errc::InvalidArgument, msg.str());
    }
    kraus.push_back(b.kraus);
  }
  const double bound = completeness_bound(kraus);
  if (bound > 1.0 + 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "sum of K^dagger K has eigenvalue " << bound;
    throw Error(Errc::IncompletePlan, msg.str());
  }

  const std::size_t nb = kraus.size();
  std::vector<double> cumulative(nb);
  double acc = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    acc += std::max(0.0, (kraus[i] * rho.matrix() * kraus[i].adjoint()).trace().real());
    cumulative[i] = acc;
  }

  const std::uint64_t blocks = (shots + kBlockShots - 1) / kBlockShots;
  std::vector<std::vector<std::uint64_t>> counts(blocks, std::vector<std::uint64_t>(nb, 0));
  detail::parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
    const std::uint64_t begin = b * kBlockShots;
    const std::uint64_t end = std::min(shots, begin + kBlockShots);
    auto& local = counts[b];
    for (std::uint64_t shot = begin; shot < end; ++shot) {
      const double u = uniform01(rng);
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it != cumulative.end()) ++local[static_cast<std::size_t>(it - cumulative.begin())];
    }
  });

  SimulationResult result;
  result.shots = shots;
  result.seed = seed;
  for (std::size_t i = 0; i < nb; ++i) {
    std::uint64_t c = 0;
    for (const auto& block : counts) c += block[i];
    result.per_branch_counts[protocol.branches[i].id] += c;
    result.successes += c;
  }
  const double n = static_cast<double>(shots);
  result.empirical_probability = static_cast<double>(result.successes) / n;
  result.standard_error = std::sqrt(result.empirical_probability * (1.0 - result.empirical_probability) / n);
  return result;
}

BranchVerification verify_branch_outputs(const Protocol& protocol, const DensityMatrix& rho,
                                         const PureStateVector& phi) {
  BranchVerification out;
  for (const auto& b : protocol.branches) {
    if (b.kraus.cols() != rho.dim() || b.kraus.rows() != phi.dim()) {
      out.ok = false;
      out.offending_branch = b.id;
      out.worst_fidelity = 0.0;
      return out;
    }
    const Matrix sigma = b.kraus * rho.matrix() * b.kraus.adjoint();
    const double tr = sigma.trace().real();
    if (tr <= 1e-15) continue;
    const double fidelity = (phi.amplitudes().adjoint() * sigma * phi.amplitudes())(0, 0).real() / tr;
    out.worst_fidelity = std::min(out.worst_fidelity, fidelity);
    if (fidelity < 1.0 - kFidelityTol && out.ok) {
      out.ok = false;
      out.offending_branch = b.id;
    }
  }
  return out;
}

StructuredState random_structured_state(std::mt19937_64& rng, std::size_t dim) {
  const std::size_t components = 1 + static_cast<std::size_t>(rng() % std::min<std::size_t>(3, dim));
  std::vector<std::vector<std::size_t>> membership(dim);
  std::vector<double> noise(dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    const double roll = uniform01(rng);
    if (roll < 0.1 && dim > 1) continue;  // unsupported unless noise lands here
    membership[i].push_back(rng() % components);
    if (components > 1 && uniform01(rng) < 0.2) {
      const std::size_t other = rng() % components;
      if (other != membership[i][0]) membership[i].push_back(other);
    }
  }
  for (std::size_t i = 0; i < dim; ++i)
    if (uniform01(rng) < 0.25) noise[i] = uniform(rng, 0.05, 0.3);

  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < components; ++c) {
    Vector chi = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i)
      if (std::find(membership[i].begin(), membership[i].end(), c) != membership[i].end())
        chi(static_cast<Eigen::Index>(i)) = uniform(rng, 0.3, 1.0) * random_phase(rng);
    if (chi.squaredNorm() == 0.0) continue;
    chi.normalize();
    rho += uniform(rng, 0.2, 1.0) * chi * chi.adjoint();
  }
  for (std::size_t i = 0; i < dim; ++i) rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += noise[i];
  if (rho.trace().real() <= 0.0) rho(0, 0) = 1.0;
  rho /= rho.trace().real();

  StructuredState out{validate_density(rho), {}};
  for (std::size_t c = 0; c < components; ++c) {
    IndexSet block;
    for (std::size_t i = 0; i < dim; ++i)
      if (membership[i].size() == 1 && membership[i][0] == c && noise[i] == 0.0) block.push_back(i);
    if (block.size() >= 2) out.pure_blocks.push_back(std::move(block));
  }
  return out;
}

DensityMatrix random_undistillable_state(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> gauss;
  for (;;) {
    Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    const std::size_t components = 2 + rng() % 2;
    for (std::size_t c = 0; c < components; ++c) {
      Vector chi(static_cast<Eigen::Index>(dim));
      for (Eigen::Index i = 0; i < chi.size(); ++i) chi(i) = Complex(gauss(rng), gauss(rng));
      chi.normalize();
      rho += uniform(rng, 0.2, 1.0) * chi * chi.adjoint();
    }
    for (Eigen::Index i = 0; i < rho.rows(); ++i) rho(i, i) += uniform(rng, 0.02, 0.2);
    rho /= rho.trace().real();
    DensityMatrix out = validate_density(rho);
    RealMatrix a = a_matrix(out);
    a.diagonal().setZero();
    if (a.maxCoeff() <= 1.0 - 1e-3) return out;
  }
}

PureStateVector random_pure_state(std::mt19937_64& rng, std::size_t dim, std::size_t rank) {
  if (rank == 0 || rank > dim) throw Error(Errc::InvalidArgument, "rank must lie in [1, dim]");
  std::vector<std::size_t> idx(dim);
  for (std::size_t i = 0; i < dim; ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::normal_distribution<double> gauss;
  for (;;) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < rank; ++r) v(static_cast<Eigen::Index>(idx[r])) = Complex(gauss(rng), gauss(rng));
    const double norm2 = v.squaredNorm();
    bool tiny = false;
    for (std::size_t r = 0; r < rank; ++r) tiny = tiny || std::norm(v(static_cast<Eigen::Index>(idx[r]))) < 1e-6 * norm2;
    if (!tiny) return PureStateVector::normalized(std::move(v));
  }
}

}  // namespace cohdistill
