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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace cohdistill {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

// Absolute tolerance for Hermiticity, unit trace, unit norm and PSD checks.
inline constexpr double kStateTol = 1e-10;

// Squared moduli at or below this are treated as exact zeros.
inline constexpr double kZeroTol = 1e-12;

/// Nonnegative weights summing to one.
///
/// The stored order is the caller's order; `sorted()` gives the
/// nonincreasing view (stable with respect to the original index).
class ProbabilityVector {
 public:
  ProbabilityVector() = default;

  /// Throws Error{InvalidDistribution} on negative entries or a bad sum.
  explicit ProbabilityVector(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }

  ProbabilityVector sorted() const;

  /// Same vector with trailing zeros appended up to `dim` (no-op if already longer).
  ProbabilityVector padded(std::size_t dim) const;

 private:
  struct Unchecked {};
  ProbabilityVector(std::vector<double> weights, Unchecked) : weights_(std::move(weights)) {}

  friend ProbabilityVector tensor(const ProbabilityVector&, const ProbabilityVector&);
  friend class PureStateVector;

  std::vector<double> weights_;
};

/// Normalized amplitude vector in the incoherent basis.
class PureStateVector {
 public:
  PureStateVector() = default;

  /// Throws Error{NotNormalized} when | ||v||^2 - 1 | > kStateTol.
  explicit PureStateVector(Vector amplitudes);

  /// Normalizes first; throws Error{NotNormalized} on a zero vector.
  static PureStateVector normalized(Vector amplitudes);

  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }

  /// |phi_i|^2 in basis order.
  ProbabilityVector squared_moduli() const;

  /// |phi_i|^2 sorted nonincreasing; this is the vector majorization acts on.
  ProbabilityVector profile() const { return squared_moduli().sorted(); }

 private:
  Vector amplitudes_;
};

/// Validated density matrix: Hermitian, PSD and unit trace within kStateTol.
class DensityMatrix {
 public:
  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const Matrix& matrix() const noexcept { return rho_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return rho_(i, j); }

  static DensityMatrix from_pure(const PureStateVector& psi);

 private:
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
  friend DensityMatrix validate_density(const Matrix& raw);

  Matrix rho_;
};

/// Checks shape, Hermiticity, trace and positivity in that order.
/// Throws Error with NonSquare, NotHermitian, TraceNotOne or NotPSD; the NotPSD
/// message reports the minimum eigenvalue.
DensityMatrix validate_density(const Matrix& raw);

/// Delta(rho): keeps the diagonal, drops every coherence.
DensityMatrix dephase(const DensityMatrix& rho);

/// |rho| taken entrywise.
RealMatrix entrywise_abs(const DensityMatrix& rho);

/// True when every off-diagonal modulus is at most kStateTol.
bool is_incoherent(const DensityMatrix& rho);

}  // namespace cohdistill
