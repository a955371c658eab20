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

#include "cohdistill/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cohdistill/error.hpp"

namespace cohdistill {

ProbabilityVector::ProbabilityVector(std::vector<double> weights) : weights_(std::move(weights)) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      std::ostringstream msg;
      msg << "entry " << i << " is " << w;
      throw Error(Errc::InvalidDistribution, msg.str());
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << sum;
    throw Error(Errc::InvalidDistribution, msg.str());
  }
}

ProbabilityVector ProbabilityVector::sorted() const {
  std::vector<std::size_t> order(weights_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [this](std::size_t a, std::size_t b) { return weights_[a] > weights_[b]; });
  std::vector<double> out;
  out.reserve(order.size());
  for (std::size_t i : order) out.push_back(weights_[i]);
  return ProbabilityVector(std::move(out), Unchecked{});
}

ProbabilityVector ProbabilityVector::padded(std::size_t dim) const {
  std::vector<double> out = weights_;
  if (out.size() < dim) out.resize(dim, 0.0);
  return ProbabilityVector(std::move(out), Unchecked{});
}

PureStateVector::PureStateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(Errc::NotNormalized, "empty amplitude vector");
  const double norm2 = amplitudes_.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "squared norm is " << norm2;
    throw Error(Errc::NotNormalized, msg.str());
  }
}

PureStateVector PureStateVector::normalized(Vector amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw Error(Errc::NotNormalized, "zero vector");
  amplitudes /= norm;
  return PureStateVector(std::move(amplitudes));
}

ProbabilityVector PureStateVector::squared_moduli() const {
  std::vector<double> out(static_cast<std::size_t>(amplitudes_.size()));
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) out[i] = std::norm(amplitudes_(i));
  return ProbabilityVector(std::move(out), ProbabilityVector::Unchecked{});
}

DensityMatrix DensityMatrix::from_pure(const PureStateVector& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix validate_density(const Matrix& raw) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    std::ostringstream msg;
    msg << "matrix is " << raw.rows() << "x" << raw.cols();
    throw Error(Errc::NonSquare, msg.str());
  }
  if (!raw.allFinite()) throw Error(Errc::NotHermitian, "non-finite entry");
  const Eigen::Index d = raw.rows();
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      if (std::abs(raw(i, j) - std::conj(raw(j, i))) > kStateTol) {
        std::ostringstream msg;
        msg << "entry (" << i << "," << j << ") differs from conj of (" << j << "," << i << ")";
        throw Error(Errc::NotHermitian, msg.str());
      }
    }
  }
  const Complex trace = raw.trace();
  if (std::abs(trace - 1.0) > kStateTol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trace is " << trace.real();
    throw Error(Errc::TraceNotOne, msg.str());
  }
  Matrix rho = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kStateTol) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "minimum eigenvalue " << min_eig;
    throw Error(Errc::NotPSD, msg.str());
  }
  return DensityMatrix(std::move(rho));
}

DensityMatrix dephase(const DensityMatrix& rho) {
  Matrix diag = Matrix::Zero(rho.dim(), rho.dim());
  diag.diagonal() = rho.matrix().diagonal();
  return validate_density(diag);
}

RealMatrix entrywise_abs(const DensityMatrix& rho) { return rho.matrix().cwiseAbs(); }

bool is_incoherent(const DensityMatrix& rho) {
  const Eigen::Index d = rho.dim();
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j && std::abs(rho(i, j)) > kStateTol) return false;
  return true;
}

}  // namespace cohdistill
