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

#include "cohdistill/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cohdistill {

namespace {

// Suffix sums accumulated from the smallest entry upwards.
std::vector<double> suffix_sums(const std::vector<double>& sorted) {
  std::vector<double> out(sorted.size());
  double acc = 0.0;
  for (std::size_t i = sorted.size(); i-- > 0;) {
    acc += sorted[i];
    out[i] = acc;
  }
  return out;
}

}  // namespace

std::size_t coherence_rank(const PureStateVector& psi) {
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i)
    if (std::norm(psi[i]) > kZeroTol) ++rank;
  return rank;
}

ClProfile cl_profile(const ProbabilityVector& p) { return {suffix_sums(p.sorted().weights())}; }

ClProfile cl_profile(const PureStateVector& psi) { return cl_profile(psi.squared_moduli()); }

bool majorized_by(const ProbabilityVector& p, const ProbabilityVector& q) {
  const std::size_t n = std::max(p.size(), q.size());
  const auto ps = p.padded(n).sorted().weights();
  const auto qs = q.padded(n).sorted().weights();
  double sp = 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sp += ps[i];
    sq += qs[i];
    if (sp > sq + kStateTol) return false;
  }
  return true;
}

ProbabilityVector tensor(const ProbabilityVector& p, const ProbabilityVector& q) {
  std::vector<double> out;
  out.reserve(p.size() * q.size());
  for (double a : p.weights())
    for (double b : q.weights()) out.push_back(a * b);
  return ProbabilityVector(std::move(out), ProbabilityVector::Unchecked{});
}

double power_mean(const ProbabilityVector& p, double alpha, std::size_t dim) {
  const std::size_t n = std::max(dim, p.size());
  if (n == 0) return 0.0;
  const auto& w = p.weights();
  const bool has_zero = n > w.size() || std::any_of(w.begin(), w.end(), [](double x) { return x <= 0.0; });

  if (std::isinf(alpha)) {
    if (alpha > 0) return *std::max_element(w.begin(), w.end());
    return has_zero ? 0.0 : *std::min_element(w.begin(), w.end());
  }
  if (alpha <= 0.0 && has_zero) return 0.0;
  if (alpha == 0.0) {
    double log_sum = 0.0;
    for (double x : w) log_sum += std::log(x);
    return std::exp(log_sum / static_cast<double>(n));
  }
  // log-sum-exp form.
  double peak = -std::numeric_limits<double>::infinity();
  for (double x : w)
    if (x > 0.0) peak = std::max(peak, alpha * std::log(x));
  double acc = 0.0;
  for (double x : w)
    if (x > 0.0) acc += std::exp(alpha * std::log(x) - peak);
  const double log_mean = peak + std::log(acc) - std::log(static_cast<double>(n));
  return std::exp(log_mean / alpha);
}

double shannon_entropy(const ProbabilityVector& p) {
  double s = 0.0;
  for (double x : p.weights())
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

ClRatio min_cl_ratio(const ProbabilityVector& initial, const ProbabilityVector& target) {
  const std::size_t n = std::max(initial.size(), target.size());
  const auto ci = suffix_sums(initial.padded(n).sorted().weights());
  const auto ct = suffix_sums(target.padded(n).sorted().weights());
  ClRatio best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < n; ++l) {
    if (ct[l] <= kZeroTol) break;  // suffix sums only shrink from here on
    const double ratio = ci[l] <= kZeroTol ? 0.0 : ci[l] / ct[l];
    if (ratio < best.value) {
      best.value = ratio;
      best.argmin = l + 1;
    }
  }
  if (!std::isfinite(best.value)) best.value = 1.0;
  best.value = std::clamp(best.value, 0.0, 1.0);
  return best;
}

}  // namespace cohdistill
