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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cohdistill/measures.hpp"
#include "support.hpp"

using namespace cohdistill;

namespace {

ProbabilityVector random_distribution(std::mt19937_64& rng, std::size_t n, bool allow_zeros = false) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(n);
  for (auto& x : w) x = expo(rng);
  if (allow_zeros)
    for (auto& x : w)
      if (rng() % 4 == 0) x = 0.0;
  double s = std::accumulate(w.begin(), w.end(), 0.0);
  if (s == 0.0) {
    w[0] = 1.0;
    s = 1.0;
  }
  for (auto& x : w) x /= s;
  return ProbabilityVector(w);
}

// q obtained from p by a random doubly-stochastic mixing is majorized by p.
ProbabilityVector smoothed(const ProbabilityVector& p, std::mt19937_64& rng) {
  std::vector<double> w = p.weights();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int step = 0; step < 4; ++step) {
    const std::size_t i = rng() % w.size();
    const std::size_t j = rng() % w.size();
    const double t = u(rng);
    const double a = w[i];
    const double b = w[j];
    w[i] = t * a + (1 - t) * b;
    w[j] = t * b + (1 - t) * a;
  }
  double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= s;
  return ProbabilityVector(w);
}

}  // namespace

TEST_CASE("coherence_rank counts nonzero amplitudes") {
  CHECK(coherence_rank(testing::from_profile({1.0, 0.0, 0.0})) == 1);
  CHECK(coherence_rank(testing::from_profile({0.5, 0.5, 0.0})) == 2);
  CHECK(coherence_rank(testing::from_profile({0.25, 0.25, 0.25, 0.25})) == 4);
}

TEST_CASE("cl_profile suffix sums") {
  auto c = cl_profile(testing::from_profile({0.2, 0.5, 0.3})).values;
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(0.5));
  CHECK(c[2] == doctest::Approx(0.2));

  c = cl_profile(testing::from_profile({1.0 / 3, 1.0 / 3, 1.0 / 3})).values;
  CHECK(c[1] == doctest::Approx(2.0 / 3));
  CHECK(c[2] == doctest::Approx(1.0 / 3));

  c = cl_profile(testing::from_profile({1.0, 0.0})).values;
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == 0.0);
}

TEST_CASE("majorized_by on the catalysis pair") {
  const ProbabilityVector p({0.4, 0.4, 0.1, 0.1});
  const ProbabilityVector q({0.5, 0.25, 0.25, 0.0});
  const ProbabilityVector c({0.6, 0.4});
  CHECK_FALSE(majorized_by(p, q));  // 0.8 > 0.75 at the second partial sum
  CHECK(majorized_by(tensor(p, c), tensor(q, c)));
  CHECK(majorized_by(ProbabilityVector({0.25, 0.25, 0.25, 0.25}), p));
  // Zero padding: a shorter q behaves like q followed by zeros.
  CHECK_FALSE(majorized_by(p, ProbabilityVector({0.5, 0.25, 0.25})));
  CHECK(majorized_by(ProbabilityVector({0.4, 0.3, 0.3}), ProbabilityVector({0.5, 0.25, 0.25, 0.0})));
  CHECK(majorized_by(ProbabilityVector({0.3, 0.3, 0.2, 0.2}), ProbabilityVector({0.5, 0.25, 0.25})));
}

TEST_CASE("tensor products") {
  const ProbabilityVector p({0.6, 0.4});
  CHECK(tensor(p, ProbabilityVector({1.0})).weights() == p.weights());
  const auto uu = tensor(ProbabilityVector({0.5, 0.5}), ProbabilityVector({0.5, 0.5})).weights();
  CHECK(uu == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  const auto pp = tensor(p, p).weights();
  CHECK(pp[0] == doctest::Approx(0.36));
  CHECK(pp[1] == doctest::Approx(0.24));
  CHECK(pp[2] == doctest::Approx(0.24));
  CHECK(pp[3] == doctest::Approx(0.16));
}

TEST_CASE("power_mean conventions") {
  const ProbabilityVector uniform({0.2, 0.2, 0.2, 0.2, 0.2});
  for (double alpha : {-40.0, -1.0, 0.0, 0.5, 1.0, 3.0, 40.0})
    CHECK(power_mean(uniform, alpha) == doctest::Approx(0.2).epsilon(1e-12));
  const ProbabilityVector p({0.7, 0.2, 0.1});
  CHECK(power_mean(p, 1.0) == doctest::Approx(1.0 / 3));
  CHECK(power_mean(ProbabilityVector({0.5, 0.5, 0.0}), -1.0) == 0.0);
  CHECK(power_mean(ProbabilityVector({0.5, 0.5, 0.0}), 0.0) == 0.0);
  CHECK(power_mean(p, std::numeric_limits<double>::infinity()) == 0.7);
  CHECK(power_mean(p, -std::numeric_limits<double>::infinity()) == 0.1);
  // Padding to a larger dimension introduces zeros.
  CHECK(power_mean(ProbabilityVector({0.5, 0.5}), -2.0, 3) == 0.0);
  CHECK(power_mean(ProbabilityVector({0.5, 0.5}), 1.0, 4) == doctest::Approx(0.25));
  // Extreme exponents stay finite.
  CHECK(std::isfinite(power_mean(ProbabilityVector({1.0 - 1e-12, 1e-12}), -40.0)));
}

TEST_CASE("shannon_entropy") {
  CHECK(shannon_entropy(ProbabilityVector({1.0, 0.0})) == 0.0);
  CHECK(shannon_entropy(ProbabilityVector({0.25, 0.25, 0.25, 0.25})) == doctest::Approx(std::log(4.0)));
  CHECK(shannon_entropy(ProbabilityVector({0.5, 0.25, 0.25})) == doctest::Approx(1.5 * std::log(2.0)));
  CHECK(shannon_entropy(ProbabilityVector({0.4, 0.4, 0.1, 0.1})) == doctest::Approx(1.193549604098133));
}

TEST_CASE("min_cl_ratio conventions") {
  const ProbabilityVector third({1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto r = min_cl_ratio(ProbabilityVector({0.5, 0.3, 0.2}), third);
  CHECK(r.value == doctest::Approx(0.6));
  CHECK(r.argmin == 3);
  r = min_cl_ratio(ProbabilityVector({0.4, 0.4, 0.1, 0.1}), ProbabilityVector({0.5, 0.25, 0.25}));
  CHECK(r.value == doctest::Approx(0.8));
  CHECK(r.argmin == 3);
  // Source rank below target rank: ratio 0.
  CHECK(min_cl_ratio(ProbabilityVector({1.0, 0.0}), ProbabilityVector({0.5, 0.5})).value == 0.0);
  // Identical inputs: exactly 1.
  CHECK(min_cl_ratio(third, third).value == 1.0);
}

TEST_CASE("measure invariants on random vectors") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + rng() % 6;
    const auto p = random_distribution(rng, n, trial % 3 == 0);
    const auto q = smoothed(p, rng);
    const auto r = smoothed(q, rng);

    CHECK(majorized_by(p, p));
    CHECK(majorized_by(q, p));
    CHECK(majorized_by(r, q));
    CHECK(majorized_by(r, p));  // transitivity
    CHECK(shannon_entropy(q) >= shannon_entropy(p) - 1e-12);

    const auto s = random_distribution(rng, 1 + rng() % 3);
    CHECK(majorized_by(tensor(q, s), tensor(p, s)));

    // Permutation invariance of the C_l profile.
    std::vector<double> shuffled = p.weights();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto a = cl_profile(p).values;
    const auto b = cl_profile(ProbabilityVector(shuffled)).values;
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] <= a[i - 1] + 1e-15);
    CHECK(a[0] == doctest::Approx(1.0));

    const auto strict = random_distribution(rng, n);
    double prev = -std::numeric_limits<double>::infinity();
    for (double alpha : {-30.0, -5.0, -1.0, -0.2, 0.0, 0.3, 0.9, 1.0, 1.5, 4.0, 30.0}) {
      const double m = power_mean(strict, alpha);
      CHECK(m >= prev - 1e-12);
      prev = m;
    }
  }
}
