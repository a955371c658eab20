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
#include <random>

#include "cohdistill/catalysis.hpp"
#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"
#include "cohdistill/oracles.hpp"
#include "support.hpp"

using namespace cohdistill;
using testing::from_profile;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double margin_at(const CatalysisCheck& c, double alpha) {
  for (const auto& m : c.margins)
    if (m.alpha == alpha) return m.margin;
  FAIL("alpha not sampled");
  return 0.0;
}

PureStateVector catalyst_state(const ProbabilityVector& c) {
  Vector v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(i) = std::sqrt(c[i]);
  return PureStateVector::normalized(v);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("enhancement_check examples") {
  auto c = enhancement_check(ProbabilityVector({0.4, 0.4, 0.1, 0.1}), ProbabilityVector({0.5, 0.25, 0.25}));
  CHECK(c.p_max == doctest::Approx(0.8));
  CHECK(c.bound == 1.0);
  CHECK(c.margin == doctest::Approx(0.2));
  CHECK(c.enhanceable);

  const ProbabilityVector p({0.5, 0.3, 0.2});
  c = enhancement_check(p, p);
  CHECK(c.p_max == 1.0);
  CHECK_FALSE(c.enhanceable);

  c = enhancement_check(ProbabilityVector({0.5, 0.5}), ProbabilityVector({0.9, 0.1}));
  CHECK(c.p_max == 1.0);
  CHECK_FALSE(c.enhanceable);

  // Source shorter than target: psi_n = 0 < phi_n gives bound 0.
  c = enhancement_check(ProbabilityVector({0.7, 0.3}), ProbabilityVector({0.4, 0.3, 0.3}));
  CHECK(c.bound == 0.0);
  CHECK_FALSE(c.enhanceable);
}

TEST_CASE("gate_probabilistic on the canonical pair") {
  const auto psi = from_profile({0.4, 0.4, 0.1, 0.1});
  const auto phi = from_profile({0.5, 0.25, 0.25});
  const auto gate = gate_probabilistic(DensityMatrix::from_pure(psi), phi);
  CHECK(gate.verdict_cliques);
  CHECK(gate.verdict_family);
  REQUIRE(gate.family.size() == 1);
  CHECK(gate.family[0].indices == IndexSet{0, 1, 2, 3});
  CHECK(gate.family[0].margin == doctest::Approx(0.2));

  const auto same = gate_probabilistic(DensityMatrix::from_pure(phi), phi);
  CHECK_FALSE(same.verdict_cliques);
  CHECK_FALSE(same.verdict_family);
}

TEST_CASE("default_alpha_grid") {
  const auto grid = default_alpha_grid();
  CHECK(grid.size() == 63);
  CHECK(grid.front() == -kInf);
  CHECK(grid.back() == kInf);
  CHECK(std::count(grid.begin(), grid.end(), 0.0) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 1.0) == 0);
  CHECK(std::is_sorted(grid.begin(), grid.end()));
  CHECK(std::count(grid.begin(), grid.end(), -40.0) == 1);
  CHECK(std::count(grid.begin(), grid.end(), 40.0) == 1);
}

TEST_CASE("catalysis_check on the canonical pair") {
  const auto grid = default_alpha_grid();
  const auto c = catalysis_check(ProbabilityVector({0.4, 0.4, 0.1, 0.1}), ProbabilityVector({0.5, 0.25, 0.25}), grid);
  CHECK(c.passes);
  CHECK_FALSE(c.zero_entry_support);
  CHECK(c.entropy_margin == doctest::Approx(1.193549604098133 - 1.5 * std::log(2.0)));
  CHECK(margin_at(c, 0.0) == doctest::Approx(0.2));
  CHECK(margin_at(c, -kInf) == doctest::Approx(0.1));
  CHECK(margin_at(c, kInf) == doctest::Approx(0.1));
  CHECK(margin_at(c, -40.0) == doctest::Approx(0.1017).epsilon(1e-3));
  CHECK(margin_at(c, 40.0) == doctest::Approx(0.0898).epsilon(1e-3));
  CHECK(c.worst_below_one.margin > 0.0);
  CHECK(c.worst_above_one.margin > 0.0);
  CHECK(c.worst_below_one.alpha < 1.0);
  CHECK(c.worst_above_one.alpha > 1.0);
  // The minimum sits near alpha = 1 on both sides.
  CHECK(c.worst_below_one.margin <= 4e-4);
  CHECK(c.worst_above_one.margin <= 4e-4);
  CHECK(c.margins.size() > grid.size());
}

TEST_CASE("catalysis_check fails on equal profiles") {
  const ProbabilityVector p({0.5, 0.3, 0.2});
  const auto c = catalysis_check(p, p, default_alpha_grid());
  CHECK_FALSE(c.passes);
  CHECK(c.entropy_margin == 0.0);
}

TEST_CASE("gate_deterministic") {
  const auto grid = default_alpha_grid();
  const auto phi = from_profile({0.5, 0.25, 0.25});
  const auto gate = gate_deterministic(DensityMatrix::from_pure(from_profile({0.4, 0.4, 0.1, 0.1})), phi, grid);
  CHECK(gate.verdict);
  CHECK(gate.baseline == doctest::Approx(0.8));
  CHECK_FALSE(gate.weight_deficit);
  CHECK(gate.worst.margin > 0.0);

  try {
    gate_deterministic(DensityMatrix::from_pure(from_profile({0.5, 0.5})), from_profile({0.9, 0.1}), grid);
    FAIL("expected a precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Precondition);
  }

  Matrix single = Matrix::Ones(1, 1);
  const auto partial = testing::block_diagonal(
      {{0.9, testing::projector(from_profile({0.4, 0.4, 0.1, 0.1}).amplitudes())}, {0.1, single}});
  const auto deficit = gate_deterministic(partial, phi, grid);
  CHECK_FALSE(deficit.weight_deficit);
  CHECK_FALSE(deficit.verdict);
  REQUIRE(deficit.members.size() == 2);
  CHECK(deficit.members[0].passes);
  CHECK_FALSE(deficit.members[1].passes);
  CHECK(deficit.members[1].zero_entry_support);
}

TEST_CASE("catalyst_grid enumeration") {
  const auto grid = catalyst_grid(2, 0.05);
  REQUIRE(grid.size() == 10);
  CHECK(grid.front()[0] == doctest::Approx(0.95));
  CHECK(grid.back()[0] == doctest::Approx(0.5));
  for (const auto& c : grid) CHECK(c[0] >= c[1]);

  const auto three = catalyst_grid(3, 0.25);
  // k=2: (3,1), (2,2); k=3: (2,1,1)
  CHECK(three.size() == 3);
  CHECK(three[2].size() == 3);

  CHECK_THROWS_AS(catalyst_grid(1, 0.05), Error);
  CHECK_THROWS_AS(catalyst_grid(2, 0.0), Error);
  CHECK_THROWS_AS(catalyst_grid(2, 0.7), Error);
}

TEST_CASE("search_catalyst on the canonical pair") {
  const auto rho = DensityMatrix::from_pure(from_profile({0.4, 0.4, 0.1, 0.1}));
  const auto phi = from_profile({0.5, 0.25, 0.25});
  for (auto mode : {SearchMode::Probabilistic, SearchMode::Deterministic}) {
    const auto s = search_catalyst(rho, phi, 2, 0.05, mode);
    CHECK(s.baseline == doctest::Approx(0.8));
    REQUIRE(s.found.has_value());
    CHECK(s.found->weights()[0] == doctest::Approx(0.6));
    CHECK(s.found->weights()[1] == doctest::Approx(0.4));
    CHECK(s.found_achieved == doctest::Approx(1.0));
    CHECK(s.candidates_per_dim == std::vector<std::size_t>{10});
    CHECK(majorized_by(tensor(from_profile({0.4, 0.4, 0.1, 0.1}).squared_moduli(), *s.found),
                       tensor(phi.squared_moduli(), *s.found)));
  }
}

TEST_CASE("search_catalyst cannot beat probability one") {
  const auto s = search_catalyst(DensityMatrix::from_pure(from_profile({0.5, 0.5})), from_profile({0.9, 0.1}), 3, 0.1,
                                 SearchMode::Probabilistic);
  CHECK(s.baseline == doctest::Approx(1.0));
  CHECK_FALSE(s.found.has_value());
  CHECK(s.best_achieved <= 1.0);
}

TEST_CASE("catalyzed_pmax identities") {
  std::mt19937_64 rng(606);
  const ProbabilityVector trivial({1.0});
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + rng() % 5;
    const auto rho = random_structured_state(rng, d).rho;
    const auto phi = random_pure_state(rng, 2 + rng() % 3, 2);
    const auto subs = maximal_pure_subspaces(rho);
    const double baseline = pmax_mixed(rho, phi).p_max;
    CHECK(catalyzed_pmax(subs, phi, trivial) == baseline);

    const auto psi = random_pure_state(rng, d, 1 + rng() % d);
    const auto c = catalyst_grid(3, 0.1)[rng() % 12];
    const auto pure_subs = maximal_pure_subspaces(DensityMatrix::from_pure(psi));
    const double via_plan = catalyzed_pmax(pure_subs, phi, c);
    const double direct =
        min_cl_ratio(tensor(psi.squared_moduli(), c), tensor(phi.squared_moduli(), c)).value;
    CHECK(via_plan == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("product-state shortcut matches the full construction") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 2 + rng() % 3;
    const auto rho = random_structured_state(rng, d).rho;
    const auto phi = random_pure_state(rng, 3, 2 + rng() % 2);
    const auto grid = catalyst_grid(3, 0.1);
    const auto c = grid[rng() % grid.size()];
    const auto chi = catalyst_state(c);

    const Matrix joint = kron(rho.matrix(), testing::projector(chi.amplitudes()));
    const Vector target = kron(phi.amplitudes(), chi.amplitudes());
    const double full = pmax_mixed(validate_density(joint), PureStateVector::normalized(target)).p_max;
    CHECK(catalyzed_pmax(maximal_pure_subspaces(rho), phi, c) == doctest::Approx(full).epsilon(1e-9));
  }
}

TEST_CASE("search success implies the probabilistic gate") {
  std::mt19937_64 rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t d = 2 + rng() % 4;
    const auto psi = random_pure_state(rng, d, 2 + rng() % (d - 1));
    const auto phi = random_pure_state(rng, d, 2 + rng() % (d - 1));
    const auto rho = DensityMatrix::from_pure(psi);
    const auto s = search_catalyst(rho, phi, 3, 0.05, SearchMode::Probabilistic);
    if (s.found && s.found_achieved > s.baseline + 1e-9) CHECK(gate_probabilistic(rho, phi).verdict_family);
  }
}
