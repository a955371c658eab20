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

#include <cmath>
#include <cstdlib>
#include <random>

#include "cohdistill/distill.hpp"
#include "cohdistill/error.hpp"
#include "cohdistill/measures.hpp"
#include "cohdistill/oracles.hpp"
#include "support.hpp"

using namespace cohdistill;
using testing::from_profile;
using testing::index_sets;

namespace {

DensityMatrix worked_example_state() {
  Matrix single = Matrix::Ones(1, 1);
  return testing::block_diagonal({{0.5, testing::pure_block({0.9, 0.1})}, {0.5, single}});
}

Protocol worked_example_protocol() {
  return to_protocol(full_plan(worked_example_state(), from_profile({0.5, 0.5})));
}

void expect_same(const SimulationResult& a, const SimulationResult& b) {
  CHECK(a.shots == b.shots);
  CHECK(a.successes == b.successes);
  CHECK(a.empirical_probability == b.empirical_probability);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.per_branch_counts == b.per_branch_counts);
}

}  // namespace

TEST_CASE("brute_subspaces examples") {
  const auto pure = brute_subspaces(DensityMatrix::from_pure(from_profile({0.2, 0.5, 0.3})));
  CHECK(index_sets(pure) == std::vector<IndexSet>{{0, 1, 2}});

  Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  CHECK(index_sets(brute_subspaces(validate_density(mixed))) == std::vector<IndexSet>{{0}, {1}});

  std::mt19937_64 rng(5);
  const auto a = random_pure_state(rng, 3, 3);
  const auto b = random_pure_state(rng, 2, 2);
  const auto rho = testing::block_diagonal(
      {{0.7, testing::projector(a.amplitudes())}, {0.3, testing::projector(b.amplitudes())}});
  const auto subs = brute_subspaces(rho);
  CHECK(index_sets(subs) == std::vector<IndexSet>{{0, 1, 2}, {3, 4}});
  CHECK(subs[0].weight == doctest::Approx(0.7));
  CHECK(subs[1].weight == doctest::Approx(0.3));
}

TEST_CASE("simulate trivial protocols") {
  const auto phi = from_profile({0.5, 0.5});
  const auto certain = to_protocol(full_plan(DensityMatrix::from_pure(phi), phi));
  auto r = simulate(certain, DensityMatrix::from_pure(phi), 1000, 1);
  CHECK(r.successes == 1000);
  CHECK(r.empirical_probability == 1.0);
  CHECK(r.standard_error == 0.0);

  Matrix mixed = Matrix::Identity(2, 2) / 2.0;
  const auto empty = to_protocol(full_plan(validate_density(mixed), phi));
  CHECK(empty.branches.empty());
  r = simulate(empty, validate_density(mixed), 1000, 1);
  CHECK(r.successes == 0);
  CHECK(r.per_branch_counts.empty());
}

TEST_CASE("simulate the 0.1 worked example") {
  const auto protocol = worked_example_protocol();
  CHECK(protocol.p_max == doctest::Approx(0.1));
  const auto r = simulate(protocol, worked_example_state(), 1000000, 20261017);
  CHECK(r.shots == 1000000);
  CHECK(r.empirical_probability == static_cast<double>(r.successes) / r.shots);
  CHECK(r.standard_error ==
        doctest::Approx(std::sqrt(r.empirical_probability * (1 - r.empirical_probability) / r.shots)));
  CHECK(std::abs(r.empirical_probability - 0.1) < 3 * r.standard_error);
  std::uint64_t total = 0;
  for (const auto& [id, n] : r.per_branch_counts) total += n;
  CHECK(total == r.successes);
  CHECK(r.rng == "mt19937_64+splitmix64-blocks");
}

TEST_CASE("simulate is reproducible and independent of worker count") {
  const auto protocol = worked_example_protocol();
  const auto rho = worked_example_state();
  const auto first = simulate(protocol, rho, 300000, 42);
  expect_same(first, simulate(protocol, rho, 300000, 42));

  ::setenv("COHDISTILL_WORKERS", "1", 1);
  const auto serial = simulate(protocol, rho, 300000, 42);
  ::setenv("COHDISTILL_WORKERS", "5", 1);
  const auto parallel = simulate(protocol, rho, 300000, 42);
  ::unsetenv("COHDISTILL_WORKERS");
  expect_same(first, serial);
  expect_same(first, parallel);

  CHECK(simulate(protocol, rho, 300000, 43).successes != first.successes);
}

TEST_CASE("simulate rejects bad input") {
  const auto rho = worked_example_state();
  auto protocol = worked_example_protocol();
  CHECK_THROWS_AS(simulate(protocol, rho, 0, 1), Error);

  protocol.branches[0].kraus *= 2.0;
  try {
    simulate(protocol, rho, 10, 1);
    FAIL("expected IncompletePlan");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::IncompletePlan);
  }

  const auto phi = from_profile({0.5, 0.5});
  const auto small = to_protocol(full_plan(DensityMatrix::from_pure(phi), phi));
  CHECK_THROWS_AS(simulate(small, rho, 10, 1), Error);
}

TEST_CASE("verify_branch_outputs") {
  const auto phi = from_profile({0.5, 0.3, 0.2});
  const auto rho = DensityMatrix::from_pure(phi);
  CHECK(verify_branch_outputs(to_protocol(full_plan(rho, phi)), rho, phi).ok);

  const auto psi = from_profile({0.5, 0.26, 0.24});
  const auto target = from_profile({0.4, 0.35, 0.25});
  auto protocol = to_protocol(full_plan(DensityMatrix::from_pure(psi), target));
  REQUIRE(protocol.branches.size() >= 2);
  CHECK(verify_branch_outputs(protocol, DensityMatrix::from_pure(psi), target).ok);

  Matrix& k = protocol.branches[1].kraus;
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    for (Eigen::Index i = 0; i < k.rows(); ++i)
      if (k(i, j) != 0.0) {
        k(i, j) *= 0.5;
        j = k.cols();
        break;
      }
  const auto broken = verify_branch_outputs(protocol, DensityMatrix::from_pure(psi), target);
  CHECK_FALSE(broken.ok);
  CHECK(broken.offending_branch == protocol.branches[1].id);
  CHECK(broken.worst_fidelity < 1.0 - 1e-9);
}

TEST_CASE("random generators") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + rng() % 7;
    const auto rho = random_undistillable_state(rng, d);
    CHECK_FALSE(has_rank2_subspace(rho));
    RealMatrix a = a_matrix(rho);
    a.diagonal().setZero();
    CHECK(a.maxCoeff() <= 1.0 - 1e-3);

    const std::size_t rank = 1 + rng() % d;
    CHECK(coherence_rank(random_pure_state(rng, d, rank)) == rank);
  }
  CHECK_THROWS_AS(random_pure_state(rng, 3, 4), Error);

  std::mt19937_64 a(3), b(3);
  const auto x = random_structured_state(a, 6);
  const auto y = random_structured_state(b, 6);
  CHECK(x.rho.matrix() == y.rho.matrix());
  CHECK(x.pure_blocks == y.pure_blocks);
}
