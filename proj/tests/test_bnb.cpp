// Copyright 2026 The blp Authors
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

#include <cmath>
#include <string>

#include "blp/bnb.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace blp;

namespace {

BilevelInstance Polygon() { return LoadInstance(std::string(BLP_DATA_DIR) + "/polygon.json"); }

BilevelInstance Knapsack357() {
  return GenerateKnapsack({{3, 5, 7}, 9, std::nullopt}).instance;
}

RandomSpec SuiteSpec(std::uint64_t seed) {
  RandomSpec spec;
  spec.p = 1 + static_cast<int>(seed % 2);
  spec.q = 1 + static_cast<int>((seed / 2) % 2);
  spec.extra_rows = static_cast<int>(seed % 3);
  spec.seed = seed * 7919 + 3;
  spec.radius = 4.0;
  return spec;
}

Vector V(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

TEST_CASE("knapsack 3,5,7 under capacity 9") {
  const auto inst = Knapsack357();
  // Brute force over the 8 subsets: {3,5} is best with 8.
  CHECK(testing::KnapsackBruteForce({3, 5, 7}, 9) == 8);
  const auto res = Sos1BranchAndBound(BuildMpcc(inst));
  REQUIRE(res.optimal());
  CHECK(res.value == doctest::Approx(-8.0));
  CHECK((res.x - V({1, 1, 0})).lpNorm<Eigen::Infinity>() <= 1e-6);
  CHECK(res.y.lpNorm<Eigen::Infinity>() <= 1e-6);

  const auto mip = MipBranchAndBound(BuildBigMMip(inst, ComputeBigM(inst).usable()));
  REQUIRE(mip.optimal());
  CHECK(mip.value == doctest::Approx(-8.0));
}

TEST_CASE("single item knapsack with zero capacity") {
  const auto inst = GenerateKnapsack({{2}, 0, std::nullopt}).instance;
  const auto res = Sos1BranchAndBound(BuildMpcc(inst));
  REQUIRE(res.optimal());
  CHECK(std::abs(res.value) <= 1e-9);
  CHECK(std::abs(res.x(0)) <= 1e-9);
}

TEST_CASE("polygon optimistic optimum") {
  const auto inst = Polygon();
  const auto res = Sos1BranchAndBound(BuildMpcc(inst));
  REQUIRE(res.optimal());
  CHECK(std::abs(res.value) <= 1e-9);
  CHECK(res.x(0) == doctest::Approx(8.0));
  CHECK(std::abs(res.y(0)) <= 1e-9);
  const auto cert = ComputeBigM(inst);
  const auto mip = MipBranchAndBound(BuildBigMMip(inst, cert.usable()));
  REQUIRE(mip.optimal());
  CHECK(std::abs(mip.value) <= 1e-9);
}

TEST_CASE("infeasible leader set") {
  auto inst = Polygon();
  inst.leader_rhs = V({-1, 0});  // x <= -1 and x >= 0
  const auto res = Sos1BranchAndBound(BuildMpcc(inst));
  CHECK(res.status == SolveStatus::kInfeasible);
  CHECK(res.value == kInf);
  CHECK(res.stats.nodes_explored == 1);
  CHECK(res.stats.pruned_infeasible == 1);
}

TEST_CASE("unbounded leader objective") {
  // Leader min -x with x >= 0 only; follower y in [0, 1] with zero cost.
  BilevelInstance inst;
  inst.p = inst.q = 1;
  inst.m_l = 1;
  inst.m_f = 2;
  inst.leader_cost_x = V({-1});
  inst.leader_cost_y = V({0});
  inst.leader_lhs = Matrix::Constant(1, 1, -1.0);
  inst.leader_rhs = V({0});
  inst.follower_cost = V({0});
  inst.follower_lhs_x = Matrix::Zero(2, 1);
  inst.follower_lhs_y = (Matrix(2, 1) << 1, -1).finished();
  inst.follower_rhs = V({1, 0});
  const auto res = Sos1BranchAndBound(BuildMpcc(inst));
  CHECK(res.status == SolveStatus::kUnbounded);
  CHECK(res.value == -kInf);
  CHECK(testing::ComplementarityBruteForce(BuildMpcc(inst)).status == SolveStatus::kUnbounded);
  const auto mip = MipBranchAndBound(BuildBigMMip(inst, 10.0));
  CHECK(mip.status == SolveStatus::kUnbounded);
}

TEST_CASE("root relaxation already integral") {
  // No follower rows: nothing to branch on.
  BilevelInstance inst;
  inst.p = inst.q = 1;
  inst.m_l = 2;
  inst.m_f = 0;
  inst.leader_cost_x = V({1});
  inst.leader_cost_y = V({0});
  inst.leader_lhs = (Matrix(2, 1) << 1, -1).finished();
  inst.leader_rhs = V({1, 0});
  inst.follower_cost = V({0});
  inst.follower_lhs_x = Matrix(0, 1);
  inst.follower_lhs_y = Matrix(0, 1);
  inst.follower_rhs = Vector(0);
  const auto mip = MipBranchAndBound(BuildBigMMip(inst, 1.0));
  REQUIRE(mip.optimal());
  CHECK(mip.stats.nodes_explored == 1);

  // Whenever the root z is integral, the tree has one node.
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto r = GenerateRandomBounded(SuiteSpec(seed));
    const auto model = BuildBigMMip(r, ComputeBigM(r).usable());
    const auto root = SolveLp(model.relaxation);
    REQUIRE(root.optimal());
    bool integral = true;
    for (Eigen::Index i = 0; i < r.m_f; ++i) {
      const double z = root.point(model.z_offset() + i);
      integral = integral && std::abs(z - std::round(z)) <= 1e-8;
    }
    if (integral) CHECK(MipBranchAndBound(model).stats.nodes_explored == 1);
  }
}

TEST_CASE("bilevel feasibility check") {
  const auto poly = Polygon();
  CHECK(CheckBilevelFeasible(poly, V({8}), V({0}), 1e-9));
  CHECK(CheckBilevelFeasible(poly, V({8}), V({3}), 1e-9));
  CHECK_FALSE(CheckBilevelFeasible(poly, V({8}), V({9}), 1e-9));
  try {
    CheckBilevelFeasible(poly, V({11}), V({3}), 1e-9);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFollowerInfeasible);
  }
  // At x = (1,1,0) the follower maximizes sum y_i with y_i <= min(x_i, 1-x_i) = 0.
  const auto k = Knapsack357();
  CHECK_FALSE(CheckBilevelFeasible(k, V({1, 1, 0}), V({0.5, 0, 0}), 1e-6));
  CHECK(CheckBilevelFeasible(k, V({1, 1, 0}), V({0, 0, 0}), 1e-6));
}

TEST_CASE("property: solvers agree with the complementarity brute force") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = GenerateRandomBounded(SuiteSpec(seed));
    const auto model = BuildMpcc(inst);
    const auto brute = testing::ComplementarityBruteForce(model);

    std::size_t updates = 0;
    BnbOptions opts;
    opts.on_incumbent = [&](const SolveResult& r) {
      ++updates;
      CHECK(CheckBilevelFeasible(inst, r.x, r.y, 1e-6));
    };
    const auto sos1 = Sos1BranchAndBound(model, opts);
    REQUIRE(sos1.status == brute.status);
    CHECK(updates >= 1);
    CHECK(std::abs(sos1.value - brute.value) <= 1e-6);
    CHECK(sos1.stats.nodes_explored >= sos1.stats.leaves);
    CHECK(sos1.stats.leaves >= 1);
    // Every branched node has two children.
    CHECK(sos1.stats.nodes_explored == 2 * sos1.stats.leaves - 1);
    CHECK(sos1.stats.leaves >= sos1.stats.pruned_infeasible + sos1.stats.pruned_bound +
                                   sos1.stats.pruned_sos1);

    opts.strategy = Strategy::kDepthFirst;
    const auto dfs = Sos1BranchAndBound(model, opts);
    CHECK(std::abs(dfs.value - brute.value) <= 1e-6);

    BnbOptions full;
    full.prune_by_bound = false;
    full.prune_by_feasibility = false;
    const auto tree = Sos1BranchAndBound(model, full);
    CHECK(std::abs(tree.value - brute.value) <= 1e-6);
    CHECK(tree.stats.nodes_explored >= sos1.stats.nodes_explored);

    const auto mip = MipBranchAndBound(BuildBigMMip(inst, ComputeBigM(inst).usable()), opts);
    REQUIRE(mip.optimal());
    CHECK(std::abs(mip.value - brute.value) <= 1e-6);
    const auto mip_full = MipBranchAndBound(BuildBigMMip(inst, ComputeBigM(inst).usable()), full);
    CHECK(std::abs(mip_full.value - brute.value) <= 1e-6);
  }
}

TEST_CASE("determinism including statistics") {
  const auto inst = GenerateRandomBounded(SuiteSpec(5));
  const auto model = BuildMpcc(inst);
  const auto a = Sos1BranchAndBound(model);
  const auto b = Sos1BranchAndBound(model);
  CHECK(a.stats == b.stats);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.mu == b.mu);
  CHECK(a.value == b.value);
}

TEST_CASE("node budget") {
  BnbOptions opts;
  opts.node_budget = 2;
  try {
    Sos1BranchAndBound(BuildMpcc(Knapsack357()), opts);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
}
