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

#ifndef BLP_BNB_HPP_
#define BLP_BNB_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "blp/reformulation.hpp"

namespace blp {

enum class Strategy { kBestFirst, kDepthFirst };

enum class SolveStatus { kInfeasible, kUnbounded, kOptimal };

const char* SolveStatusName(SolveStatus status);

struct SolveStats {
  std::size_t nodes_explored = 0;
  std::size_t pruned_infeasible = 0;
  std::size_t pruned_bound = 0;
  std::size_t pruned_sos1 = 0;  // SOS1 (resp. integrality) feasibility prunes
  std::size_t leaves = 0;       // nodes closed without branching

  SolveStats& operator+=(const SolveStats& o);
  friend bool operator==(const SolveStats&, const SolveStats&) = default;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  Vector x;
  Vector y;
  Vector mu;
  double value = kInf;
  SolveStats stats;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

// A node of the SOS1 tree: pairs branched to mu_i = 0, pairs branched to
// slack_i = 0, and the pairs still open.
struct BnbNode {
  std::vector<Eigen::Index> mu_zero;
  std::vector<Eigen::Index> slack_zero;
  std::vector<Eigen::Index> open;
  double parent_bound = -kInf;
  std::size_t sequence = 0;
};

inline constexpr std::size_t kDefaultNodeBudget = 1'000'000;

struct BnbOptions {
  Strategy strategy = Strategy::kBestFirst;
  std::size_t node_budget = kDefaultNodeBudget;
  // Disabling both explores the full tree; only infeasible nodes are cut.
  bool prune_by_bound = true;
  bool prune_by_feasibility = true;
  // Called on every incumbent improvement with the new incumbent.
  std::function<void(const SolveResult&)> on_incumbent;
};

// Node budget from BLP_NODE_BUDGET when set, else kDefaultNodeBudget.
std::size_t NodeBudgetFromEnv();

// Exact optimistic solve by branching each complementarity pair into
// mu_i = 0 or slack_i = 0. Best-first pops the smallest parent bound (FIFO
// among ties); the branching pair maximizes |mu_i * slack_i| (lowest index
// among ties). Throws kBudgetExceeded.
SolveResult Sos1BranchAndBound(const MpccModel& model, const BnbOptions& options = {});

// Binary branch-and-bound on the Big-M model, branching on the most
// fractional z_i. Throws kBudgetExceeded.
SolveResult MipBranchAndBound(const BigMModel& model, const BnbOptions& options = {});

// A_l x <= b_l, A_f x + B_f y <= b_f and c_f(x)'y <= V(x), all within tol.
// Throws kFollowerInfeasible when the follower LP at x has no feasible point.
bool CheckBilevelFeasible(const BilevelInstance& inst, const Vector& x, const Vector& y,
                          double tol);

}  // namespace blp

#endif  // BLP_BNB_HPP_
