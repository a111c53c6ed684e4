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

#include "blp/bnb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <queue>
#include <string>

namespace blp {

namespace {

using Index = Eigen::Index;

constexpr double kComplementarityTol = 1e-8;
constexpr double kIntegralityTol = 1e-8;

// Pending nodes ordered per strategy: best-first pops the smallest parent
// bound, ties by insertion order; depth-first pops the newest node.
template <typename Node>
class NodeQueue {
 public:
  explicit NodeQueue(Strategy strategy) : strategy_(strategy) {}

  void Push(Node node) {
    node.sequence = next_sequence_++;
    if (strategy_ == Strategy::kBestFirst) {
      heap_.push(std::move(node));
    } else {
      stack_.push_back(std::move(node));
    }
  }

  Node Pop() {
    if (strategy_ == Strategy::kBestFirst) {
      Node n = heap_.top();
      heap_.pop();
      return n;
    }
    Node n = std::move(stack_.back());
    stack_.pop_back();
    return n;
  }

  bool empty() const {
    return strategy_ == Strategy::kBestFirst ? heap_.empty() : stack_.empty();
  }

 private:
  struct Later {
    bool operator()(const Node& a, const Node& b) const {
      if (a.parent_bound != b.parent_bound) return a.parent_bound > b.parent_bound;
      return a.sequence > b.sequence;
    }
  };
  Strategy strategy_;
  std::size_t next_sequence_ = 0;
  std::priority_queue<Node, std::vector<Node>, Later> heap_;
  std::vector<Node> stack_;
};

bool BoundPrunes(double v, double incumbent) {
  return v >= incumbent - 1e-9 * (1.0 + std::abs(incumbent));
}

LpProblem WithEqualities(const LpProblem& base, const std::vector<Eigen::RowVectorXd>& rows,
                         const std::vector<double>& rhs) {
  LpProblem lp = base;
  const Index k0 = base.eq_lhs.rows();
  const Index k = k0 + static_cast<Index>(rows.size());
  lp.eq_lhs.resize(k, base.num_vars());
  lp.eq_rhs.resize(k);
  if (k0 > 0) {
    lp.eq_lhs.topRows(k0) = base.eq_lhs;
    lp.eq_rhs.head(k0) = base.eq_rhs;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lp.eq_lhs.row(k0 + static_cast<Index>(i)) = rows[i];
    lp.eq_rhs(k0 + static_cast<Index>(i)) = rhs[i];
  }
  return lp;
}

void CheckBudget(const SolveStats& stats, std::size_t budget) {
  if (stats.nodes_explored >= budget)
    throw Error(ErrorCode::kBudgetExceeded,
                "node budget of " + std::to_string(budget) + " exhausted");
}

SolveResult Incumbent(const MpccModel& model, const Vector& z, double value) {
  SolveResult r;
  r.status = SolveStatus::kOptimal;
  r.x = model.X(z);
  r.y = model.Y(z);
  r.mu = model.Mu(z);
  r.value = value;
  return r;
}

}  // namespace

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kInfeasible: return "Infeasible";
    case SolveStatus::kUnbounded: return "Unbounded";
    case SolveStatus::kOptimal: return "Optimal";
  }
  return "Unknown";
}

SolveStats& SolveStats::operator+=(const SolveStats& o) {
  nodes_explored += o.nodes_explored;
  pruned_infeasible += o.pruned_infeasible;
  pruned_bound += o.pruned_bound;
  pruned_sos1 += o.pruned_sos1;
  leaves += o.leaves;
  return *this;
}

std::size_t NodeBudgetFromEnv() {
  if (const char* env = std::getenv("BLP_NODE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultNodeBudget;
}

SolveResult Sos1BranchAndBound(const MpccModel& model, const BnbOptions& options) {
  SolveResult best;  // v* = +inf
  SolveStats stats;
  std::size_t branched = 0;
  NodeQueue<BnbNode> nodes(options.strategy);

  BnbNode root;
  for (Index i = 0; i < model.m; ++i) root.open.push_back(i);
  nodes.Push(std::move(root));

  auto update = [&](const Vector& z, double v) {
    if (!(v < best.value)) return;
    best = Incumbent(model, z, v);
    if (options.on_incumbent) options.on_incumbent(best);
  };

  while (!nodes.empty()) {
    CheckBudget(stats, options.node_budget);
    BnbNode node = nodes.Pop();

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    for (Index i : node.mu_zero) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(model.num_vars());
      r(model.pairs[i].mu_var) = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(0.0);
    }
    for (Index i : node.slack_zero) {
      rows.push_back(model.SlackRow(i));
      rhs.push_back(model.instance.follower_rhs(i));
    }
    const LpSolution sol = SolveLp(WithEqualities(model.relaxation, rows, rhs));
    ++stats.nodes_explored;
    const bool leaf = node.open.empty();

    if (sol.status == LpStatus::kInfeasible) {
      ++stats.pruned_infeasible;
      continue;
    }

    Index branch = -1;
    if (sol.status == LpStatus::kUnbounded) {
      if (leaf) {
        // Every pair is decided, so the MPCC itself is unbounded.
        best = SolveResult{};
        best.status = SolveStatus::kUnbounded;
        best.value = -kInf;
        break;
      }
      branch = node.open.front();
    } else {
      const double v = sol.value;
      if (options.prune_by_bound && BoundPrunes(v, best.value)) {
        ++stats.pruned_bound;
        continue;
      }
      const Vector mu = model.Mu(sol.point);
      const Vector slack = model.Slack(sol.point);
      double worst = -1.0;
      bool feasible = true;
      for (Index i : node.open) {
        if (std::min(mu(i), slack(i)) > kComplementarityTol) feasible = false;
        const double violation = std::abs(mu(i) * slack(i));
        if (violation > worst) {
          worst = violation;
          branch = i;
        }
      }
      if (feasible || leaf) {
        update(sol.point, v);
        if (options.prune_by_feasibility || leaf) {
          if (!leaf) ++stats.pruned_sos1;
          continue;
        }
      }
    }

    ++branched;
    for (int side = 0; side < 2; ++side) {
      BnbNode child;
      child.mu_zero = node.mu_zero;
      child.slack_zero = node.slack_zero;
      (side == 0 ? child.mu_zero : child.slack_zero).push_back(branch);
      for (Index i : node.open)
        if (i != branch) child.open.push_back(i);
      child.parent_bound = sol.optimal() ? sol.value : -kInf;
      nodes.Push(std::move(child));
    }
  }
  stats.leaves = stats.nodes_explored - branched;
  best.stats = stats;
  return best;
}

namespace {

struct MipNode {
  std::vector<std::pair<Index, double>> fixed;  // (z index, 0 or 1)
  double parent_bound = -kInf;
  std::size_t sequence = 0;
};

}  // namespace

SolveResult MipBranchAndBound(const BigMModel& model, const BnbOptions& options) {
  const MpccModel& mp = model.mpcc;
  const Index m = mp.m;
  const Index zo = model.z_offset();
  SolveResult best;
  SolveStats stats;
  std::size_t branched = 0;
  NodeQueue<MipNode> nodes(options.strategy);
  nodes.Push(MipNode{});

  while (!nodes.empty()) {
    CheckBudget(stats, options.node_budget);
    MipNode node = nodes.Pop();

    std::vector<Eigen::RowVectorXd> rows;
    std::vector<double> rhs;
    std::vector<bool> is_fixed(m, false);
    for (const auto& [i, value] : node.fixed) {
      Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(model.num_vars());
      r(zo + i) = 1.0;
      rows.push_back(std::move(r));
      rhs.push_back(value);
      is_fixed[i] = true;
    }
    const LpSolution sol = SolveLp(WithEqualities(model.relaxation, rows, rhs));
    ++stats.nodes_explored;
    const bool leaf = static_cast<Index>(node.fixed.size()) == m;

    if (sol.status == LpStatus::kInfeasible) {
      ++stats.pruned_infeasible;
      continue;
    }
    Index branch = -1;
    if (sol.status == LpStatus::kUnbounded) {
      if (leaf) {
        best = SolveResult{};
        best.status = SolveStatus::kUnbounded;
        best.value = -kInf;
        break;
      }
      for (Index i = 0; i < m && branch < 0; ++i)
        if (!is_fixed[i]) branch = i;
    } else {
      const double v = sol.value;
      if (options.prune_by_bound && BoundPrunes(v, best.value)) {
        ++stats.pruned_bound;
        continue;
      }
      double closest = kInf;
      for (Index i = 0; i < m; ++i) {
        if (is_fixed[i]) continue;
        const double zi = sol.point(zo + i);
        if (std::abs(zi - std::round(zi)) <= kIntegralityTol) continue;
        const double dist = std::abs(zi - 0.5);
        if (dist < closest) {
          closest = dist;
          branch = i;
        }
      }
      const bool integral = branch < 0;
      if (integral) {
        if (v < best.value) {
          best = Incumbent(mp, sol.point.head(mp.num_vars()), v);
          if (options.on_incumbent) options.on_incumbent(best);
        }
        if (options.prune_by_feasibility || leaf) {
          if (!leaf) ++stats.pruned_sos1;
          continue;
        }
        for (Index i = 0; i < m && branch < 0; ++i)
          if (!is_fixed[i]) branch = i;
      }
    }

    ++branched;
    for (double value : {0.0, 1.0}) {
      MipNode child;
      child.fixed = node.fixed;
      child.fixed.emplace_back(branch, value);
      child.parent_bound = sol.optimal() ? sol.value : -kInf;
      nodes.Push(std::move(child));
    }
  }
  stats.leaves = stats.nodes_explored - branched;
  best.stats = stats;
  return best;
}

bool CheckBilevelFeasible(const BilevelInstance& inst, const Vector& x, const Vector& y,
                          double tol) {
  if (x.size() != inst.p || y.size() != inst.q)
    throw Error(ErrorCode::kMalformedProblem, "point does not match instance dimensions");
  const LpSolution follower = SolveLp(inst.FollowerLp(x));
  if (follower.status == LpStatus::kInfeasible)
    throw Error(ErrorCode::kFollowerInfeasible, "follower has no feasible reaction");
  if (inst.m_l > 0 && (inst.leader_lhs * x - inst.leader_rhs).maxCoeff() > tol) return false;
  if (inst.m_f > 0 &&
      (inst.follower_lhs_x * x + inst.follower_lhs_y * y - inst.follower_rhs).maxCoeff() > tol)
    return false;
  if (follower.status == LpStatus::kUnbounded) return false;
  return inst.FollowerCostAt(x).dot(y) <= follower.value + tol;
}

}  // namespace blp
