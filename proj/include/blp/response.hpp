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

#ifndef BLP_RESPONSE_HPP_
#define BLP_RESPONSE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "blp/bnb.hpp"
#include "blp/instance.hpp"

namespace blp {

// Follower optimum at x with the effective cost c_f(x). +inf when the follower
// has no feasible point, -inf when it is unbounded.
double ValueFunction(const BilevelInstance& inst, const Vector& x);

// The eps-optimal reactions {y : B_f y <= b_f - A_f x, c_f(x)'y <= V(x) + eps},
// in y coordinates. The cut row is dropped when c_f(x) vanishes.
struct ReactionPolytope {
  Polytope polytope;
  double eps = 0.0;
  double value = 0.0;  // V(x)
  bool bounded = true;
  std::vector<Vector> vertices;
  int affine_dim = -1;
};

// Throws kFollowerInfeasible or kFollowerUnbounded.
ReactionPolytope BuildReactionPolytope(const BilevelInstance& inst, const Vector& x,
                                       double eps);

enum class Approach { kOptimistic, kPessimistic, kNeutral };

const char* ApproachName(Approach approach);

struct ApproachValues {
  Vector x;
  double optimistic = kInf;
  double pessimistic = kInf;
  double neutral = kInf;
  Vector centroid;  // of the exact reaction set
};

// All three leader values at x. Throws kFollowerInfeasible,
// kFollowerUnbounded, or kUnboundedFace when the reaction set is unbounded.
ApproachValues EvaluateApproaches(const BilevelInstance& inst, const Vector& x);

// Pointwise leader value for one approach. Returns +inf where the follower
// has no optimal reaction, and +inf for the pessimistic value over an
// unbounded reaction set. The neutral value throws kUnboundedFace there.
double LeaderValue(const BilevelInstance& inst, const Vector& x, Approach approach);

struct ScanPoint {
  double x = 0.0;
  double value = 0.0;
};

// Uniform grid of n_points over [lo, hi]. Throws kNotOneDimensional when p != 1.
std::vector<ScanPoint> ScanLeader1d(const BilevelInstance& inst, double lo, double hi,
                                    int n_points, Approach approach);

// "x,value" header, one row per point, 17 significant digits.
std::string ScanToCsv(const std::vector<ScanPoint>& points);

struct IntegerLeaderSpec {
  BilevelInstance instance;
  std::vector<int> indices;  // leader coordinates restricted to integers
  std::vector<long> lower;
  std::vector<long> upper;
  std::size_t budget = 1'000'000;  // maximum number of grid points
};

// Solves the optimistic problem once per integer assignment, with the
// assignment appended to the leader rows as equality pairs, and keeps the
// best. Throws kBudgetExceeded when the grid is larger than the budget.
SolveResult SolveMibpLeaderInteger(const IntegerLeaderSpec& spec,
                                   const BnbOptions& options = {});

}  // namespace blp

#endif  // BLP_RESPONSE_HPP_
