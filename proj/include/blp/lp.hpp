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

#ifndef BLP_LP_HPP_
#define BLP_LP_HPP_

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "blp/error.hpp"

namespace blp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Feasibility and rank tolerance.
inline constexpr double kTol = 1e-9;
// Tolerance for cross-checks between independent computations.
inline constexpr double kCrossTol = 1e-7;

bool AllFinite(const Matrix& m);
bool AllFinite(const Vector& v);

// Empty matrix with `cols` columns, for problems without a given row block.
inline Matrix NoRows(Eigen::Index cols) { return Matrix(0, cols); }

// minimize objective' * y  s.t.  ineq_lhs * y <= ineq_rhs,  eq_lhs * y == eq_rhs.
// Variables are free; sign constraints are ordinary inequality rows.
struct LpProblem {
  Vector objective;
  Matrix ineq_lhs;
  Vector ineq_rhs;
  Matrix eq_lhs;
  Vector eq_rhs;

  Eigen::Index num_vars() const { return objective.size(); }

  // Builds a problem with no rows at all.
  static LpProblem Unconstrained(const Vector& objective);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* LpStatusName(LpStatus status);

// Dual multipliers follow the convention of the problem
//   max  -ineq_rhs' * dual_ineq + eq_rhs' * dual_eq
//   s.t. -ineq_lhs' * dual_ineq + eq_lhs' * dual_eq == objective,
//        dual_ineq >= 0,
// so for the follower LP (min c'y s.t. By <= b - Ax) the inequality duals are
// exactly the multipliers mu with -B' mu = c.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector point;
  double value = kInf;
  Vector dual_ineq;
  Vector dual_eq;
  int iterations = 0;

  bool optimal() const { return status == LpStatus::kOptimal; }
  double dual_value(const LpProblem& problem) const;
};

// Two-phase primal simplex on a dense tableau. Dantzig pricing switches to
// Bland's rule for good after 3 * (rows + cols) consecutive degenerate pivots.
// Throws kMalformedProblem on shape mismatch or non-finite data.
LpSolution SolveLp(const LpProblem& problem);

// {y : ineq_lhs * y <= ineq_rhs, eq_lhs * y == eq_rhs}.
struct Polytope {
  Matrix ineq_lhs;
  Vector ineq_rhs;
  Matrix eq_lhs;
  Vector eq_rhs;

  Eigen::Index dim() const {
    return ineq_lhs.cols() > 0 ? ineq_lhs.cols() : eq_lhs.cols();
  }

  static Polytope FromInequalities(const Matrix& lhs, const Vector& rhs);
  bool Contains(const Vector& point, double tol = 1e-8) const;
};

struct VertexOptions {
  // Maximum number of active sets examined.
  std::size_t budget = 2'000'000;
  // When set, an unbounded polyhedron raises kUnbounded instead of returning
  // its (possibly empty) vertex list.
  bool require_bounded = false;
};

// All extreme points, found by brute force over active-constraint subsets.
// Points closer than kCrossTol in the max-norm are merged.
std::vector<Vector> EnumerateVertices(const Polytope& poly,
                                      const VertexOptions& options = {});

// -1 for an empty list, otherwise the rank of (v_i - v_0).
int AffineDimension(const std::vector<Vector>& vertices);

// True iff the recession cone {d : A d <= 0, A_eq d = 0} is {0}.
bool IsBounded(const Polytope& poly);

// Centroid of the uniform measure on the polytope within its affine hull.
// Throws kEmptyPolytope or kUnboundedPolytope.
Vector Centroid(const Polytope& poly);

// Same, when the vertices are already known.
Vector CentroidFromVertices(const Polytope& poly,
                            const std::vector<Vector>& vertices);

}  // namespace blp

#endif  // BLP_LP_HPP_
