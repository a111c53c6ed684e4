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

#include "blp/response.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace blp {

namespace {

void RequireLeaderPoint(const BilevelInstance& inst, const Vector& x) {
  if (x.size() != inst.p)
    throw Error(ErrorCode::kMalformedProblem,
                "x has length " + std::to_string(x.size()) + ", expected " +
                    std::to_string(inst.p));
}

// Fallback loosening of the optimality cut.
double CutSlack(double value) { return 1e-9 * (1.0 + std::abs(value)); }

Polytope ReactionSet(const BilevelInstance& inst, const Vector& x, double rhs_value) {
  const LpProblem follower = inst.FollowerLp(x);
  Polytope poly;
  poly.eq_lhs = NoRows(inst.q);
  poly.eq_rhs = Vector(0);
  const Vector& c = follower.objective;
  if (c.lpNorm<Eigen::Infinity>() <= kTol) {
    poly.ineq_lhs = follower.ineq_lhs;
    poly.ineq_rhs = follower.ineq_rhs;
    return poly;
  }
  const Eigen::Index m = follower.ineq_lhs.rows();
  poly.ineq_lhs.resize(m + 1, inst.q);
  poly.ineq_rhs.resize(m + 1);
  poly.ineq_lhs.topRows(m) = follower.ineq_lhs;
  poly.ineq_rhs.head(m) = follower.ineq_rhs;
  poly.ineq_lhs.row(m) = c.transpose();
  poly.ineq_rhs(m) = rhs_value;
  return poly;
}

double FiniteValue(const BilevelInstance& inst, const Vector& x) {
  const double v = ValueFunction(inst, x);
  if (v == kInf)
    throw Error(ErrorCode::kFollowerInfeasible, "follower has no feasible reaction at x");
  if (v == -kInf)
    throw Error(ErrorCode::kFollowerUnbounded, "follower problem is unbounded at x");
  return v;
}

// min sign * d_l'y over the exact reaction set. The cut is loosened only if
// rounding in V(x) makes the exact face look empty.
LpSolution FaceLp(const BilevelInstance& inst, const Vector& x, double v, double sign) {
  for (double rhs : {v, v + CutSlack(v)}) {
    const Polytope face = ReactionSet(inst, x, rhs);
    LpSolution sol = SolveLp(
        {sign * inst.leader_cost_y, face.ineq_lhs, face.ineq_rhs, face.eq_lhs, face.eq_rhs});
    if (sol.status != LpStatus::kInfeasible) return sol;
  }
  return {};
}

double ExtendedValue(const LpSolution& sol) {
  if (sol.status == LpStatus::kUnbounded) return -kInf;
  if (sol.status == LpStatus::kInfeasible)
    throw Error(ErrorCode::kNumericalFailure, "exact reaction set lost feasibility");
  return sol.value;
}

}  // namespace

double ValueFunction(const BilevelInstance& inst, const Vector& x) {
  RequireLeaderPoint(inst, x);
  const LpSolution sol = SolveLp(inst.FollowerLp(x));
  switch (sol.status) {
    case LpStatus::kOptimal: return sol.value;
    case LpStatus::kInfeasible: return kInf;
    case LpStatus::kUnbounded: return -kInf;
  }
  return kInf;
}

ReactionPolytope BuildReactionPolytope(const BilevelInstance& inst, const Vector& x,
                                       double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw Error(ErrorCode::kInvalidSpec, "eps must be a finite nonnegative number");
  ReactionPolytope out;
  out.eps = eps;
  out.value = FiniteValue(inst, x);
  out.polytope = ReactionSet(inst, x, out.value + eps);
  out.bounded = IsBounded(out.polytope);
  out.vertices = EnumerateVertices(out.polytope);
  out.affine_dim = AffineDimension(out.vertices);
  return out;
}

const char* ApproachName(Approach approach) {
  switch (approach) {
    case Approach::kOptimistic: return "optimistic";
    case Approach::kPessimistic: return "pessimistic";
    case Approach::kNeutral: return "neutral";
  }
  return "?";
}

ApproachValues EvaluateApproaches(const BilevelInstance& inst, const Vector& x) {
  const double v = FiniteValue(inst, x);
  const double base = inst.leader_cost_x.dot(x);
  const Polytope face = ReactionSet(inst, x, v);
  if (!IsBounded(face))
    throw Error(ErrorCode::kUnboundedFace,
                "reaction set is unbounded; the neutral value is undefined");
  ApproachValues out;
  out.x = x;
  out.optimistic = base + ExtendedValue(FaceLp(inst, x, v, 1.0));
  out.pessimistic = base - ExtendedValue(FaceLp(inst, x, v, -1.0));
  out.centroid = CentroidFromVertices(face, EnumerateVertices(face));
  out.neutral = base + inst.leader_cost_y.dot(out.centroid);
  return out;
}

double LeaderValue(const BilevelInstance& inst, const Vector& x, Approach approach) {
  const double v = ValueFunction(inst, x);
  // No optimal reaction: the infimum over an empty set.
  if (!std::isfinite(v)) return kInf;
  const double base = inst.leader_cost_x.dot(x);
  switch (approach) {
    case Approach::kOptimistic:
      return base + ExtendedValue(FaceLp(inst, x, v, 1.0));
    case Approach::kPessimistic:
      return base - ExtendedValue(FaceLp(inst, x, v, -1.0));
    case Approach::kNeutral:
      return EvaluateApproaches(inst, x).neutral;
  }
  return kInf;
}

std::vector<ScanPoint> ScanLeader1d(const BilevelInstance& inst, double lo, double hi,
                                    int n_points, Approach approach) {
  if (inst.p != 1)
    throw Error(ErrorCode::kNotOneDimensional, "scan needs a single leader variable");
  if (n_points < 2 || !std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
    throw Error(ErrorCode::kInvalidSpec, "scan needs lo <= hi and at least 2 points");
  std::vector<ScanPoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) {
    // Endpoints are hit exactly.
    const double t = static_cast<double>(k) / (n_points - 1);
    const double xv = k == n_points - 1 ? hi : lo + t * (hi - lo);
    out.push_back({xv, LeaderValue(inst, Vector::Constant(1, xv), approach)});
  }
  return out;
}

std::string ScanToCsv(const std::vector<ScanPoint>& points) {
  std::string out = "x,value\n";
  char buf[64];
  auto num = [&](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& pt : points) out += num(pt.x) + "," + num(pt.value) + "\n";
  return out;
}

}  // namespace blp
