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

#include "blp/reformulation.hpp"

#include <algorithm>
#include <cmath>

namespace blp {

namespace {

using Index = Eigen::Index;

// An empty joint region is allowed through when building models; the
// solvers then report Infeasible.
void RequireStandard(const BilevelInstance& inst, bool allow_empty) {
  if (inst.nonstandard())
    throw Error(ErrorCode::kNonstandardInstance,
                "follower cost depends on the leader decision (C_f present)");
  for (const auto& d : Validate(inst)) {
    if (!d.fatal) continue;
    if (allow_empty && d.kind == Diagnostic::Kind::kEmptyJointRegion) continue;
    throw Error(ErrorCode::kMalformedProblem,
                std::string(DiagnosticKindName(d.kind)) + ": " + d.message);
  }
}

}  // namespace

Vector MpccModel::Slack(const Vector& z) const {
  const BilevelInstance& in = instance;
  Vector s = in.follower_rhs;
  if (m > 0) s -= in.follower_lhs_x * X(z) + in.follower_lhs_y * Y(z);
  return s;
}

Eigen::RowVectorXd MpccModel::SlackRow(Index i) const {
  return relaxation.ineq_lhs.row(pairs[i].slack_row);
}

MpccModel BuildMpcc(const BilevelInstance& inst) {
  RequireStandard(inst, true);
  MpccModel model;
  model.instance = inst;
  model.p = inst.p;
  model.q = inst.q;
  model.m = inst.m_f;
  const Index p = model.p, q = model.q, m = model.m, n = model.num_vars();
  const Index m_l = inst.m_l;

  LpProblem& lp = model.relaxation;
  lp.objective = Vector::Zero(n);
  lp.objective.head(p) = inst.leader_cost_x;
  lp.objective.segment(p, q) = inst.leader_cost_y;

  lp.eq_lhs = Matrix::Zero(q, n);
  if (m > 0) lp.eq_lhs.rightCols(m) = -inst.follower_lhs_y.transpose();
  lp.eq_rhs = inst.follower_cost;

  lp.ineq_lhs = Matrix::Zero(m_l + 2 * m, n);
  lp.ineq_rhs = Vector::Zero(m_l + 2 * m);
  if (m_l > 0) {
    lp.ineq_lhs.block(0, 0, m_l, p) = inst.leader_lhs;
    lp.ineq_rhs.head(m_l) = inst.leader_rhs;
  }
  if (m > 0) {
    lp.ineq_lhs.block(m_l, 0, m, p) = inst.follower_lhs_x;
    lp.ineq_lhs.block(m_l, p, m, q) = inst.follower_lhs_y;
    lp.ineq_rhs.segment(m_l, m) = inst.follower_rhs;
    lp.ineq_lhs.block(m_l + m, p + q, m, m) = -Matrix::Identity(m, m);
  }
  for (Index i = 0; i < m; ++i) model.pairs.push_back({p + q + i, m_l + i});
  return model;
}

BigMCertificate ComputeBigM(const BilevelInstance& inst) {
  RequireStandard(inst, false);
  const Index p = inst.p, q = inst.q, m = inst.m_f;
  // Lambda = {mu : -B_f' mu = c_f, mu >= 0}.
  Polytope lambda{-Matrix::Identity(m, m), Vector::Zero(m),
                  -inst.follower_lhs_y.transpose(), inst.follower_cost};
  if (!SolveLp({Vector::Zero(m), lambda.ineq_lhs, lambda.ineq_rhs, lambda.eq_lhs,
                lambda.eq_rhs})
           .optimal())
    throw Error(ErrorCode::kDualInfeasible,
                "follower dual is infeasible; the follower LP is never bounded");

  const Polytope joint = inst.JointRegion();
  if (!IsBounded(joint))
    throw Error(ErrorCode::kUnboundedJointRegion,
                "a valid M needs a compact joint region");

  BigMCertificate cert;
  const auto ext = EnumerateVertices(lambda);
  cert.extreme_points = ext.size();
  for (const auto& mu : ext)
    cert.dual_bound = std::max(cert.dual_bound, mu.size() ? mu.lpNorm<Eigen::Infinity>() : 0.0);

  // One LP per follower row: max (b_f - A_f x - B_f y)_i over the joint region.
  for (Index i = 0; i < m; ++i) {
    Vector obj(p + q);
    obj << inst.follower_lhs_x.row(i).transpose(), inst.follower_lhs_y.row(i).transpose();
    const LpSolution sol =
        SolveLp({obj, joint.ineq_lhs, joint.ineq_rhs, NoRows(p + q), Vector(0)});
    if (!sol.optimal()) continue;  // empty joint region: no slack to bound
    cert.slack_bound = std::max(cert.slack_bound, inst.follower_rhs(i) - sol.value);
  }
  cert.big_m = std::max(cert.dual_bound, cert.slack_bound);
  return cert;
}

BigMModel BuildBigMMip(const BilevelInstance& inst, double big_m) {
  if (!(big_m > 0.0) || !std::isfinite(big_m))
    throw Error(ErrorCode::kNonpositiveM, "M must be a positive finite number");
  BigMModel model;
  model.mpcc = BuildMpcc(inst);
  model.big_m = big_m;
  const MpccModel& mp = model.mpcc;
  const Index n0 = mp.num_vars(), m = mp.m, n = model.num_vars();
  const Index zo = model.z_offset();
  const LpProblem& base = mp.relaxation;

  LpProblem& lp = model.relaxation;
  lp.objective = Vector::Zero(n);
  lp.objective.head(n0) = base.objective;
  lp.eq_lhs = Matrix::Zero(base.eq_lhs.rows(), n);
  lp.eq_lhs.leftCols(n0) = base.eq_lhs;
  lp.eq_rhs = base.eq_rhs;

  const Index r0 = base.ineq_lhs.rows();
  lp.ineq_lhs = Matrix::Zero(r0 + 4 * m, n);
  lp.ineq_rhs = Vector::Zero(r0 + 4 * m);
  lp.ineq_lhs.topLeftCorner(r0, n0) = base.ineq_lhs;
  lp.ineq_rhs.head(r0) = base.ineq_rhs;
  for (Index i = 0; i < m; ++i) {
    // mu_i + M z_i <= M
    lp.ineq_lhs(r0 + i, mp.pairs[i].mu_var) = 1.0;
    lp.ineq_lhs(r0 + i, zo + i) = big_m;
    lp.ineq_rhs(r0 + i) = big_m;
    // -(A_f x + B_f y)_i - M z_i <= -b_f,i
    lp.ineq_lhs.block(r0 + m + i, 0, 1, n0) = -mp.SlackRow(i);
    lp.ineq_lhs(r0 + m + i, zo + i) = -big_m;
    lp.ineq_rhs(r0 + m + i) = -inst.follower_rhs(i);
    // z_i <= 1, -z_i <= 0
    lp.ineq_lhs(r0 + 2 * m + i, zo + i) = 1.0;
    lp.ineq_rhs(r0 + 2 * m + i) = 1.0;
    lp.ineq_lhs(r0 + 3 * m + i, zo + i) = -1.0;
  }
  return model;
}

}  // namespace blp
