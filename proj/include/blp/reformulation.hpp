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

#ifndef BLP_REFORMULATION_HPP_
#define BLP_REFORMULATION_HPP_

#include <vector>

#include "blp/instance.hpp"

namespace blp {

// One complementarity pair: mu_i >= 0 against slack_i = (b_f - A_f x - B_f y)_i.
struct ComplementarityPair {
  Eigen::Index mu_var;     // column of mu_i in the lifted vector
  Eigen::Index slack_row;  // row of A_f x + B_f y <= b_f in relaxation.ineq_lhs
};

// Single-level KKT lift over (x, y, mu):
//   min c_l'x + d_l'y
//   s.t. -B_f' mu = c_f            (dual rows, equality block)
//        A_l x <= b_l              (primal rows)
//        A_f x + B_f y <= b_f
//        -mu <= 0                  (sign rows)
//        mu_i * slack_i = 0        (pairs, not part of `relaxation`)
struct MpccModel {
  BilevelInstance instance;
  Eigen::Index p = 0;
  Eigen::Index q = 0;
  Eigen::Index m = 0;
  LpProblem relaxation;
  std::vector<ComplementarityPair> pairs;

  Eigen::Index num_vars() const { return p + q + m; }
  Eigen::Index x_offset() const { return 0; }
  Eigen::Index y_offset() const { return p; }
  Eigen::Index mu_offset() const { return p + q; }

  Vector X(const Vector& z) const { return z.segment(x_offset(), p); }
  Vector Y(const Vector& z) const { return z.segment(y_offset(), q); }
  Vector Mu(const Vector& z) const { return z.segment(mu_offset(), m); }
  Vector Slack(const Vector& z) const;

  // Row [A_f,i  B_f,i  0] of the relaxation, for fixing slack_i = 0.
  Eigen::RowVectorXd SlackRow(Eigen::Index i) const;
};

// MPCC rows plus binaries z over (x, y, mu, z):
//   mu <= M (1 - z),  b_f - A_f x - B_f y <= M z,  0 <= z <= 1.
struct BigMModel {
  MpccModel mpcc;
  double big_m = 0.0;
  LpProblem relaxation;

  Eigen::Index num_vars() const { return mpcc.num_vars() + mpcc.m; }
  Eigen::Index z_offset() const { return mpcc.num_vars(); }
};

struct BigMCertificate {
  double dual_bound = 0.0;   // M1: max ||mu||_inf over ext(Lambda)
  double slack_bound = 0.0;  // M2: max slack over the joint region
  double big_m = 0.0;        // max(M1, M2)
  std::size_t extreme_points = 0;

  // M itself, or 1 when both bounds vanish (any positive M is then valid).
  double usable() const { return big_m > 0.0 ? big_m : 1.0; }
};

// Throws kNonstandardInstance when C_f is present.
MpccModel BuildMpcc(const BilevelInstance& inst);

// Throws kUnboundedJointRegion, kDualInfeasible, kNonstandardInstance, and
// kTooLarge when ext(Lambda) exceeds the enumeration budget.
BigMCertificate ComputeBigM(const BilevelInstance& inst);

// Throws kNonpositiveM.
BigMModel BuildBigMMip(const BilevelInstance& inst, double big_m);

}  // namespace blp

#endif  // BLP_REFORMULATION_HPP_
