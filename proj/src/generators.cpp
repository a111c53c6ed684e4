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

#include <algorithm>
#include <cmath>
#include <random>

#include "blp/instance.hpp"

namespace blp {

GeneratedInstance GenerateKnapsack(const KnapsackSpec& spec) {
  const int n = static_cast<int>(spec.weights.size());
  if (n == 0) throw Error(ErrorCode::kInvalidSpec, "knapsack needs at least one weight");
  for (long a : spec.weights)
    if (a < 1) throw Error(ErrorCode::kInvalidSpec, "weights must be >= 1");
  if (spec.capacity < 0) throw Error(ErrorCode::kInvalidSpec, "capacity must be >= 0");
  if (spec.penalty && !(*spec.penalty > 0.0))
    throw Error(ErrorCode::kInvalidSpec, "penalty must be positive");

  const long beta = *std::max_element(spec.weights.begin(), spec.weights.end());
  const double penalty =
      spec.penalty.value_or(static_cast<double>(beta) * static_cast<double>(beta) + 1.0);

  Vector a(n);
  for (int i = 0; i < n; ++i) a(i) = static_cast<double>(spec.weights[i]);
  const Matrix eye = Matrix::Identity(n, n);

  BilevelInstance inst;
  inst.p = n;
  inst.q = n;
  inst.m_l = 1 + 2 * n;
  inst.m_f = 3 * n;
  inst.leader_cost_x = -a;
  inst.leader_cost_y = Vector::Constant(n, penalty);
  // a'x <= capacity, x <= 1, -x <= 0.
  inst.leader_lhs.resize(inst.m_l, n);
  inst.leader_lhs << a.transpose(), eye, -eye;
  inst.leader_rhs.resize(inst.m_l);
  inst.leader_rhs << static_cast<double>(spec.capacity), Vector::Ones(n), Vector::Zero(n);
  // y - x <= 0, y + x <= 1, -y <= 0.
  inst.follower_cost = -Vector::Ones(n);
  inst.follower_lhs_x.resize(inst.m_f, n);
  inst.follower_lhs_x << -eye, eye, Matrix::Zero(n, n);
  inst.follower_lhs_y.resize(inst.m_f, n);
  inst.follower_lhs_y << eye, eye, -eye;
  inst.follower_rhs.resize(inst.m_f);
  inst.follower_rhs << Vector::Zero(n), Vector::Ones(n), Vector::Zero(n);
  inst.meta = {{"generator", "knapsack"},
               {"weights", spec.weights},
               {"capacity", spec.capacity},
               {"penalty", penalty}};

  GeneratedInstance out{std::move(inst), penalty, {}};
  if (beta < 2)
    out.diagnostics.push_back({Diagnostic::Kind::kTrivialCase, false,
                               "all weights equal 1; the reduction assumes max weight >= 2"});
  return out;
}

BilevelInstance GenerateRandomBounded(const RandomSpec& spec) {
  if (spec.p < 1 || spec.q < 1 || spec.extra_rows < 0)
    throw Error(ErrorCode::kInvalidSpec, "dimensions must be >= 1");
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius))
    throw Error(ErrorCode::kInvalidSpec, "radius must be positive");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> coef(-5, 5);
  auto draw = [&](Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = coef(rng);
    return v;
  };

  const int p = spec.p;
  const int q = spec.q;
  const int k = spec.extra_rows;
  const double r = spec.radius;

  BilevelInstance inst;
  inst.p = p;
  inst.q = q;
  inst.m_l = 2 * p;
  inst.m_f = k + 2 * q;
  inst.leader_cost_x = draw(p);
  inst.leader_cost_y = draw(q);
  inst.follower_cost = draw(q);
  inst.leader_lhs.resize(2 * p, p);
  inst.leader_lhs << Matrix::Identity(p, p), -Matrix::Identity(p, p);
  inst.leader_rhs = Vector::Constant(2 * p, r);

  inst.follower_lhs_x = Matrix::Zero(inst.m_f, p);
  inst.follower_lhs_y = Matrix::Zero(inst.m_f, q);
  inst.follower_rhs.resize(inst.m_f);
  for (int i = 0; i < k; ++i) {
    const Vector ax = draw(p);
    const Vector ay = draw(q);
    inst.follower_lhs_x.row(i) = ax.transpose();
    inst.follower_lhs_y.row(i) = ay.transpose();
    // y = 0 stays strictly feasible for every x in the leader box.
    const int reach = static_cast<int>(std::ceil(ay.lpNorm<1>() * r));
    std::uniform_int_distribution<int> pad(1, std::max(1, reach));
    inst.follower_rhs(i) = ax.lpNorm<1>() * r + pad(rng);
  }
  inst.follower_lhs_y.bottomRows(2 * q) << Matrix::Identity(q, q), -Matrix::Identity(q, q);
  inst.follower_rhs.tail(2 * q).setConstant(r);
  inst.meta = {{"generator", "random"}, {"seed", spec.seed}, {"radius", r}};
  return inst;
}

}  // namespace blp
