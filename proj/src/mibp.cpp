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

#include <string>

#include "blp/response.hpp"

namespace blp {

SolveResult SolveMibpLeaderInteger(const IntegerLeaderSpec& spec, const BnbOptions& options) {
  const BilevelInstance& inst = spec.instance;
  const std::size_t k = spec.indices.size();
  if (spec.lower.size() != k || spec.upper.size() != k)
    throw Error(ErrorCode::kInvalidSpec, "one lower and one upper bound per integer index");
  std::size_t grid = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (spec.indices[i] < 0 || spec.indices[i] >= inst.p)
      throw Error(ErrorCode::kInvalidSpec,
                  "integer index " + std::to_string(spec.indices[i]) + " is out of range");
    if (spec.lower[i] > spec.upper[i])
      throw Error(ErrorCode::kInvalidSpec, "integer bounds must satisfy lower <= upper");
    const auto width = static_cast<std::size_t>(spec.upper[i] - spec.lower[i]) + 1;
    if (width > spec.budget || grid > spec.budget / width)
      throw Error(ErrorCode::kBudgetExceeded,
                  "integer grid exceeds the budget of " + std::to_string(spec.budget));
    grid *= width;
  }

  // Two rows per fixed coordinate: x_i <= v and -x_i <= -v.
  BilevelInstance restricted = inst;
  const int base_rows = inst.m_l;
  restricted.m_l = base_rows + 2 * static_cast<int>(k);
  restricted.leader_lhs = Matrix::Zero(restricted.m_l, inst.p);
  restricted.leader_rhs = Vector::Zero(restricted.m_l);
  if (base_rows > 0) {
    restricted.leader_lhs.topRows(base_rows) = inst.leader_lhs;
    restricted.leader_rhs.head(base_rows) = inst.leader_rhs;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto r = base_rows + 2 * static_cast<Eigen::Index>(i);
    restricted.leader_lhs(r, spec.indices[i]) = 1.0;
    restricted.leader_lhs(r + 1, spec.indices[i]) = -1.0;
  }

  SolveResult best;
  SolveStats total;
  std::vector<long> v(spec.lower);
  for (std::size_t step = 0; step < grid; ++step) {
    for (std::size_t i = 0; i < k; ++i) {
      const auto r = base_rows + 2 * static_cast<Eigen::Index>(i);
      restricted.leader_rhs(r) = static_cast<double>(v[i]);
      restricted.leader_rhs(r + 1) = -static_cast<double>(v[i]);
    }
    SolveResult res = Sos1BranchAndBound(BuildMpcc(restricted), options);
    total += res.stats;
    if (res.status == SolveStatus::kUnbounded) {
      res.stats = total;
      return res;
    }
    if (res.optimal() && res.value < best.value) best = std::move(res);
    // Odometer increment, first index fastest.
    for (std::size_t i = 0; i < k; ++i) {
      if (v[i] < spec.upper[i]) {
        ++v[i];
        break;
      }
      v[i] = spec.lower[i];
    }
  }
  best.stats = total;
  return best;
}

}  // namespace blp
