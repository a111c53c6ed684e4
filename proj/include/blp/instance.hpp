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

#ifndef BLP_INSTANCE_HPP_
#define BLP_INSTANCE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blp/lp.hpp"
#include "json.hpp"

namespace blp {

// Linear bilevel program, both levels minimizing:
//
//   min_{x,y}  c_l' x + d_l' y
//   s.t.       A_l x <= b_l,
//              y solves  min_y c_f' y  s.t.  A_f x + B_f y <= b_f.
//
// The optional coupling matrix C_f (p x q) turns the follower cost into
// c_f + C_f' x. Only the pointwise evaluators accept it; the reformulations
// and global solvers reject such instances.
struct BilevelInstance {
  int p = 0;
  int q = 0;
  int m_l = 0;
  int m_f = 0;
  Vector leader_cost_x;    // c_l
  Vector leader_cost_y;    // d_l
  Matrix leader_lhs;       // A_l
  Vector leader_rhs;       // b_l
  Vector follower_cost;    // c_f
  Matrix follower_lhs_x;   // A_f
  Matrix follower_lhs_y;   // B_f
  Vector follower_rhs;     // b_f
  std::optional<Matrix> follower_cost_coupling;  // C_f
  nlohmann::json meta;     // null when absent

  bool nonstandard() const { return follower_cost_coupling.has_value(); }

  // c_f + C_f' x.
  Vector FollowerCostAt(const Vector& x) const;

  // min c_f(x)' y  s.t.  B_f y <= b_f - A_f x.
  LpProblem FollowerLp(const Vector& x) const;

  // The joint region D = {A_l x <= b_l, A_f x + B_f y <= b_f} over (x, y).
  Polytope JointRegion() const;

  double LeaderObjective(const Vector& x, const Vector& y) const {
    return leader_cost_x.dot(x) + leader_cost_y.dot(y);
  }

  friend bool operator==(const BilevelInstance& a, const BilevelInstance& b);
};

struct Diagnostic {
  enum class Kind {
    kShapeMismatch,
    kNonFinite,
    kEmptyJointRegion,
    kUnboundedJointRegion,
    kTrivialCase,
  };
  Kind kind;
  bool fatal;
  std::string message;
};

const char* DiagnosticKindName(Diagnostic::Kind kind);

// Shape, finiteness and joint-region checks. Never modifies the instance.
std::vector<Diagnostic> Validate(const BilevelInstance& inst);

bool HasFatal(const std::vector<Diagnostic>& diagnostics);

// Throws kMalformedProblem listing the first fatal diagnostic, if any.
void RequireValid(const BilevelInstance& inst);

std::string ToJson(const BilevelInstance& inst);

// Throws kParseError (with line or field context) or kSchemaError (missing or
// unknown keys).
BilevelInstance FromJson(const std::string& text);

BilevelInstance LoadInstance(const std::string& path);
void SaveInstance(const BilevelInstance& inst, const std::string& path);

// Knapsack-to-bilevel reduction. penalty == nullopt means beta^2 + 1 with
// beta = max weight.
struct KnapsackSpec {
  std::vector<long> weights;
  long capacity = 0;
  std::optional<double> penalty;
};

struct RandomSpec {
  int p = 1;
  int q = 1;
  int extra_rows = 2;  // follower rows besides the y box
  std::uint64_t seed = 1;
  double radius = 5.0;
};

struct GeneratedInstance {
  BilevelInstance instance;
  double penalty = 0.0;
  std::vector<Diagnostic> diagnostics;
};

// max a'x - M sum(y) s.t. a'x <= capacity, x in [0,1]^n, y maximizing sum(y)
// over y <= x, y <= 1 - x, y >= 0; emitted in minimize form.
GeneratedInstance GenerateKnapsack(const KnapsackSpec& spec);

// Seeded instance with compact joint region and a follower that is feasible
// for every leader-feasible x.
BilevelInstance GenerateRandomBounded(const RandomSpec& spec);

}  // namespace blp

#endif  // BLP_INSTANCE_HPP_
