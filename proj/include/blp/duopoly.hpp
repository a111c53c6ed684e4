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

#ifndef BLP_DUOPOLY_HPP_
#define BLP_DUOPOLY_HPP_

#include <array>
#include <optional>

#include "json.hpp"

namespace blp {

// Linear inverse demand p(Q) = p0 - alpha * Q and constant marginal cost c.
struct DuopolyParams {
  double p0 = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  std::optional<double> capacity;  // shared market capacity K
};

// Throws kInvalidParams unless p0 > c > 0, alpha > 0 and K > 0 when present.
void RequireValidParams(const DuopolyParams& params);

// Profit of a firm producing `own` while the other produces `other`.
double Profit(const DuopolyParams& params, double own, double other);

// max{0, (p0 - c - alpha * q) / (2 alpha)}.
double CournotBestResponse(const DuopolyParams& params, double q_other);

// max{0, min{(p0 - c - alpha * q) / (2 alpha), K - q}}. Throws
// kInfeasibleOpponent when q exceeds K.
double GnepBestResponse(const DuopolyParams& params, double q_other);

enum class DuopolyModel { kCournot, kStackelberg, kGnepCapacity };

const char* DuopolyModelName(DuopolyModel model);

struct EquilibriumReport {
  DuopolyModel model = DuopolyModel::kCournot;
  // False when the equilibria form the segment between the two endpoints.
  bool point_valued = true;
  std::array<double, 2> quantities{};
  std::array<double, 2> profits{};
  std::array<std::array<double, 2>, 2> segment{};
};

EquilibriumReport CournotEquilibrium(const DuopolyParams& params);

// Firm 1 moves first.
EquilibriumReport StackelbergEquilibrium(const DuopolyParams& params);

// Equilibria of the capacity-constrained game. When the capacity binds they
// form a segment on q1 + q2 = K; otherwise the report is the Cournot point.
EquilibriumReport GnepEquilibria(const DuopolyParams& params);

// Each quantity is a best response to the other within tol.
bool IsGnepEquilibrium(const DuopolyParams& params, double q1, double q2, double tol);

nlohmann::ordered_json ReportToJson(const EquilibriumReport& report);

}  // namespace blp

#endif  // BLP_DUOPOLY_HPP_
