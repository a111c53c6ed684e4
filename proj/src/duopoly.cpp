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

#include "blp/duopoly.hpp"

#include <algorithm>
#include <cmath>

#include "blp/error.hpp"

namespace blp {

namespace {

// (p0 - c) / alpha: the total quantity at which price meets cost.
double Reach(const DuopolyParams& params) { return (params.p0 - params.c) / params.alpha; }

double Capacity(const DuopolyParams& params) {
  if (!params.capacity)
    throw Error(ErrorCode::kInvalidParams, "the capacity game needs a capacity K");
  return *params.capacity;
}

void FillProfits(const DuopolyParams& params, EquilibriumReport& report) {
  const auto [q1, q2] = report.quantities;
  report.profits = {Profit(params, q1, q2), Profit(params, q2, q1)};
}

}  // namespace

void RequireValidParams(const DuopolyParams& params) {
  const bool finite = std::isfinite(params.p0) && std::isfinite(params.alpha) &&
                      std::isfinite(params.c) &&
                      (!params.capacity || std::isfinite(*params.capacity));
  if (!finite) throw Error(ErrorCode::kInvalidParams, "parameters must be finite");
  if (!(params.c > 0.0)) throw Error(ErrorCode::kInvalidParams, "cost c must be positive");
  if (!(params.p0 > params.c))
    throw Error(ErrorCode::kInvalidParams, "price intercept p0 must exceed c");
  if (!(params.alpha > 0.0))
    throw Error(ErrorCode::kInvalidParams, "slope alpha must be positive");
  if (params.capacity && !(*params.capacity > 0.0))
    throw Error(ErrorCode::kInvalidParams, "capacity K must be positive");
}

double Profit(const DuopolyParams& params, double own, double other) {
  return (params.p0 - params.alpha * (own + other) - params.c) * own;
}

double CournotBestResponse(const DuopolyParams& params, double q_other) {
  RequireValidParams(params);
  if (!(q_other >= 0.0))
    throw Error(ErrorCode::kInvalidParams, "opponent quantity must be nonnegative");
  return std::max(0.0, (Reach(params) - q_other) / 2.0);
}

double GnepBestResponse(const DuopolyParams& params, double q_other) {
  RequireValidParams(params);
  const double k = Capacity(params);
  if (!(q_other >= 0.0))
    throw Error(ErrorCode::kInvalidParams, "opponent quantity must be nonnegative");
  if (q_other > k)
    throw Error(ErrorCode::kInfeasibleOpponent, "opponent quantity exceeds the capacity");
  return std::max(0.0, std::min((Reach(params) - q_other) / 2.0, k - q_other));
}

const char* DuopolyModelName(DuopolyModel model) {
  switch (model) {
    case DuopolyModel::kCournot: return "Cournot";
    case DuopolyModel::kStackelberg: return "Stackelberg";
    case DuopolyModel::kGnepCapacity: return "GnepCapacity";
  }
  return "?";
}

EquilibriumReport CournotEquilibrium(const DuopolyParams& params) {
  RequireValidParams(params);
  EquilibriumReport r;
  r.model = DuopolyModel::kCournot;
  const double q = Reach(params) / 3.0;
  r.quantities = {q, q};
  FillProfits(params, r);
  return r;
}

EquilibriumReport StackelbergEquilibrium(const DuopolyParams& params) {
  RequireValidParams(params);
  EquilibriumReport r;
  r.model = DuopolyModel::kStackelberg;
  r.quantities = {Reach(params) / 2.0, Reach(params) / 4.0};
  FillProfits(params, r);
  return r;
}

EquilibriumReport GnepEquilibria(const DuopolyParams& params) {
  RequireValidParams(params);
  const double k = Capacity(params);
  const double a = Reach(params);
  EquilibriumReport r = CournotEquilibrium(params);
  r.model = DuopolyModel::kGnepCapacity;
  if (2.0 * a / 3.0 <= k) return r;
  // On q1 + q2 = K, q_i = K - q_j is a best response iff the unconstrained
  // response (a - q_j) / 2 is at least K - q_j, i.e. q_j >= 2K - a.
  const double lo = std::max(0.0, 2.0 * k - a);
  r.point_valued = false;
  r.quantities = {};
  r.profits = {};
  r.segment = {{{lo, k - lo}, {k - lo, lo}}};
  return r;
}

bool IsGnepEquilibrium(const DuopolyParams& params, double q1, double q2, double tol) {
  RequireValidParams(params);
  const double k = Capacity(params);
  if (q1 < -tol || q2 < -tol || q1 + q2 > k + tol) return false;
  const double c1 = std::clamp(q1, 0.0, k), c2 = std::clamp(q2, 0.0, k);
  return std::abs(q1 - GnepBestResponse(params, c2)) <= tol &&
         std::abs(q2 - GnepBestResponse(params, c1)) <= tol;
}

nlohmann::ordered_json ReportToJson(const EquilibriumReport& report) {
  nlohmann::ordered_json j;
  j["model"] = DuopolyModelName(report.model);
  if (report.point_valued) {
    j["quantities"] = report.quantities;
    j["profits"] = report.profits;
  } else {
    j["segment"] = report.segment;
  }
  return j;
}

}  // namespace blp
