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

#include <cmath>
#include <limits>
#include <random>

#include "blp/duopoly.hpp"
#include "blp/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace blp;

namespace {

const DuopolyParams kBase{10.0, 1.0, 1.0, std::nullopt};
const DuopolyParams kCapped{10.0, 1.0, 1.0, 5.0};

// Best response by direct maximization of the profit over the feasible range.
double OracleResponse(const DuopolyParams& prm, double other, double cap) {
  return testing::MaximizeConcave([&](double q) { return Profit(prm, q, other); }, 0.0, cap,
                                  1e-11);
}

DuopolyParams Draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cost(0.1, 5.0), margin(0.5, 20.0), slope(0.2, 3.0),
      share(0.2, 1.3);
  DuopolyParams prm;
  prm.c = cost(rng);
  prm.p0 = prm.c + margin(rng);
  prm.alpha = slope(rng);
  prm.capacity = share(rng) * 2.0 * (prm.p0 - prm.c) / (3.0 * prm.alpha);
  return prm;
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kMalformedProblem;
}

}  // namespace

TEST_CASE("cournot") {
  CHECK(CournotBestResponse(kBase, 3) == 3.0);
  CHECK(CournotBestResponse(kBase, 9) == 0.0);
  CHECK(CournotBestResponse(kBase, 1e9) == 0.0);
  const auto r = CournotEquilibrium(kBase);
  CHECK(r.point_valued);
  CHECK(r.quantities[0] == doctest::Approx(3.0));
  CHECK(r.quantities[1] == doctest::Approx(3.0));
  CHECK(r.profits[0] == doctest::Approx(9.0));
  CHECK(r.profits[1] == doctest::Approx(9.0));
  CHECK(std::abs(CournotBestResponse(kBase, r.quantities[1]) - r.quantities[0]) <= 1e-12);
  CHECK(std::abs(OracleResponse(kBase, 3.0, 9.0) - 3.0) <= 1e-6);
}

TEST_CASE("stackelberg") {
  const auto r = StackelbergEquilibrium(kBase);
  CHECK(r.quantities[0] == doctest::Approx(4.5));
  CHECK(r.quantities[1] == doctest::Approx(2.25));
  CHECK(r.profits[0] == doctest::Approx(10.125));
  CHECK(r.profits[1] == doctest::Approx(5.0625));
  CHECK(r.profits[0] >= CournotEquilibrium(kBase).profits[0]);
  CHECK(r.quantities[1] == CournotBestResponse(kBase, r.quantities[0]));
  // The leader's choice maximizes its profit against the follower's response.
  const double lead = testing::MaximizeConcave(
      [](double q) { return Profit(kBase, q, CournotBestResponse(kBase, q)); }, 0.0, 9.0, 1e-11);
  CHECK(std::abs(lead - 4.5) <= 1e-6);
}

TEST_CASE("capacity game") {
  CHECK(GnepBestResponse(kCapped, 0) == 4.5);
  CHECK(GnepBestResponse(kCapped, 0.5) == 4.25);
  CHECK(GnepBestResponse(kCapped, 1) == 4.0);
  CHECK(GnepBestResponse(kCapped, 3) == 2.0);
  CHECK(GnepBestResponse(kCapped, 5) == 0.0);
  CHECK(CodeOf([] { GnepBestResponse(kCapped, 5.5); }) == ErrorCode::kInfeasibleOpponent);
  CHECK(CodeOf([] { GnepBestResponse(kBase, 1); }) == ErrorCode::kInvalidParams);

  const auto r = GnepEquilibria(kCapped);
  CHECK_FALSE(r.point_valued);
  CHECK(r.segment[0][0] == doctest::Approx(1.0));
  CHECK(r.segment[0][1] == doctest::Approx(4.0));
  CHECK(r.segment[1][0] == doctest::Approx(4.0));
  CHECK(r.segment[1][1] == doctest::Approx(1.0));
  CHECK(IsGnepEquilibrium(kCapped, 3, 2, 1e-9));
  CHECK_FALSE(IsGnepEquilibrium(kCapped, 0.5, 4.5, 1e-9));
  CHECK_FALSE(IsGnepEquilibrium(kCapped, 2, 2, 1e-9));

  // Slack capacity leaves the Cournot point.
  DuopolyParams loose = kCapped;
  loose.capacity = 6.0;
  const auto c = GnepEquilibria(loose);
  CHECK(c.point_valued);
  CHECK(c.quantities[0] == doctest::Approx(3.0));
  CHECK(IsGnepEquilibrium(loose, 3, 3, 1e-9));
}

TEST_CASE("invalid parameters") {
  CHECK(CodeOf([] { CournotEquilibrium({1.0, 1.0, 1.0, std::nullopt}); }) ==
        ErrorCode::kInvalidParams);
  CHECK(CodeOf([] { CournotEquilibrium({10.0, 0.0, 1.0, std::nullopt}); }) ==
        ErrorCode::kInvalidParams);
  CHECK(CodeOf([] { CournotEquilibrium({10.0, 1.0, 0.0, std::nullopt}); }) ==
        ErrorCode::kInvalidParams);
  CHECK(CodeOf([] { GnepEquilibria({10.0, 1.0, 1.0, -1.0}); }) == ErrorCode::kInvalidParams);
  CHECK(CodeOf([] { CournotBestResponse(kBase, -1); }) == ErrorCode::kInvalidParams);
}

TEST_CASE("report json") {
  CHECK(ReportToJson(CournotEquilibrium(kBase)).dump() ==
        R"({"model":"Cournot","quantities":[3.0,3.0],"profits":[9.0,9.0]})");
  CHECK(ReportToJson(GnepEquilibria(kCapped)).dump() ==
        R"({"model":"GnepCapacity","segment":[[1.0,4.0],[4.0,1.0]]})");
}

TEST_CASE("property: fixed points, oracle agreement, dominance") {
  std::mt19937_64 rng(7);
  for (int draw = 0; draw < 100; ++draw) {
    const DuopolyParams prm = Draw(rng);
    DuopolyParams open = prm;
    open.capacity.reset();
    const double reach = (prm.p0 - prm.c) / prm.alpha;

    const auto cn = CournotEquilibrium(open);
    CHECK(std::abs(CournotBestResponse(open, cn.quantities[1]) - cn.quantities[0]) <= 1e-9);
    CHECK(std::abs(CournotBestResponse(open, cn.quantities[0]) - cn.quantities[1]) <= 1e-9);
    const auto st = StackelbergEquilibrium(open);
    CHECK(std::abs(CournotBestResponse(open, st.quantities[0]) - st.quantities[1]) <= 1e-9);
    CHECK(st.profits[0] >= cn.profits[0] - 1e-12);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double k = *prm.capacity;
    for (int s = 0; s < 5; ++s) {
      const double other = unit(rng) * 1.2 * reach;
      CHECK(std::abs(CournotBestResponse(open, other) - OracleResponse(open, other, reach)) <=
            1e-6);
      const double q = unit(rng) * k;
      CHECK(std::abs(GnepBestResponse(prm, q) - OracleResponse(prm, q, k - q)) <= 1e-6);
    }

    const auto eq = GnepEquilibria(prm);
    if (eq.point_valued) {
      CHECK(2.0 * reach / 3.0 <= k);
      CHECK(IsGnepEquilibrium(prm, eq.quantities[0], eq.quantities[1], 1e-9));
      continue;
    }
    const auto [e0, e1] = eq.segment;
    CHECK(std::abs(e0[0] + e0[1] - k) <= 1e-12);
    for (int s = 0; s < 20; ++s) {
      const double t = s / 19.0;
      const double q1 = e0[0] + t * (e1[0] - e0[0]);
      const double q2 = k - q1;
      CHECK(std::abs(GnepBestResponse(prm, q2) - q1) <= 1e-9);
      CHECK(std::abs(GnepBestResponse(prm, q1) - q2) <= 1e-9);
    }
    // Just past either endpoint the mutual response breaks down.
    if (e0[0] > 1e-3) CHECK_FALSE(IsGnepEquilibrium(prm, e0[0] - 1e-3, e0[1] + 1e-3, 1e-9));
    if (e1[1] > 1e-3) CHECK_FALSE(IsGnepEquilibrium(prm, e1[0] + 1e-3, e1[1] - 1e-3, 1e-9));

    // Grid search for mutual best responses with the numerical oracle.
    double lo = std::numeric_limits<double>::infinity(), hi = -std::numeric_limits<double>::infinity();
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double q1 = k * i / n;
      const double q2 = OracleResponse(prm, q1, k - q1);
      if (std::abs(OracleResponse(prm, q2, k - q2) - q1) <= 1e-6) {
        lo = std::min(lo, q1);
        hi = std::max(hi, q1);
      }
    }
    CHECK(std::abs(lo - e0[0]) <= k / n + 1e-6);
    CHECK(std::abs(hi - e1[0]) <= k / n + 1e-6);
  }
}
