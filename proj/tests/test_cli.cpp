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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "blp/instance.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace blp;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded unless `merge` is set.
Run Cli(const std::string& args, bool merge = false, const std::string& env = "") {
  const std::string cmd = env + " \"" + std::string(BLP_CLI_PATH) + "\" " + args +
                          (merge ? " 2>&1" : " 2>/dev/null");
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Data(const std::string& name) {
  return "\"" + std::string(BLP_DATA_DIR) + "/" + name + "\"";
}

std::filesystem::path TempPath(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "blp_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json Parse(const std::string& text) {
  nlohmann::json j;
  REQUIRE_NOTHROW(j = nlohmann::json::parse(text));
  return j;
}

}  // namespace

TEST_CASE("solve") {
  auto r = Cli("solve " + Data("polygon.json") + " --method sos1");
  CHECK(r.code == 0);
  CHECK(r.out.find("status: Optimal") != std::string::npos);
  CHECK(r.out.find("value: 0\n") != std::string::npos);
  CHECK(r.out.find("x: (8)") != std::string::npos);

  r = Cli("solve " + Data("polygon.json") + " --method bigm --bigm auto --json");
  CHECK(r.code == 0);
  auto j = Parse(r.out);
  CHECK(j["status"] == "Optimal");
  CHECK(std::abs(j["value"].get<double>()) <= 1e-9);
  CHECK(j["x"][0].get<double>() == doctest::Approx(8.0));
  CHECK(j["stats"]["nodes_explored"].get<int>() >= 1);

  r = Cli("solve " + Data("polygon.json") + " --strategy dfs --json");
  CHECK(r.code == 0);
  CHECK(std::abs(Parse(r.out)["value"].get<double>()) <= 1e-9);

  r = Cli("solve " + Data("polygon.json") + " --method bigm --bigm 100");
  CHECK(r.code == 0);
  CHECK(r.out.find("big-M: 100") != std::string::npos);
}

TEST_CASE("solve exit codes") {
  auto r = Cli("solve /nonexistent/missing.json", true);
  CHECK(r.code == 1);
  CHECK(r.out.find("error:") != std::string::npos);

  r = Cli("solve /nonexistent/missing.json --json");
  CHECK(r.code == 1);
  CHECK(Parse(r.out)["error"] == "ParseError");

  auto inst = LoadInstance(std::string(BLP_DATA_DIR) + "/polygon.json");
  inst.leader_rhs(0) = -1.0;  // x <= -1 and x >= 0
  const auto infeasible = TempPath("infeasible.json");
  SaveInstance(inst, infeasible.string());
  r = Cli("solve " + infeasible.string() + " --json");
  CHECK(r.code == 2);
  CHECK(Parse(r.out)["value"] == "inf");

  // Leader minimizes -x over x >= 0.
  inst = LoadInstance(std::string(BLP_DATA_DIR) + "/mult_sol.json");
  inst.follower_cost_coupling.reset();
  inst.leader_cost_x(0) = -1.0;
  inst.m_l = 1;
  inst.leader_lhs = Matrix::Constant(1, 1, -1.0);
  inst.leader_rhs = Vector::Zero(1);
  const auto unbounded = TempPath("unbounded.json");
  SaveInstance(inst, unbounded.string());
  r = Cli("solve " + unbounded.string());
  CHECK(r.code == 3);
  CHECK(r.out.find("Unbounded") != std::string::npos);

  r = Cli("gen knapsack --weights 3,5,7 --cap 9 -o " + TempPath("k.json").string());
  REQUIRE(r.code == 0);
  r = Cli("solve " + TempPath("k.json").string(), false, "BLP_NODE_BUDGET=2");
  CHECK(r.code == 4);
  r = Cli("solve " + TempPath("k.json").string(), false, "BLP_NODE_BUDGET=100000");
  CHECK(r.code == 0);

  CHECK(Cli("solve " + Data("polygon.json") + " --method simplex").code == 1);
  CHECK(Cli("solve " + Data("polygon.json") + " --method bigm --bigm -3").code == 1);
  CHECK(Cli("solve " + Data("polygon.json") + " --method bigm --bigm abc").code == 1);
  CHECK(Cli("").code == 1);
  CHECK(Cli("--help").code == 0);
}

TEST_CASE("eval") {
  auto r = Cli("eval " + Data("polygon.json") + " --x 10 --approach all");
  CHECK(r.code == 0);
  CHECK(r.out.find("phi_o=1\n") != std::string::npos);
  CHECK(r.out.find("phi_p=5\n") != std::string::npos);
  CHECK(r.out.find("phi_n=3\n") != std::string::npos);

  r = Cli("eval " + Data("mult_sol.json") + " --x 2 --eps 1 --json");
  CHECK(r.code == 0);
  const auto j = Parse(r.out);
  REQUIRE(j["reaction_vertices"].size() == 2);
  const double a = j["reaction_vertices"][0][0], b = j["reaction_vertices"][1][0];
  CHECK(std::min(a, b) == doctest::Approx(0.5));
  CHECK(std::max(a, b) == doctest::Approx(1.0));

  r = Cli("eval " + Data("mult_sol_abs.json") + " --x -1 --approach optimistic --json");
  CHECK(r.code == 0);
  CHECK(Parse(r.out)["phi_o"].get<double>() == doctest::Approx(1.0));

  CHECK(Cli("eval " + Data("polygon.json") + " --x 99").code == 2);
  CHECK(Cli("eval " + Data("polygon.json") + " --x 1,2").code == 1);
  CHECK(Cli("eval " + Data("polygon.json") + " --x abc").code == 1);
  CHECK(Cli("eval " + Data("polygon.json")).code == 1);
}

TEST_CASE("scan") {
  const auto r = Cli("scan " + Data("polygon.json") +
                     " --lo 0 --hi 10 --points 6 --approach neutral");
  CHECK(r.code == 0);
  CHECK(r.out == "x,value\n0,4\n2,4\n4,4\n6,4\n8,4\n10,3\n");
  CHECK(Cli("scan " + Data("mult_sol_abs.json") + " --lo -1 --hi 1 --points 3").out ==
        "x,value\n-1,1\n0,0\n1,2\n");
}

TEST_CASE("gen") {
  const auto path = TempPath("knap.json");
  auto r = Cli("gen knapsack --weights 3,5,7 --cap 9 -o " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("penalty M = 50") != std::string::npos);
  CHECK(LoadInstance(path.string()) == GenerateKnapsack({{3, 5, 7}, 9, std::nullopt}).instance);

  r = Cli("gen knapsack --weights 3,5,7 --cap 9", true);
  CHECK(r.out.find("penalty M = 50") != std::string::npos);
  CHECK(Cli("gen knapsack --weights 3,5 --cap 9 --penalty 7", true).out.find("penalty M = 7") !=
        std::string::npos);
  CHECK(Cli("gen knapsack --weights 0,3 --cap 9").code == 1);

  const auto a = TempPath("r1.json"), b = TempPath("r2.json");
  CHECK(Cli("gen random --p 2 --q 2 --mf 6 --seed 1 -o " + a.string()).code == 0);
  CHECK(Cli("gen random --p 2 --q 2 --mf 6 --seed 1 -o " + b.string()).code == 0);
  CHECK(Slurp(a) == Slurp(b));
  const auto inst = LoadInstance(a.string());
  CHECK(inst.p == 2);
  CHECK(inst.q == 2);
  CHECK(inst.m_f == 6);
  CHECK(Cli("gen random --q 2 --mf 3").code == 1);
  CHECK(Cli("gen").code == 1);
}

TEST_CASE("compare") {
  const auto path = TempPath("cmp.json");
  REQUIRE(Cli("gen knapsack --weights 3,5,7 --cap 9 -o " + path.string()).code == 0);
  auto r = Cli("compare " + path.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("agree") != std::string::npos);
  r = Cli("compare " + Data("polygon.json") + " --json");
  CHECK(r.code == 0);
  const auto j = Parse(r.out);
  CHECK(j["agree"] == true);
  CHECK(j["sos1"]["status"] == "Optimal");
  // The coupled-cost instance is rejected by both exact solvers.
  CHECK(Cli("compare " + Data("mult_sol.json")).code == 1);
}

TEST_CASE("duopoly") {
  auto r = Cli("duopoly --p0 10 --alpha 1 --c 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("(3, 3)  (9, 9)") != std::string::npos);
  CHECK(r.out.find("(4.5, 2.25)  (10.125, 5.0625)") != std::string::npos);
  r = Cli("duopoly --p0 10 --alpha 1 --c 1 --capacity 5");
  CHECK(r.out.find("(1, 4) - (4, 1)") != std::string::npos);
  r = Cli("duopoly --p0 10 --alpha 1 --c 1 --capacity 5 --json");
  const auto j = Parse(r.out);
  REQUIRE(j.size() == 3);
  CHECK(j[2]["segment"][0][0] == 1.0);
  CHECK(Cli("duopoly --p0 1 --alpha 1 --c 1").code == 1);
}
