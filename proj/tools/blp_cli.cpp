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

// Command-line front end: blp <solve|eval|scan|gen|compare|duopoly> ...

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blp/bnb.hpp"
#include "blp/duopoly.hpp"
#include "blp/response.hpp"
#include "json.hpp"

namespace {

using blp::Error;
using blp::ErrorCode;
using blp::Vector;
using Json = nlohmann::ordered_json;

enum Exit {
  kOk = 0,
  kInputError = 1,
  kInfeasible = 2,  // also: follower infeasible in eval
  kUnbounded = 3,
  kBudget = 4,
  kDivergence = 5,
};

std::string Num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Vec(const Vector& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + Num(v(i));
  return out + ")";
}

// JSON has no infinities; they travel as strings.
Json JNum(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json JVec(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(JNum(v(i)));
  return out;
}

Json StatsJson(const blp::SolveStats& s) {
  return {{"nodes_explored", s.nodes_explored},
          {"pruned_infeasible", s.pruned_infeasible},
          {"pruned_bound", s.pruned_bound},
          {"pruned_sos1", s.pruned_sos1},
          {"leaves", s.leaves}};
}

std::string StatsLine(const blp::SolveStats& s) {
  return "nodes " + std::to_string(s.nodes_explored) + ", pruned infeasible " +
         std::to_string(s.pruned_infeasible) + ", pruned bound " +
         std::to_string(s.pruned_bound) + ", pruned feasible " +
         std::to_string(s.pruned_sos1) + ", leaves " + std::to_string(s.leaves);
}

// Reports an error on stderr and, in JSON mode, as the stdout document.
int Fail(bool json, int code, const std::string& kind, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  if (json) std::cout << Json{{"error", kind}, {"message", message}}.dump(2) << "\n";
  return code;
}

int FromError(bool json, const Error& e, int code = kInputError) {
  if (e.code() == ErrorCode::kBudgetExceeded) code = kBudget;
  return Fail(json, code, std::string(blp::ErrorCodeName(e.code())), e.what());
}

int StatusExit(blp::SolveStatus status) {
  switch (status) {
    case blp::SolveStatus::kOptimal: return kOk;
    case blp::SolveStatus::kInfeasible: return kInfeasible;
    case blp::SolveStatus::kUnbounded: return kUnbounded;
  }
  return kInputError;
}

blp::Strategy ParseStrategy(const std::string& s) {
  return s == "dfs" ? blp::Strategy::kDepthFirst : blp::Strategy::kBestFirst;
}

blp::BnbOptions Options(const std::string& strategy) {
  blp::BnbOptions options;
  options.strategy = ParseStrategy(strategy);
  options.node_budget = blp::NodeBudgetFromEnv();
  return options;
}

// --bigm: "auto" or a positive number.
double ResolveBigM(const blp::BilevelInstance& inst, const std::string& flag) {
  if (flag == "auto") return blp::ComputeBigM(inst).usable();
  std::size_t used = 0;
  double m = 0.0;
  try {
    m = std::stod(flag, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != flag.size())
    throw Error(ErrorCode::kInvalidSpec, "--bigm expects 'auto' or a number, got '" + flag + "'");
  return m;
}

struct SolveFlags {
  std::string file;
  std::string method = "sos1";
  std::string bigm = "auto";
  std::string strategy = "best";
  bool json = false;
};

int CmdSolve(const SolveFlags& f) {
  try {
    const auto inst = blp::LoadInstance(f.file);
    const auto options = Options(f.strategy);
    std::optional<double> big_m;
    blp::SolveResult res;
    if (f.method == "bigm") {
      big_m = ResolveBigM(inst, f.bigm);
      res = blp::MipBranchAndBound(blp::BuildBigMMip(inst, *big_m), options);
    } else {
      res = blp::Sos1BranchAndBound(blp::BuildMpcc(inst), options);
    }
    if (f.json) {
      Json out{{"status", blp::SolveStatusName(res.status)}, {"method", f.method}};
      if (big_m) out["big_m"] = *big_m;
      if (res.optimal()) {
        out["x"] = JVec(res.x);
        out["y"] = JVec(res.y);
        out["mu"] = JVec(res.mu);
      }
      out["value"] = JNum(res.value);
      out["stats"] = StatsJson(res.stats);
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "status: " << blp::SolveStatusName(res.status) << "\n";
      if (big_m) std::cout << "big-M: " << Num(*big_m) << "\n";
      if (res.optimal()) {
        std::cout << "x: " << Vec(res.x) << "\n";
        std::cout << "y: " << Vec(res.y) << "\n";
      }
      std::cout << "value: " << Num(res.value) << "\n";
      std::cout << "stats: " << StatsLine(res.stats) << "\n";
    }
    return StatusExit(res.status);
  } catch (const Error& e) {
    return FromError(f.json, e);
  }
}

struct EvalFlags {
  std::string file;
  std::vector<double> x;
  std::string approach = "all";
  std::optional<double> eps;
  bool json = false;
};

int CmdEval(const EvalFlags& f) {
  try {
    const auto inst = blp::LoadInstance(f.file);
    if (static_cast<int>(f.x.size()) != inst.p)
      return Fail(f.json, kInputError, "InvalidSpec",
                  "--x has " + std::to_string(f.x.size()) + " entries, the instance has p = " +
                      std::to_string(inst.p));
    const Vector x = Eigen::Map<const Vector>(f.x.data(), inst.p);
    const double v = blp::ValueFunction(inst, x);
    if (v == blp::kInf)
      return Fail(f.json, kInfeasible, "FollowerInfeasible",
                  "the follower has no feasible reaction at x = " + Vec(x));

    Json out{{"x", JVec(x)}, {"value_function", JNum(v)}};
    std::vector<std::pair<std::string, double>> rows;
    Vector centroid;
    if (f.approach == "all") {
      const auto a = blp::EvaluateApproaches(inst, x);
      rows = {{"phi_o", a.optimistic}, {"phi_p", a.pessimistic}, {"phi_n", a.neutral}};
      centroid = a.centroid;
    } else {
      const blp::Approach which = f.approach == "optimistic"    ? blp::Approach::kOptimistic
                                  : f.approach == "pessimistic" ? blp::Approach::kPessimistic
                                                                : blp::Approach::kNeutral;
      const char* key = which == blp::Approach::kOptimistic    ? "phi_o"
                        : which == blp::Approach::kPessimistic ? "phi_p"
                                                               : "phi_n";
      rows = {{key, blp::LeaderValue(inst, x, which)}};
    }
    for (const auto& [k, val] : rows) out[k] = JNum(val);
    if (centroid.size() > 0) out["centroid"] = JVec(centroid);

    std::optional<blp::ReactionPolytope> reaction;
    if (f.eps) {
      reaction = blp::BuildReactionPolytope(inst, x, *f.eps);
      Json verts = Json::array();
      for (const auto& p : reaction->vertices) verts.push_back(JVec(p));
      out["eps"] = *f.eps;
      out["reaction_vertices"] = verts;
      out["reaction_dimension"] = reaction->affine_dim;
    }

    if (f.json) {
      std::cout << out.dump(2) << "\n";
      return kOk;
    }
    std::cout << "x: " << Vec(x) << "\n";
    std::cout << "V(x): " << Num(v) << "\n";
    for (const auto& [k, val] : rows) std::cout << k << "=" << Num(val) << "\n";
    if (centroid.size() > 0) std::cout << "centroid: " << Vec(centroid) << "\n";
    if (reaction) {
      std::cout << "eps-optimal reactions (eps " << Num(*f.eps) << ", dimension "
                << reaction->affine_dim << "):\n";
      for (const auto& p : reaction->vertices) std::cout << "  " << Vec(p) << "\n";
    }
    return kOk;
  } catch (const Error& e) {
    const int code = e.code() == ErrorCode::kFollowerInfeasible ? kInfeasible : kInputError;
    return FromError(f.json, e, code);
  }
}

struct ScanFlags {
  std::string file;
  double lo = 0.0;
  double hi = 1.0;
  int points = 11;
  std::string approach = "optimistic";
  std::string output;
};

int CmdScan(const ScanFlags& f) {
  try {
    const auto inst = blp::LoadInstance(f.file);
    const blp::Approach which = f.approach == "pessimistic" ? blp::Approach::kPessimistic
                                : f.approach == "neutral"   ? blp::Approach::kNeutral
                                                            : blp::Approach::kOptimistic;
    const std::string csv =
        blp::ScanToCsv(blp::ScanLeader1d(inst, f.lo, f.hi, f.points, which));
    if (f.output.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(f.output);
      if (!(out << csv)) return Fail(false, kInputError, "IoError", "cannot write " + f.output);
    }
    return kOk;
  } catch (const Error& e) {
    return FromError(false, e);
  }
}

struct GenFlags {
  std::vector<long> weights;
  long capacity = 0;
  std::string penalty = "auto";
  int p = 1;
  int q = 1;
  std::optional<int> mf;
  std::uint64_t seed = 1;
  double radius = 5.0;
  std::string output;
};

int WriteInstance(const blp::BilevelInstance& inst, const std::string& path) {
  if (path.empty()) {
    std::cout << blp::ToJson(inst) << "\n";
    return kOk;
  }
  blp::SaveInstance(inst, path);
  return kOk;
}

int CmdGenKnapsack(const GenFlags& f) {
  try {
    blp::KnapsackSpec spec{f.weights, f.capacity, std::nullopt};
    if (f.penalty != "auto") {
      std::size_t used = 0;
      try {
        spec.penalty = std::stod(f.penalty, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.penalty.size())
        return Fail(false, kInputError, "InvalidSpec", "--penalty expects 'auto' or a number");
    }
    const auto gen = blp::GenerateKnapsack(spec);
    for (const auto& d : gen.diagnostics) std::cerr << "note: " << d.message << "\n";
    // The instance may be on stdout; the summary then goes to stderr.
    std::ostream& info = f.output.empty() ? std::cerr : std::cout;
    info << "penalty M = " << Num(gen.penalty) << "\n";
    const int rc = WriteInstance(gen.instance, f.output);
    if (!f.output.empty()) info << "wrote " << f.output << "\n";
    return rc;
  } catch (const Error& e) {
    return FromError(false, e);
  }
}

int CmdGenRandom(const GenFlags& f) {
  try {
    blp::RandomSpec spec;
    spec.p = f.p;
    spec.q = f.q;
    spec.seed = f.seed;
    spec.radius = f.radius;
    // --mf counts all follower rows, including the 2q box rows.
    if (f.mf) {
      if (*f.mf < 2 * f.q)
        return Fail(false, kInputError, "InvalidSpec",
                    "--mf must be at least 2q (the follower box rows)");
      spec.extra_rows = *f.mf - 2 * f.q;
    }
    const int rc = WriteInstance(blp::GenerateRandomBounded(spec), f.output);
    if (!f.output.empty()) std::cout << "wrote " << f.output << "\n";
    return rc;
  } catch (const Error& e) {
    return FromError(false, e);
  }
}

struct CompareFlags {
  std::string file;
  std::string strategy = "best";
  bool json = false;
};

int CmdCompare(const CompareFlags& f) {
  try {
    const auto inst = blp::LoadInstance(f.file);
    const auto options = Options(f.strategy);
    const auto sos1 = blp::Sos1BranchAndBound(blp::BuildMpcc(inst), options);
    const auto cert = blp::ComputeBigM(inst);
    const auto mip = blp::MipBranchAndBound(blp::BuildBigMMip(inst, cert.usable()), options);
    const bool same_status = sos1.status == mip.status;
    const double gap = sos1.optimal() && mip.optimal() ? std::abs(sos1.value - mip.value) : 0.0;
    const bool agree = same_status && gap <= 1e-6;
    if (f.json) {
      Json out{{"agree", agree},
               {"sos1", {{"status", blp::SolveStatusName(sos1.status)},
                         {"value", JNum(sos1.value)},
                         {"stats", StatsJson(sos1.stats)}}},
               {"bigm", {{"status", blp::SolveStatusName(mip.status)},
                         {"value", JNum(mip.value)},
                         {"big_m", cert.usable()},
                         {"stats", StatsJson(mip.stats)}}},
               {"difference", gap}};
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "sos1: " << blp::SolveStatusName(sos1.status) << ", value "
                << Num(sos1.value) << "; " << StatsLine(sos1.stats) << "\n";
      std::cout << "bigm (M = " << Num(cert.usable()) << "): "
                << blp::SolveStatusName(mip.status) << ", value " << Num(mip.value) << "; "
                << StatsLine(mip.stats) << "\n";
      std::cout << (agree ? "agree" : "DIVERGE") << " (difference " << Num(gap) << ")\n";
    }
    return agree ? kOk : kDivergence;
  } catch (const Error& e) {
    return FromError(f.json, e);
  }
}

struct DuopolyFlags {
  blp::DuopolyParams params;
  std::optional<double> capacity;
  bool json = false;
};

std::string Pair(const std::array<double, 2>& v) {
  return "(" + Num(v[0]) + ", " + Num(v[1]) + ")";
}

int CmdDuopoly(DuopolyFlags f) {
  try {
    const auto cournot = blp::CournotEquilibrium(f.params);
    const auto stackelberg = blp::StackelbergEquilibrium(f.params);
    std::optional<blp::EquilibriumReport> gnep;
    if (f.capacity) {
      f.params.capacity = f.capacity;
      gnep = blp::GnepEquilibria(f.params);
    }
    if (f.json) {
      Json out = Json::array({blp::ReportToJson(cournot), blp::ReportToJson(stackelberg)});
      if (gnep) out.push_back(blp::ReportToJson(*gnep));
      std::cout << out.dump(2) << "\n";
      return kOk;
    }
    std::cout << "model        quantities        profits\n";
    for (const auto* r : {&cournot, &stackelberg}) {
      std::string name = blp::DuopolyModelName(r->model);
      name.resize(12, ' ');
      std::cout << name << " " << Pair(r->quantities) << "  " << Pair(r->profits) << "\n";
    }
    if (gnep) {
      if (gnep->point_valued)
        std::cout << "capacity K = " << Num(*f.capacity) << " does not bind: equilibrium "
                  << Pair(gnep->quantities) << "\n";
      else
        std::cout << "capacity K = " << Num(*f.capacity) << ": equilibria on the segment "
                  << Pair(gnep->segment[0]) << " - " << Pair(gnep->segment[1]) << "\n";
    }
    return kOk;
  } catch (const Error& e) {
    return FromError(f.json, e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear bilevel programming: solvers, evaluators and duopoly models", "blp"};
  app.require_subcommand(1);
  int rc = kOk;

  SolveFlags solve;
  auto* s = app.add_subcommand("solve", "solve the optimistic bilevel problem exactly");
  s->add_option("file", solve.file, "instance JSON")->required();
  s->add_option("--method", solve.method, "sos1 or bigm")
      ->check(CLI::IsMember({"sos1", "bigm"}));
  s->add_option("--bigm", solve.bigm, "penalty M for --method bigm: auto or a number");
  s->add_option("--strategy", solve.strategy, "node selection: best or dfs")
      ->check(CLI::IsMember({"best", "dfs"}));
  s->add_flag("--json", solve.json, "print one JSON document");
  s->callback([&] { rc = CmdSolve(solve); });

  EvalFlags eval;
  auto* e = app.add_subcommand("eval", "leader values at a fixed leader decision");
  e->add_option("file", eval.file, "instance JSON")->required();
  e->add_option("--x", eval.x, "leader decision, comma separated")
      ->required()
      ->delimiter(',')
      ->allow_extra_args(false);
  e->add_option("--approach", eval.approach, "optimistic, pessimistic, neutral or all")
      ->check(CLI::IsMember({"optimistic", "pessimistic", "neutral", "all"}));
  e->add_option("--eps", eval.eps, "also list the vertices of the eps-optimal reactions")
      ->check(CLI::NonNegativeNumber);
  e->add_flag("--json", eval.json, "print one JSON document");
  e->callback([&] { rc = CmdEval(eval); });

  ScanFlags scan;
  auto* sc = app.add_subcommand("scan", "leader value over a grid (single leader variable)");
  sc->add_option("file", scan.file, "instance JSON")->required();
  sc->add_option("--lo", scan.lo, "first grid point")->required();
  sc->add_option("--hi", scan.hi, "last grid point")->required();
  sc->add_option("--points", scan.points, "number of grid points");
  sc->add_option("--approach", scan.approach, "optimistic, pessimistic or neutral")
      ->check(CLI::IsMember({"optimistic", "pessimistic", "neutral"}));
  sc->add_option("-o,--output", scan.output, "CSV file (default stdout)");
  sc->callback([&] { rc = CmdScan(scan); });

  auto* g = app.add_subcommand("gen", "generate an instance");
  g->require_subcommand(1);
  GenFlags gen;
  auto* gk = g->add_subcommand("knapsack", "bilevel reduction of a subset-sum knapsack");
  gk->add_option("--weights", gen.weights, "item weights, comma separated")
      ->required()
      ->delimiter(',');
  gk->add_option("--cap", gen.capacity, "capacity")->required();
  gk->add_option("--penalty", gen.penalty, "penalty M: auto or a number");
  gk->add_option("-o,--output", gen.output, "output file (default stdout)");
  gk->callback([&] { rc = CmdGenKnapsack(gen); });
  auto* gr = g->add_subcommand("random", "random instance with bounded joint region");
  gr->add_option("--p", gen.p, "leader variables");
  gr->add_option("--q", gen.q, "follower variables");
  gr->add_option("--mf", gen.mf, "follower rows, at least 2q");
  gr->add_option("--seed", gen.seed, "random seed");
  gr->add_option("--radius", gen.radius, "box radius");
  gr->add_option("-o,--output", gen.output, "output file (default stdout)");
  gr->callback([&] { rc = CmdGenRandom(gen); });

  CompareFlags cmp;
  auto* c = app.add_subcommand("compare", "solve with both methods and compare");
  c->add_option("file", cmp.file, "instance JSON")->required();
  c->add_option("--strategy", cmp.strategy, "node selection: best or dfs")
      ->check(CLI::IsMember({"best", "dfs"}));
  c->add_flag("--json", cmp.json, "print one JSON document");
  c->callback([&] { rc = CmdCompare(cmp); });

  DuopolyFlags duo;
  auto* d = app.add_subcommand("duopoly", "Cournot, Stackelberg and capacity equilibria");
  d->add_option("--p0", duo.params.p0, "price intercept")->required();
  d->add_option("--alpha", duo.params.alpha, "price slope")->required();
  d->add_option("--c", duo.params.c, "marginal cost")->required();
  d->add_option("--capacity", duo.capacity, "shared capacity K");
  d->add_flag("--json", duo.json, "print one JSON document");
  d->callback([&] { rc = CmdDuopoly(duo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return rc;
}
