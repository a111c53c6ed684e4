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

#include "blp/instance.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace blp {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using Index = Eigen::Index;

bool SameMatrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool SameVector(const Vector& a, const Vector& b) {
  return a.size() == b.size() && a == b;
}

}  // namespace

Vector BilevelInstance::FollowerCostAt(const Vector& x) const {
  Vector c = follower_cost;
  if (follower_cost_coupling) c += follower_cost_coupling->transpose() * x;
  return c;
}

LpProblem BilevelInstance::FollowerLp(const Vector& x) const {
  Vector rhs = follower_rhs;
  if (m_f > 0) rhs -= follower_lhs_x * x;
  Matrix lhs = follower_lhs_y;
  if (lhs.rows() == 0) lhs = NoRows(q);
  return {FollowerCostAt(x), lhs, rhs, NoRows(q), Vector(0)};
}

Polytope BilevelInstance::JointRegion() const {
  Matrix lhs = Matrix::Zero(m_l + m_f, p + q);
  Vector rhs(m_l + m_f);
  if (m_l > 0) {
    lhs.topLeftCorner(m_l, p) = leader_lhs;
    rhs.head(m_l) = leader_rhs;
  }
  if (m_f > 0) {
    lhs.bottomLeftCorner(m_f, p) = follower_lhs_x;
    lhs.bottomRightCorner(m_f, q) = follower_lhs_y;
    rhs.tail(m_f) = follower_rhs;
  }
  return Polytope::FromInequalities(lhs, rhs);
}

bool operator==(const BilevelInstance& a, const BilevelInstance& b) {
  if (a.p != b.p || a.q != b.q || a.m_l != b.m_l || a.m_f != b.m_f) return false;
  if (!SameVector(a.leader_cost_x, b.leader_cost_x) ||
      !SameVector(a.leader_cost_y, b.leader_cost_y) ||
      !SameMatrix(a.leader_lhs, b.leader_lhs) ||
      !SameVector(a.leader_rhs, b.leader_rhs) ||
      !SameVector(a.follower_cost, b.follower_cost) ||
      !SameMatrix(a.follower_lhs_x, b.follower_lhs_x) ||
      !SameMatrix(a.follower_lhs_y, b.follower_lhs_y) ||
      !SameVector(a.follower_rhs, b.follower_rhs))
    return false;
  if (a.follower_cost_coupling.has_value() != b.follower_cost_coupling.has_value())
    return false;
  if (a.follower_cost_coupling &&
      !SameMatrix(*a.follower_cost_coupling, *b.follower_cost_coupling))
    return false;
  return a.meta == b.meta;
}

const char* DiagnosticKindName(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::kShapeMismatch: return "ShapeMismatch";
    case Diagnostic::Kind::kNonFinite: return "NonFinite";
    case Diagnostic::Kind::kEmptyJointRegion: return "EmptyJointRegion";
    case Diagnostic::Kind::kUnboundedJointRegion: return "UnboundedJointRegion";
    case Diagnostic::Kind::kTrivialCase: return "TrivialCase";
  }
  return "Unknown";
}

std::vector<Diagnostic> Validate(const BilevelInstance& inst) {
  std::vector<Diagnostic> out;
  auto shape = [&](const std::string& what) {
    out.push_back({Diagnostic::Kind::kShapeMismatch, true, what});
  };
  auto vec = [&](const char* name, const Vector& v, int n) {
    if (v.size() != n)
      shape(std::string(name) + " has length " + std::to_string(v.size()) +
            ", expected " + std::to_string(n));
  };
  auto mat = [&](const char* name, const Matrix& m, int r, int c) {
    // A matrix without rows carries no column information worth checking.
    if (m.rows() != r || (r > 0 && m.cols() != c))
      shape(std::string(name) + " is " + std::to_string(m.rows()) + "x" +
            std::to_string(m.cols()) + ", expected " + std::to_string(r) + "x" +
            std::to_string(c));
  };
  if (inst.p < 1 || inst.q < 1 || inst.m_l < 0 || inst.m_f < 0) {
    shape("dimensions must satisfy p >= 1, q >= 1, m_l >= 0, m_f >= 0");
    return out;
  }
  vec("c_l", inst.leader_cost_x, inst.p);
  vec("d_l", inst.leader_cost_y, inst.q);
  mat("A_l", inst.leader_lhs, inst.m_l, inst.p);
  vec("b_l", inst.leader_rhs, inst.m_l);
  vec("c_f", inst.follower_cost, inst.q);
  mat("A_f", inst.follower_lhs_x, inst.m_f, inst.p);
  mat("B_f", inst.follower_lhs_y, inst.m_f, inst.q);
  vec("b_f", inst.follower_rhs, inst.m_f);
  if (inst.follower_cost_coupling)
    mat("C_f", *inst.follower_cost_coupling, inst.p, inst.q);
  if (!out.empty()) return out;

  const bool finite =
      AllFinite(inst.leader_cost_x) && AllFinite(inst.leader_cost_y) &&
      AllFinite(inst.leader_lhs) && AllFinite(inst.leader_rhs) &&
      AllFinite(inst.follower_cost) && AllFinite(inst.follower_lhs_x) &&
      AllFinite(inst.follower_lhs_y) && AllFinite(inst.follower_rhs) &&
      (!inst.follower_cost_coupling || AllFinite(*inst.follower_cost_coupling));
  if (!finite) {
    out.push_back({Diagnostic::Kind::kNonFinite, true, "non-finite entry"});
    return out;
  }

  const Polytope d = inst.JointRegion();
  const LpSolution feas = SolveLp(
      {Vector::Zero(inst.p + inst.q), d.ineq_lhs, d.ineq_rhs, NoRows(inst.p + inst.q),
       Vector(0)});
  if (!feas.optimal()) {
    out.push_back({Diagnostic::Kind::kEmptyJointRegion, true,
                   "no (x, y) satisfies the leader and follower constraints"});
    return out;
  }
  if (!IsBounded(d))
    out.push_back({Diagnostic::Kind::kUnboundedJointRegion, false,
                   "joint region is unbounded"});
  return out;
}

bool HasFatal(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.fatal; });
}

void RequireValid(const BilevelInstance& inst) {
  for (const auto& d : Validate(inst))
    if (d.fatal)
      throw Error(ErrorCode::kMalformedProblem,
                  std::string(DiagnosticKindName(d.kind)) + ": " + d.message);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const std::vector<std::string> kRequiredKeys = {
    "p", "q", "m_l", "m_f", "c_l", "d_l", "A_l", "b_l", "c_f", "A_f", "B_f", "b_f"};
const std::vector<std::string> kOptionalKeys = {"C_f", "meta"};

ordered_json VectorJson(const Vector& v) {
  ordered_json a = ordered_json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ordered_json MatrixJson(const Matrix& m) {
  ordered_json a = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) a.push_back(VectorJson(m.row(i).transpose()));
  return a;
}

[[noreturn]] void FieldError(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kParseError, "field '" + field + "': " + what);
}

int ReadDim(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    FieldError(key, "expected a non-negative integer");
  return static_cast<int>(v.get<long long>());
}

double ReadNumber(const json& v, const std::string& field) {
  if (!v.is_number()) FieldError(field, "expected a number, got " + v.dump());
  return v.get<double>();
}

Vector ReadVector(const json& doc, const std::string& key) {
  const json& v = doc.at(key);
  if (!v.is_array()) FieldError(key, "expected an array");
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Index>(i)) = ReadNumber(v[i], key + "[" + std::to_string(i) + "]");
  return out;
}

Matrix ReadMatrix(const json& doc, const std::string& key, int cols_if_empty) {
  const json& v = doc.at(key);
  if (!v.is_array()) FieldError(key, "expected an array of rows");
  if (v.empty()) return NoRows(cols_if_empty);
  if (!v[0].is_array()) FieldError(key + "[0]", "expected a row array");
  const std::size_t cols = v[0].size();
  Matrix out(static_cast<Index>(v.size()), static_cast<Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_name = key + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) FieldError(row_name, "expected a row array");
    if (v[i].size() != cols)
      FieldError(row_name, "ragged row of length " + std::to_string(v[i].size()) +
                               ", expected " + std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j)
      out(static_cast<Index>(i), static_cast<Index>(j)) =
          ReadNumber(v[i][j], row_name + "[" + std::to_string(j) + "]");
  }
  return out;
}

}  // namespace

std::string ToJson(const BilevelInstance& inst) {
  ordered_json doc;
  doc["p"] = inst.p;
  doc["q"] = inst.q;
  doc["m_l"] = inst.m_l;
  doc["m_f"] = inst.m_f;
  doc["c_l"] = VectorJson(inst.leader_cost_x);
  doc["d_l"] = VectorJson(inst.leader_cost_y);
  doc["A_l"] = MatrixJson(inst.leader_lhs);
  doc["b_l"] = VectorJson(inst.leader_rhs);
  doc["c_f"] = VectorJson(inst.follower_cost);
  doc["A_f"] = MatrixJson(inst.follower_lhs_x);
  doc["B_f"] = MatrixJson(inst.follower_lhs_y);
  doc["b_f"] = VectorJson(inst.follower_rhs);
  if (inst.follower_cost_coupling) doc["C_f"] = MatrixJson(*inst.follower_cost_coupling);
  if (!inst.meta.is_null()) doc["meta"] = ordered_json::parse(inst.meta.dump());
  return doc.dump(2) + "\n";
}

BilevelInstance FromJson(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": " + std::string(e.what()));
  }
  if (!doc.is_object()) throw Error(ErrorCode::kSchemaError, "top level must be an object");

  std::vector<std::string> missing;
  for (const auto& k : kRequiredKeys)
    if (!doc.contains(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string list;
    for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::kSchemaError, "missing keys: " + list);
  }
  for (const auto& [key, value] : doc.items()) {
    const bool known =
        std::find(kRequiredKeys.begin(), kRequiredKeys.end(), key) != kRequiredKeys.end() ||
        std::find(kOptionalKeys.begin(), kOptionalKeys.end(), key) != kOptionalKeys.end();
    if (!known) throw Error(ErrorCode::kSchemaError, "unknown key: " + key);
  }

  BilevelInstance inst;
  inst.p = ReadDim(doc, "p");
  inst.q = ReadDim(doc, "q");
  inst.m_l = ReadDim(doc, "m_l");
  inst.m_f = ReadDim(doc, "m_f");
  inst.leader_cost_x = ReadVector(doc, "c_l");
  inst.leader_cost_y = ReadVector(doc, "d_l");
  inst.leader_lhs = ReadMatrix(doc, "A_l", inst.p);
  inst.leader_rhs = ReadVector(doc, "b_l");
  inst.follower_cost = ReadVector(doc, "c_f");
  inst.follower_lhs_x = ReadMatrix(doc, "A_f", inst.p);
  inst.follower_lhs_y = ReadMatrix(doc, "B_f", inst.q);
  inst.follower_rhs = ReadVector(doc, "b_f");
  if (doc.contains("C_f") && !doc["C_f"].is_null())
    inst.follower_cost_coupling = ReadMatrix(doc, "C_f", inst.q);
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object() && !doc["meta"].is_null())
      FieldError("meta", "expected an object");
    inst.meta = doc["meta"];
  }
  return inst;
}

BilevelInstance LoadInstance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return FromJson(buf.str());
}

void SaveInstance(const BilevelInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParseError, "cannot write " + path);
  out << ToJson(inst);
}

}  // namespace blp
