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

#include "blp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace blp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedProblem: return "MalformedProblem";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kUnbounded: return "Unbounded";
    case ErrorCode::kEmptyPolytope: return "EmptyPolytope";
    case ErrorCode::kUnboundedPolytope: return "UnboundedPolytope";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kNonstandardInstance: return "NonstandardInstance";
    case ErrorCode::kUnboundedJointRegion: return "UnboundedJointRegion";
    case ErrorCode::kDualInfeasible: return "DualInfeasible";
    case ErrorCode::kNonpositiveM: return "NonpositiveM";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kFollowerInfeasible: return "FollowerInfeasible";
    case ErrorCode::kFollowerUnbounded: return "FollowerUnbounded";
    case ErrorCode::kUnboundedFace: return "UnboundedFace";
    case ErrorCode::kNotOneDimensional: return "NotOneDimensional";
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kInfeasibleOpponent: return "InfeasibleOpponent";
  }
  return "Unknown";
}

bool AllFinite(const Matrix& m) { return m.size() == 0 || m.allFinite(); }
bool AllFinite(const Vector& v) { return v.size() == 0 || v.allFinite(); }

LpProblem LpProblem::Unconstrained(const Vector& objective) {
  const auto n = objective.size();
  return {objective, NoRows(n), Vector(0), NoRows(n), Vector(0)};
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "Optimal";
    case LpStatus::kInfeasible: return "Infeasible";
    case LpStatus::kUnbounded: return "Unbounded";
  }
  return "Unknown";
}

double LpSolution::dual_value(const LpProblem& problem) const {
  double v = 0.0;
  if (dual_ineq.size() > 0) v -= problem.ineq_rhs.dot(dual_ineq);
  if (dual_eq.size() > 0) v += problem.eq_rhs.dot(dual_eq);
  return v;
}

namespace {

using Index = Eigen::Index;

void CheckShapes(const LpProblem& p) {
  const Index n = p.num_vars();
  auto fail = [](const std::string& what) {
    throw Error(ErrorCode::kMalformedProblem, what);
  };
  if (p.ineq_lhs.cols() != n && p.ineq_lhs.rows() > 0)
    fail("inequality matrix has " + std::to_string(p.ineq_lhs.cols()) +
         " columns, objective has " + std::to_string(n));
  if (p.eq_lhs.cols() != n && p.eq_lhs.rows() > 0)
    fail("equality matrix has " + std::to_string(p.eq_lhs.cols()) +
         " columns, objective has " + std::to_string(n));
  if (p.ineq_lhs.rows() != p.ineq_rhs.size())
    fail("inequality rows and right-hand side differ in length");
  if (p.eq_lhs.rows() != p.eq_rhs.size())
    fail("equality rows and right-hand side differ in length");
  if (!AllFinite(p.objective) || !AllFinite(p.ineq_lhs) ||
      !AllFinite(p.ineq_rhs) || !AllFinite(p.eq_lhs) || !AllFinite(p.eq_rhs))
    fail("non-finite entry");
}

// Dense tableau. The last row holds reduced costs, the last column the
// right-hand side; t(last, last) is minus the current objective.
class Tableau {
 public:
  Tableau(Index rows, Index cols) : t_(Matrix::Zero(rows + 1, cols + 1)),
                                    basis_(rows, -1) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }
  double& at(Index r, Index c) { return t_(r, c); }
  double at(Index r, Index c) const { return t_(r, c); }
  double& rhs(Index r) { return t_(r, cols()); }
  double& cost(Index c) { return t_(rows(), c); }
  std::vector<Index>& basis() { return basis_; }

  void Pivot(Index r, Index c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    t_(r, c) = 1.0;
    for (Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      t_.row(i) -= f * t_.row(r);
      t_(i, c) = 0.0;
    }
    basis_[r] = c;
  }

 private:
  Matrix t_;
  std::vector<Index> basis_;
};

enum class Outcome { kOptimal, kUnbounded };

// Minimizes over the current tableau. Only columns below `enter_limit` may
// enter the basis.
Outcome RunSimplex(Tableau& tab, Index enter_limit, int& iterations) {
  const Index m = tab.rows();
  const long degenerate_limit = 3L * (m + enter_limit);
  const long max_iterations = 200L * (m + enter_limit) + 1000;
  long degenerate_run = 0;
  bool bland = false;
  for (long it = 0;; ++it) {
    if (it > max_iterations)
      throw Error(ErrorCode::kNumericalFailure, "simplex iteration limit");
    Index enter = -1;
    double best = -kTol;
    for (Index j = 0; j < enter_limit; ++j) {
      const double d = tab.cost(j);
      if (d < best) {
        enter = j;
        if (bland) break;
        best = d;
      }
    }
    if (enter < 0) return Outcome::kOptimal;

    Index leave = -1;
    double ratio = kInf;
    for (Index r = 0; r < m; ++r) {
      const double a = tab.at(r, enter);
      if (a <= kTol) continue;
      const double q = std::max(0.0, tab.rhs(r)) / a;
      if (leave < 0 || q < ratio - 1e-12 * (1.0 + std::abs(ratio))) {
        leave = r;
        ratio = q;
      } else if (q <= ratio + 1e-12 * (1.0 + std::abs(ratio)) &&
                 tab.basis()[r] < tab.basis()[leave]) {
        leave = r;
        ratio = std::min(ratio, q);
      }
    }
    if (leave < 0) return Outcome::kUnbounded;

    if (ratio <= kTol) {
      if (++degenerate_run > degenerate_limit) bland = true;
    } else {
      degenerate_run = 0;
    }
    tab.Pivot(leave, enter);
    ++iterations;
  }
}

}  // namespace

LpSolution SolveLp(const LpProblem& problem) {
  CheckShapes(problem);
  const Index n = problem.num_vars();
  const Index m_in = problem.ineq_rhs.size();
  const Index m_eq = problem.eq_rhs.size();
  const Index m = m_in + m_eq;
  // Columns: y+ (n), y- (n), slacks (m_in).
  const Index num_orig = 2 * n + m_in;

  Matrix a = Matrix::Zero(m, num_orig);
  Vector b(m);
  Vector sign = Vector::Ones(m);
  for (Index i = 0; i < m_in; ++i) {
    a.row(i).head(n) = problem.ineq_lhs.row(i);
    a(i, 2 * n + i) = 1.0;
    b(i) = problem.ineq_rhs(i);
  }
  for (Index i = 0; i < m_eq; ++i) {
    a.row(m_in + i).head(n) = problem.eq_lhs.row(i);
    b(m_in + i) = problem.eq_rhs(i);
  }
  for (Index i = 0; i < m; ++i) {
    a.block(i, n, 1, n) = -a.block(i, 0, 1, n);
    if (b(i) < 0.0) {
      a.row(i) *= -1.0;
      b(i) = -b(i);
      sign(i) = -1.0;
    }
  }
  Vector cost = Vector::Zero(num_orig);
  cost.head(n) = problem.objective;
  cost.segment(n, n) = -problem.objective;

  // Rows whose slack already has a +1 coefficient start with it basic.
  std::vector<bool> needs_artificial(m, true);
  Index num_art = 0;
  for (Index i = 0; i < m; ++i) {
    needs_artificial[i] = !(i < m_in && sign(i) > 0);
    if (needs_artificial[i]) ++num_art;
  }

  Tableau tab(m, num_orig + num_art);
  Index art = num_orig;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < num_orig; ++j) tab.at(i, j) = a(i, j);
    tab.rhs(i) = b(i);
    if (needs_artificial[i]) {
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
    } else {
      tab.basis()[i] = 2 * n + i;
    }
  }

  LpSolution sol;
  const double b_scale = 1.0 + (m > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0);

  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (Index i = 0; i < m; ++i) {
      if (!needs_artificial[i]) continue;
      for (Index j = 0; j < num_orig; ++j) tab.cost(j) -= tab.at(i, j);
      tab.cost(tab.cols()) -= tab.rhs(i);
    }
    RunSimplex(tab, num_orig, sol.iterations);
    const double infeasibility = -tab.cost(tab.cols());
    if (infeasibility > kTol * b_scale) {
      sol.status = LpStatus::kInfeasible;
      sol.value = kInf;
      return sol;
    }
    // Drive remaining artificials out; rows where that is impossible are
    // redundant and stay parked on their artificial.
    for (Index r = 0; r < m; ++r) {
      if (tab.basis()[r] < num_orig) continue;
      Index best = -1;
      double mag = kTol;
      for (Index j = 0; j < num_orig; ++j) {
        if (std::abs(tab.at(r, j)) > mag) {
          mag = std::abs(tab.at(r, j));
          best = j;
        }
      }
      if (best >= 0) tab.Pivot(r, best);
    }
  }

  // Phase 2 reduced costs.
  for (Index j = 0; j <= tab.cols(); ++j) tab.cost(j) = 0.0;
  for (Index j = 0; j < num_orig; ++j) tab.cost(j) = cost(j);
  for (Index r = 0; r < m; ++r) {
    const Index bj = tab.basis()[r];
    if (bj >= num_orig) continue;
    const double cb = cost(bj);
    if (cb == 0.0) continue;
    for (Index j = 0; j < num_orig; ++j) tab.cost(j) -= cb * tab.at(r, j);
    tab.cost(tab.cols()) -= cb * tab.rhs(r);
  }

  if (RunSimplex(tab, num_orig, sol.iterations) == Outcome::kUnbounded) {
    sol.status = LpStatus::kUnbounded;
    sol.value = -kInf;
    return sol;
  }

  Vector u = Vector::Zero(num_orig);
  std::vector<Index> kept_rows;
  for (Index r = 0; r < m; ++r) {
    const Index bj = tab.basis()[r];
    if (bj < num_orig) {
      u(bj) = tab.rhs(r);
      kept_rows.push_back(r);
    }
  }
  sol.status = LpStatus::kOptimal;
  sol.point = u.head(n) - u.segment(n, n);
  sol.value = n > 0 ? problem.objective.dot(sol.point) : 0.0;

  // Simplex multipliers from the final basis: B' pi = c_B.
  Vector pi = Vector::Zero(m);
  const Index k = static_cast<Index>(kept_rows.size());
  if (k > 0) {
    Matrix basis_mat(k, k);
    Vector cb(k);
    for (Index col = 0; col < k; ++col) {
      const Index r_basic = kept_rows[col];
      const Index bj = tab.basis()[r_basic];
      cb(col) = cost(bj);
      for (Index row = 0; row < k; ++row)
        basis_mat(row, col) = a(kept_rows[row], bj);
    }
    const Vector pk = basis_mat.transpose().fullPivLu().solve(cb);
    for (Index row = 0; row < k; ++row) pi(kept_rows[row]) = pk(row);
  }
  pi = pi.cwiseProduct(sign);
  sol.dual_ineq = -pi.head(m_in);
  sol.dual_eq = pi.tail(m_eq);
  return sol;
}

}  // namespace blp
