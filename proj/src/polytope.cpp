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
#include <numeric>
#include <set>
#include <string>

#include "blp/lp.hpp"

namespace blp {

namespace {

using Index = Eigen::Index;

double BinomialCapped(Index n, Index k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (c > cap) return c;
  }
  return std::round(c);
}

bool NextCombination(std::vector<Index>& idx, Index n) {
  const Index k = static_cast<Index>(idx.size());
  for (Index i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

Index Rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(kTol);
  return lu.rank();
}

bool Merge(std::vector<Vector>& points, const Vector& p) {
  for (const auto& q : points)
    if ((q - p).lpNorm<Eigen::Infinity>() <= kCrossTol) return false;
  points.push_back(p);
  return true;
}

}  // namespace

Polytope Polytope::FromInequalities(const Matrix& lhs, const Vector& rhs) {
  return {lhs, rhs, NoRows(lhs.cols()), Vector(0)};
}

bool Polytope::Contains(const Vector& point, double tol) const {
  for (Index i = 0; i < ineq_rhs.size(); ++i)
    if (ineq_lhs.row(i).dot(point) > ineq_rhs(i) + tol * (1.0 + std::abs(ineq_rhs(i))))
      return false;
  for (Index i = 0; i < eq_rhs.size(); ++i)
    if (std::abs(eq_lhs.row(i).dot(point) - eq_rhs(i)) >
        tol * (1.0 + std::abs(eq_rhs(i))))
      return false;
  return true;
}

std::vector<Vector> EnumerateVertices(const Polytope& poly,
                                      const VertexOptions& options) {
  const Index n = poly.dim();
  const Index m = poly.ineq_rhs.size();
  const Index m_eq = poly.eq_rhs.size();

  if (options.require_bounded && !IsBounded(poly)) {
    // Emptiness makes boundedness moot.
    LpProblem feas{Vector::Zero(n), poly.ineq_lhs, poly.ineq_rhs, poly.eq_lhs,
                   poly.eq_rhs};
    if (SolveLp(feas).optimal())
      throw Error(ErrorCode::kUnbounded, "polyhedron has a recession direction");
    return {};
  }

  std::vector<Vector> vertices;
  if (n == 0) {
    if (poly.Contains(Vector(0), kTol)) vertices.emplace_back(0);
    return vertices;
  }

  const Index eq_rank = Rank(poly.eq_lhs);
  const Index k = n - eq_rank;
  if (k > m) return vertices;
  const double count = BinomialCapped(m, k, static_cast<double>(options.budget));
  if (count > static_cast<double>(options.budget))
    throw Error(ErrorCode::kTooLarge,
                "vertex enumeration needs more than " +
                    std::to_string(options.budget) + " active sets");

  Matrix system(m_eq + k, n);
  Vector rhs(m_eq + k);
  if (m_eq > 0) {
    system.topRows(m_eq) = poly.eq_lhs;
    rhs.head(m_eq) = poly.eq_rhs;
  }
  std::vector<Index> idx(k);
  std::iota(idx.begin(), idx.end(), Index{0});
  do {
    for (Index j = 0; j < k; ++j) {
      system.row(m_eq + j) = poly.ineq_lhs.row(idx[j]);
      rhs(m_eq + j) = poly.ineq_rhs(idx[j]);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(system);
    qr.setThreshold(kTol);
    if (qr.rank() < n) continue;
    const Vector p = qr.solve(rhs);
    if (!p.allFinite()) continue;
    const double resid = (system * p - rhs).lpNorm<Eigen::Infinity>();
    if (resid > 1e-8 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) continue;
    if (!poly.Contains(p, kTol)) continue;
    Merge(vertices, p);
  } while (NextCombination(idx, m));
  return vertices;
}

int AffineDimension(const std::vector<Vector>& vertices) {
  if (vertices.empty()) return -1;
  if (vertices.size() == 1) return 0;
  const Index n = vertices.front().size();
  Matrix diff(n, static_cast<Index>(vertices.size()) - 1);
  double scale = 1.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    diff.col(static_cast<Index>(i) - 1) = vertices[i] - vertices.front();
    scale = std::max(scale, vertices[i].lpNorm<Eigen::Infinity>());
  }
  Eigen::JacobiSVD<Matrix> svd(diff);
  const Vector& s = svd.singularValues();
  int rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > kTol * scale) ++rank;
  return rank;
}

bool IsBounded(const Polytope& poly) {
  const Index n = poly.dim();
  const Index m = poly.ineq_rhs.size();
  // Recession cone cut by the unit box.
  Matrix lhs(m + 2 * n, n);
  Vector rhs(m + 2 * n);
  lhs.topRows(m) = poly.ineq_lhs;
  rhs.head(m).setZero();
  lhs.middleRows(m, n) = Matrix::Identity(n, n);
  lhs.bottomRows(n) = -Matrix::Identity(n, n);
  rhs.tail(2 * n).setOnes();
  LpProblem lp{Vector::Zero(n), lhs, rhs, poly.eq_lhs,
               Vector::Zero(poly.eq_rhs.size())};
  if (lp.eq_lhs.rows() == 0) lp.eq_lhs = NoRows(n);
  for (Index i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      lp.objective.setZero();
      lp.objective(i) = -s;
      const LpSolution sol = SolveLp(lp);
      if (sol.optimal() && -sol.value > 1e-8) return false;
    }
  }
  return true;
}

namespace {

using Simplex = std::vector<std::size_t>;

class FanTriangulator {
 public:
  FanTriangulator(const Polytope& poly, const std::vector<Vector>& vertices)
      : vertices_(vertices) {
    const Index m = poly.ineq_rhs.size();
    tight_.assign(m, std::vector<bool>(vertices.size(), false));
    for (Index i = 0; i < m; ++i) {
      const double tol = 1e-7 * (1.0 + std::abs(poly.ineq_rhs(i)));
      for (std::size_t v = 0; v < vertices.size(); ++v)
        tight_[i][v] =
            std::abs(poly.ineq_lhs.row(i).dot(vertices[v]) - poly.ineq_rhs(i)) <= tol;
    }
  }

  // Triangulates the face spanned by `face` (of affine dimension `dim`) by
  // coning from its first vertex over every facet not containing it.
  std::vector<Simplex> Triangulate(const std::vector<std::size_t>& face, int dim) const {
    if (dim == 0 || face.size() == static_cast<std::size_t>(dim) + 1)
      return {face};
    const std::size_t apex = face.front();
    std::set<std::vector<std::size_t>> facets;
    for (const auto& row : tight_) {
      std::vector<std::size_t> sub;
      for (std::size_t v : face)
        if (row[v]) sub.push_back(v);
      if (sub.size() == face.size() || sub.size() < static_cast<std::size_t>(dim))
        continue;
      if (std::find(sub.begin(), sub.end(), apex) != sub.end()) continue;
      if (Dimension(sub) != dim - 1) continue;
      facets.insert(std::move(sub));
    }
    std::vector<Simplex> out;
    for (const auto& facet : facets) {
      for (Simplex s : Triangulate(facet, dim - 1)) {
        s.insert(s.begin(), apex);
        out.push_back(std::move(s));
      }
    }
    return out;
  }

  int Dimension(const std::vector<std::size_t>& ids) const {
    std::vector<Vector> pts;
    pts.reserve(ids.size());
    for (std::size_t v : ids) pts.push_back(vertices_[v]);
    return AffineDimension(pts);
  }

 private:
  const std::vector<Vector>& vertices_;
  std::vector<std::vector<bool>> tight_;
};

}  // namespace

Vector CentroidFromVertices(const Polytope& poly,
                            const std::vector<Vector>& vertices) {
  if (vertices.empty())
    throw Error(ErrorCode::kEmptyPolytope, "centroid of an empty polytope");
  const int dim = AffineDimension(vertices);
  if (dim == 0) return vertices.front();

  FanTriangulator fan(poly, vertices);
  std::vector<std::size_t> all(vertices.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto simplices = fan.Triangulate(all, dim);

  const Index n = vertices.front().size();
  double factorial = 1.0;
  for (int i = 2; i <= dim; ++i) factorial *= i;

  Vector weighted = Vector::Zero(n);
  double total = 0.0;
  for (const auto& s : simplices) {
    Matrix edges(n, dim);
    Vector mean = vertices[s[0]];
    for (int j = 1; j <= dim; ++j) {
      edges.col(j - 1) = vertices[s[j]] - vertices[s[0]];
      mean += vertices[s[j]];
    }
    mean /= static_cast<double>(dim + 1);
    const double gram = (edges.transpose() * edges).determinant();
    const double measure = std::sqrt(std::max(0.0, gram)) / factorial;
    weighted += measure * mean;
    total += measure;
  }
  if (!(total > 0.0))
    throw Error(ErrorCode::kNumericalFailure, "degenerate triangulation");
  return weighted / total;
}

Vector Centroid(const Polytope& poly) {
  if (!IsBounded(poly)) {
    LpProblem feas{Vector::Zero(poly.dim()), poly.ineq_lhs, poly.ineq_rhs,
                   poly.eq_lhs, poly.eq_rhs};
    if (feas.eq_lhs.rows() == 0) feas.eq_lhs = NoRows(poly.dim());
    if (!SolveLp(feas).optimal())
      throw Error(ErrorCode::kEmptyPolytope, "centroid of an empty polytope");
    throw Error(ErrorCode::kUnboundedPolytope, "centroid of an unbounded set");
  }
  return CentroidFromVertices(poly, EnumerateVertices(poly));
}

}  // namespace blp
