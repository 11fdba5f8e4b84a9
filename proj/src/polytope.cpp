#include "lexvor/polytope.hpp"

#include "lexvor/linalg.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <functional>
#include <set>
#include <vector>

namespace lexvor {

namespace {

// Visit all n-subsets of {0..m-1}; the visitor returns false to abort.
template <typename F>
void for_each_subset(int m, int n, std::size_t budget, F&& visit) {
  if (n > m) return;
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::size_t count = 0;
  while (true) {
    if (++count > budget) throw BudgetError("polytope: vertex enumeration budget exceeded");
    visit(idx);
    int i = n - 1;
    while (i >= 0 && idx[i] == m - n + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int k = i + 1; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
}

}  // namespace

PolytopeD from_hrep(const MatD& normals, const VecD& offsets, double tol) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  PolytopeD P;
  P.normals = normals;
  P.offsets = offsets;
  std::vector<VecD> verts;
  double scale = std::max(1.0, normals.norm());
  for_each_subset(m, n, enumeration_budget(8'000'000), [&](const std::vector<int>& idx) {
    MatD A(n, n);
    VecD b(n);
    for (int i = 0; i < n; ++i) {
      A.row(i) = normals.row(idx[i]);
      b(i) = offsets(idx[i]);
    }
    Eigen::FullPivLU<MatD> lu(A);
    lu.setThreshold(tol);
    if (lu.rank() != n) return;
    VecD x = lu.solve(b);
    VecD slack = normals * x - offsets;
    if (slack.maxCoeff() > tol * scale * std::max(1.0, x.norm())) return;
    for (const auto& v : verts)
      if ((v - x).norm() <= 1e-8 * std::max(1.0, x.norm())) return;
    verts.push_back(x);
  });
  P.vertices = MatD(n, static_cast<int>(verts.size()));
  for (std::size_t k = 0; k < verts.size(); ++k) P.vertices.col(static_cast<int>(k)) = verts[k];
  P.consistent = true;
  return P;
}

PolytopeQ from_hrep(const MatQ& normals, const VecQ& offsets) {
  const int n = static_cast<int>(normals.cols());
  const int m = static_cast<int>(normals.rows());
  PolytopeQ P;
  P.normals = normals;
  P.offsets = offsets;
  std::vector<VecQ> verts;
  for_each_subset(m, n, enumeration_budget(8'000'000), [&](const std::vector<int>& idx) {
    MatQ A(n, n);
    VecQ b(n);
    for (int i = 0; i < n; ++i) {
      A.row(i) = normals.row(idx[i]);
      b(i) = offsets(idx[i]);
    }
    Eigen::FullPivLU<MatQ> lu(A);
    lu.setThreshold(Rational(0));
    if (lu.rank() != n) return;
    VecQ x = lu.solve(b);
    for (int i = 0; i < m; ++i) {
      Rational s = (normals.row(i) * x)(0, 0);
      if (s > offsets(i)) return;
    }
    for (const auto& v : verts)
      if (v == x) return;
    verts.push_back(x);
  });
  P.vertices = MatQ(n, static_cast<int>(verts.size()));
  for (std::size_t k = 0; k < verts.size(); ++k) P.vertices.col(static_cast<int>(k)) = verts[k];
  P.consistent = true;
  return P;
}

PolytopeD to_double(const PolytopeQ& P) {
  PolytopeD Q;
  Q.normals = lexvor::to_double(MatQ(P.normals));
  Q.offsets = lexvor::to_double(VecQ(P.offsets));
  Q.vertices = lexvor::to_double(MatQ(P.vertices));
  Q.consistent = P.consistent;
  return Q;
}

bool contains(const PolytopeD& P, const VecD& x, double tol) {
  if (P.normals.rows() == 0) return true;
  VecD slack = P.normals * x - P.offsets;
  double scale = std::max(1.0, x.norm()) * std::max(1.0, P.normals.rowwise().norm().maxCoeff());
  return slack.maxCoeff() <= tol * scale;
}

bool contains(const PolytopeQ& P, const VecQ& x) {
  for (int i = 0; i < P.normals.rows(); ++i)
    if ((P.normals.row(i) * x)(0, 0) > P.offsets(i)) return false;
  return true;
}

PolytopeD clip(const PolytopeD& P, const MatD& normals, const VecD& offsets, double tol) {
  MatD A(P.normals.rows() + normals.rows(), P.normals.cols());
  VecD b(P.offsets.size() + offsets.size());
  A << P.normals, normals;
  b << P.offsets, offsets;
  return from_hrep(A, b, tol);
}

void append_box(MatD& normals, VecD& offsets, const VecD& lo, const VecD& hi) {
  const int n = static_cast<int>(lo.size());
  MatD A = MatD::Zero(2 * n, n);
  VecD b(2 * n);
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1.0;
    b(2 * i) = hi(i);
    A(2 * i + 1, i) = -1.0;
    b(2 * i + 1) = -lo(i);
  }
  if (normals.rows() == 0) {
    normals = A;
    offsets = b;
    return;
  }
  MatD A2(normals.rows() + 2 * n, n);
  VecD b2(offsets.size() + 2 * n);
  A2 << normals, A;
  b2 << offsets, b;
  normals = A2;
  offsets = b2;
}

namespace {

// Caratheodory fallback: search vertex subsets of size <= n+1 for the closest
// convex combination. Exact-ish and stall-free; only used when the active-set
// iteration gives up.
VecD project_by_vertex_subsets(const PolytopeD& P, const VecD& p) {
  const int n = P.dim();
  const int k = P.vertex_count();
  if (k == 0) throw NumericError("project_point: empty polytope");
  double best = std::numeric_limits<double>::infinity();
  VecD best_x = P.vertices.col(0);
  const int maxsz = std::min(n + 1, k);
  std::vector<int> subset;
  std::function<void(int, int)> rec = [&](int start, int size) {
    if (size > 0) {
      // Minimize ||V s lambda - p|| subject to sum lambda = 1 (KKT system),
      // then keep feasible (lambda >= 0) candidates.
      const int s = size;
      MatD V(n, s);
      for (int i = 0; i < s; ++i) V.col(i) = P.vertices.col(subset[static_cast<std::size_t>(i)]);
      MatD K = MatD::Zero(s + 1, s + 1);
      K.topLeftCorner(s, s) = V.transpose() * V;
      K.topRightCorner(s, 1).setOnes();
      K.bottomLeftCorner(1, s).setOnes();
      VecD rhs(s + 1);
      rhs.head(s) = V.transpose() * p;
      rhs(s) = 1.0;
      Eigen::FullPivLU<MatD> lu(K);
      if (lu.rank() == s + 1) {
        VecD sol = lu.solve(rhs);
        bool feas = true;
        for (int i = 0; i < s; ++i)
          if (sol(i) < -1e-12) feas = false;
        if (feas) {
          VecD x = V * sol.head(s);
          double d = (x - p).norm();
          if (d < best) {
            best = d;
            best_x = x;
          }
        }
      }
    }
    if (size == maxsz) return;
    for (int i = start; i < k; ++i) {
      subset.push_back(i);
      rec(i + 1, size + 1);
      subset.pop_back();
    }
  };
  rec(0, 0);
  return best_x;
}

}  // namespace

VecD project_point(const PolytopeD& P, const VecD& p, double tol) {
  if (contains(P, p, tol)) return p;
  const int n = P.dim();
  const int m = P.facet_candidates();
  if (P.vertex_count() == 0) throw NumericError("project_point: empty polytope");
  // Feasible start: vertex average.
  VecD x = P.vertices.rowwise().mean();
  std::vector<int> active;
  const int max_iter = 100 * (m + 1);
  for (int iter = 0; iter < max_iter; ++iter) {
    // Equality-constrained minimizer over the current working set.
    VecD xstar;
    VecD lambda;
    if (active.empty()) {
      xstar = p;
    } else {
      const int s = static_cast<int>(active.size());
      MatD Aw(s, n);
      VecD bw(s);
      for (int i = 0; i < s; ++i) {
        Aw.row(i) = P.normals.row(active[static_cast<std::size_t>(i)]);
        bw(i) = P.offsets(active[static_cast<std::size_t>(i)]);
      }
      MatD AAt = Aw * Aw.transpose();
      Eigen::CompleteOrthogonalDecomposition<MatD> cod(AAt);
      lambda = cod.solve(Aw * p - bw);
      xstar = p - Aw.transpose() * lambda;
    }
    VecD d = xstar - x;
    if (d.norm() <= tol * std::max(1.0, x.norm())) {
      // Stationary on the working set; check multipliers.
      int drop = -1;
      double most_neg = -tol;
      for (std::size_t i = 0; i < active.size(); ++i)
        if (lambda.size() > 0 && lambda(static_cast<int>(i)) < most_neg) {
          most_neg = lambda(static_cast<int>(i));
          drop = static_cast<int>(i);
        }
      if (drop < 0) return x;
      active.erase(active.begin() + drop);
      continue;
    }
    // Ratio test against inactive constraints.
    double alpha = 1.0;
    int blocking = -1;
    for (int i = 0; i < m; ++i) {
      if (std::find(active.begin(), active.end(), i) != active.end()) continue;
      double ad = P.normals.row(i).dot(d);
      if (ad <= tol) continue;
      double gap = P.offsets(i) - P.normals.row(i).dot(x);
      double a = gap / ad;
      if (a < alpha) {
        alpha = a;
        blocking = i;
      }
    }
    if (alpha < 0) alpha = 0;
    x += alpha * d;
    if (blocking >= 0) {
      active.push_back(blocking);
      if (static_cast<int>(active.size()) > n) {
        // Working set too large (degeneracy); restart via the fallback.
        return project_by_vertex_subsets(P, p);
      }
    } else if (alpha == 1.0 && active.empty()) {
      return x;  // reached the unconstrained minimizer feasibly
    }
  }
  return project_by_vertex_subsets(P, p);
}

double distance_to(const PolytopeD& P, const VecD& p, double tol) {
  return (project_point(P, p, tol) - p).norm();
}

double hausdorff_distance(const PolytopeD& P, const PolytopeD& Q, double tol) {
  if (P.vertex_count() == 0 || Q.vertex_count() == 0)
    throw NumericError("hausdorff_distance: empty polytope");
  double h = 0.0;
  for (int k = 0; k < P.vertex_count(); ++k)
    h = std::max(h, distance_to(Q, VecD(P.vertices.col(k)), tol));
  for (int k = 0; k < Q.vertex_count(); ++k)
    h = std::max(h, distance_to(P, VecD(Q.vertices.col(k)), tol));
  return h;
}

namespace {

template <typename IncidenceTight>
std::size_t face_count_impl(int m, int k, IncidenceTight&& tight) {
  if (k == 0) return 0;
  // incidence[i] = vertex set tight at halfspace i, as a bitmask (k <= 64 here).
  if (k > 64) throw BudgetError("face_count: too many vertices");
  std::vector<std::uint64_t> facet_mask(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    for (int v = 0; v < k; ++v)
      if (tight(i, v)) facet_mask[static_cast<std::size_t>(i)] |= (1ull << v);
  std::uint64_t full = k == 64 ? ~0ull : ((1ull << k) - 1);
  std::set<std::uint64_t> faces;
  std::vector<std::uint64_t> frontier{full};
  faces.insert(full);
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t f : frontier) {
      for (int i = 0; i < m; ++i) {
        std::uint64_t g = f & facet_mask[static_cast<std::size_t>(i)];
        if (g == 0) continue;
        if (faces.insert(g).second) next.push_back(g);
      }
    }
    frontier = std::move(next);
  }
  return faces.size();
}

}  // namespace

std::size_t face_count(const PolytopeD& P, double tol) {
  double scale = std::max(1.0, P.normals.norm());
  return face_count_impl(P.facet_candidates(), P.vertex_count(), [&](int i, int v) {
    return std::abs(P.normals.row(i).dot(P.vertices.col(v)) - P.offsets(i)) <= tol * scale;
  });
}

std::size_t face_count(const PolytopeQ& P) {
  return face_count_impl(P.facet_candidates(), P.vertex_count(), [&](int i, int v) {
    return (P.normals.row(i) * P.vertices.col(v))(0, 0) == P.offsets(i);
  });
}

double support_value(const PolytopeD& P, const VecD& d) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < P.vertex_count(); ++k) best = std::max(best, d.dot(P.vertices.col(k)));
  return best;
}

}  // namespace lexvor
