#pragma once

#include "lexvor/numeric.hpp"

#include <cstddef>
#include <vector>

namespace lexvor {

/// Convex polytope carried in both representations.
/// hrep rows: normals(i) . x <= offsets(i). vrep: vertex columns.
/// Vertex enumeration is combinatorial (n-subsets of halfspaces), sized for the
/// small cells this library produces; budgets guard the combination count.
template <typename T>
struct Polytope {
  Mat<T> normals;   // m x n
  Vec<T> offsets;   // m
  Mat<T> vertices;  // n x k
  bool consistent = false;

  int dim() const { return static_cast<int>(normals.cols()); }
  int facet_candidates() const { return static_cast<int>(normals.rows()); }
  int vertex_count() const { return static_cast<int>(vertices.cols()); }
};

using PolytopeD = Polytope<double>;
using PolytopeQ = Polytope<Rational>;

PolytopeD from_hrep(const MatD& normals, const VecD& offsets, double tol = 1e-9);
PolytopeQ from_hrep(const MatQ& normals, const VecQ& offsets);

PolytopeD to_double(const PolytopeQ& P);

bool contains(const PolytopeD& P, const VecD& x, double tol = 1e-9);
bool contains(const PolytopeQ& P, const VecQ& x);

/// Intersection with extra halfspaces (re-runs vertex enumeration).
PolytopeD clip(const PolytopeD& P, const MatD& normals, const VecD& offsets, double tol = 1e-9);

/// Axis box [lo, hi] as halfspaces.
void append_box(MatD& normals, VecD& offsets, const VecD& lo, const VecD& hi);

/// Euclidean projection of p onto P (active-set QP, falls back to a
/// Caratheodory vertex-subset search if the iteration stalls).
VecD project_point(const PolytopeD& P, const VecD& p, double tol = 1e-10);

double distance_to(const PolytopeD& P, const VecD& p, double tol = 1e-10);

/// Hausdorff distance between convex polytopes: the sup of d(., other) over a
/// convex set is attained at a vertex, so vertices suffice on both sides.
double hausdorff_distance(const PolytopeD& P, const PolytopeD& Q, double tol = 1e-10);

/// Number of nonempty faces of all dimensions (vertices, edges, ..., the
/// polytope itself), computed from vertex-facet incidence closure.
std::size_t face_count(const PolytopeD& P, double tol = 1e-9);
std::size_t face_count(const PolytopeQ& P);

/// max over vertices of d . v
double support_value(const PolytopeD& P, const VecD& d);

}  // namespace lexvor
