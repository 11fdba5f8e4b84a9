#pragma once

#include "lexvor/enumerate.hpp"
#include "lexvor/family.hpp"
#include "lexvor/lattice.hpp"
#include "lexvor/polytope.hpp"

#include <optional>
#include <vector>

namespace lexvor {

/// Closed Voronoi cell of the origin for a positive definite form Q and the
/// lattice generated by the columns of `basis` (ambient coordinates).
/// Half-spaces 2 <x, gamma> <= <gamma, gamma> over Voronoi-relevant vectors
/// found by parity-class shortest-vector enumeration; vertices by the
/// combinatorial H-to-V conversion. Dimension budget n <= 6.
PolytopeD voronoi_cell_scalar(const MatD& Q, const MatD& basis, double tol = 1e-9);
PolytopeQ voronoi_cell_scalar_exact(const MatQ& Q, const MatQ& basis);

/// Higher-rank Voronoi cell: per-level lifted graded cells and their Minkowski
/// sum (the closure). Exact; translate by `center` for cells away from 0.
struct HigherVorCell {
  VecQ center;
  std::vector<int> levels;               // levels j with dim gr^j > 0, in order
  std::vector<PolytopeQ> level_cells;    // lifted graded cells P_j, ambient coords
  PolytopeQ closure;                     // P_1 [+] ... [+] P_r
};

HigherVorCell higher_voronoi_closure(const StackModel& M, const GradedLatticeData& lat,
                                     const VecQ* center = nullptr);

enum class Membership { In, Out, TieAmbiguous };

/// Lexicographic membership of x in the higher-rank Voronoi cell of gamma for
/// the candidate site list (which must contain every relevant competitor).
Membership lex_membership(const StackModel& M, const std::vector<VecQ>& sites,
                          const VecQ& gamma, const VecQ& x);
Membership lex_membership(const StackModel& M, const std::vector<VecD>& sites,
                          const VecD& gamma, const VecD& x, double tau_tie = 1e-9);

/// Finite candidate subset S_B of the lattice attached to a compact box:
/// level-by-level radius construction with empirical growth, verified on a grid
/// against the exhaustive nearest-point oracle at the extreme sampled times.
struct CandidateSet {
  std::vector<VecQ> points;
  std::vector<VecD> points_d;
  std::vector<double> radii;   // per-level trace R_j
  int grid_per_axis = 0;
  bool verified = false;
};

CandidateSet candidate_set(const StackModel& M, const LatticeModel& L,
                           const GradedLatticeData& lat, const VecD& box_lo, const VecD& box_hi,
                           const ParamSchedule& schedule, double t_min, double t_max = 1e6,
                           std::size_t max_points_per_level = 10000);

/// Per-t Hausdorff distances between the scalar cells W_t of the degenerating
/// family and the closed higher-rank cell (optionally clipped to a window box).
struct SweepPoint {
  double t = 0;
  double dH = 0;
  bool pd = true;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  bool monotone_decreasing = true;
  double final_dH = 0;
};

SweepResult hausdorff_sweep(const ScalarFamily& family, const StackModel& M,
                            const LatticeModel& L, const GradedLatticeData& lat,
                            const VecQ& gamma, const std::vector<double>& t_grid,
                            const std::optional<std::pair<VecD, VecD>>& window = std::nullopt,
                            int threads = 1);

/// Criterion (2) of the compact-convergence characterization: per covering box,
/// the Hausdorff distance between the windowed point sets.
std::vector<double> compact_hausdorff_distance(
    const std::vector<VecD>& A, const std::vector<VecD>& B,
    const std::vector<std::pair<VecD, VecD>>& windows);

/// Membership in the polydisk B_rho(z): x - z falls in some F^j with
/// 0 < q_j(x - z) < rho_j at its exact level, or x = z.
bool polydisk_contains(const StackModel& M, const VecD& z, const VecD& rho, const VecD& x,
                       double tol = kDefaultTol);
bool polydisk_contains(const StackModel& M, const VecQ& z, const VecQ& rho, const VecQ& x);

}  // namespace lexvor
