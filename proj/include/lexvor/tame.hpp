#pragma once

#include "lexvor/core_linear.hpp"
#include "lexvor/family.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lexvor {

/// Sampled constants for the degeneration properties at one time t:
///   (a)  min_j L_{t,j}/L_{t,j+1}                      (wants: -> infinity)
///   (b)  sup over unit AO block pairs i != j of |<x,y>_t| / L_{t,max(i,j)}   (wants: -> 0)
///   (b') the same sup over unit filtration pairs F^i x F^j                   (wants: bounded)
///   (c)  sup over unit block pairs of |L_{t,j}^{-1}<x,y>_t - <x,y>_j|        (wants: -> 0)
struct TamePoint {
  double t = 0;
  bool pd = true;                 // family PD at this t; non-PD points carry no constants
  std::optional<double> ratio_min;  // absent when r == 1
  double b = 0, bprime = 0, c = 0;
  // Numerical resolution of the double-precision evaluation at this t: the
  // dominant scale L_{t,1} swamps the deeper levels, so constants below the
  // floor are indistinguishable from zero and are treated as vanished.
  double b_floor = 0, c_floor = 0;
};

struct TameWitness {
  std::string property;  // "a" | "b" | "b'" | "c"
  double t = 0;
  int level_i = 0, level_j = 0;
  VecD x, y;  // ambient witness pair (unit for the reference norm)
};

enum class TameVerdict { ConsistentWithTame, ConsistentWithOmegaTameOnly, Refuted };

/// Sample-based report: verdicts describe trends on the given grid, never limits.
struct TameReport {
  std::vector<TamePoint> points;
  double slope_a = 0, slope_b = 0, slope_bprime = 0, slope_c = 0;  // log-log trend slopes
  double noise_margin = 0.05;
  TameVerdict verdict = TameVerdict::Refuted;
  std::optional<TameWitness> witness;
  int excluded_non_pd = 0;
};

/// Checks the degeneration properties of `family` against the inner product G
/// along `schedule` on an increasing t grid. Suprema are computed exactly per t
/// via generalized eigenvalue reformulations (no sampling); `t_grid` may be
/// empty, in which case the default diagnostic grid is used.
TameReport check_tame(const ScalarFamily& family, const GramStack& G,
                      const ParamSchedule& schedule, std::vector<double> t_grid = {},
                      double tol = kDefaultTol);
TameReport check_tame(const ScalarFamily& family, const StackModel& M,
                      const ParamSchedule& schedule, std::vector<double> t_grid = {});

/// Smallest D with D^{-1} sum L_j ||x_j||_j^2 <= ||x||_t^2 <= D sum L_j ||x_j||_j^2,
/// i.e. the extreme generalized eigenvalues of M_t against the orthogonalized
/// pullback. Returns +infinity when M_t degenerates against the pullback.
double uniform_equivalence(const ScalarFamily& family, const GramStack& G,
                           const ParamSchedule& schedule, double t, double tol = kDefaultTol);

enum class TameEquivalenceKind { TameEquivalent, OmegaTameEquivalentOnly, Inequivalent };

struct TameEquivalenceResult {
  TameEquivalenceKind kind = TameEquivalenceKind::Inequivalent;
  int witness_level = 0;     // level at which the first mismatch occurs
  std::string what;          // "filtration" | "graded form" | "ao block"
};

/// Decides tame / omega-tame equivalence of two inner products:
/// equal filtrations, equal graded forms on each F^j, and (for full tame
/// equivalence) equal almost orthogonal blocks H_j.
TameEquivalenceResult tame_equivalent(const GramStack& G, const GramStack& Gp,
                                      double tol = kDefaultTol);

}  // namespace lexvor
