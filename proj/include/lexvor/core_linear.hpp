#pragma once

#include "lexvor/gram_stack.hpp"
#include "lexvor/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lexvor {

constexpr double kDefaultTol = 1e-9;

/// Nested filtration F^1 = H >= F^2 >= ... >= F^{r+1} = 0 cut out by the
/// leading components: F^j is the common nullspace of A_1, ..., A_{j-1}.
/// bases[j-1] spans F^j (so bases has r+1 entries and bases[r] has zero columns).
struct Filtration {
  std::vector<MatD> bases;
  std::optional<std::vector<MatQ>> exact_bases;
  std::vector<int> dims;  // dims[j-1] = dim F^j
  bool conditioning_warning = false;

  bool exact() const { return exact_bases.has_value(); }
  int levels() const { return static_cast<int>(bases.size()); }
};

Filtration filtration(const GramStack& G, double tol = kDefaultTol);

/// gr^j H = F^j / F^{j+1} carried by an explicit (non-canonical) complement basis.
struct GradedPiece {
  int level = 0;                 // 1-based
  MatD rep_basis;                // columns complete bases of F^{j+1} to F^j
  std::optional<MatQ> exact_rep_basis;
  MatD gram;                     // N_j = B^T A_j B on rep_basis
  std::optional<MatQ> exact_gram;
  int dim() const { return static_cast<int>(rep_basis.cols()); }
};

GradedPiece graded_piece(const GramStack& G, const Filtration& F, int j, double tol = kDefaultTol);

struct InnerProductVerdict {
  bool yes = false;
  int witness_level = 0;  // 1-based when yes == false
  VecD witness;           // gamma in F^j \ F^{j+1} with <gamma,gamma>_j <= 0
  std::optional<VecQ> exact_witness;
  bool conditioning_warning = false;
};

InnerProductVerdict is_inner_product(const GramStack& G, double tol = kDefaultTol);

/// H = H_1 [+] ... [+] H_r with H_j the canonical lift of gr^j H.
/// blocks[j-1] holds the lifted basis of H_j (ambient coordinates); it is also
/// the matrix of the lifting map in the rep_basis coordinates of gr^j H.
struct AODecomposition {
  std::vector<MatD> blocks;
  std::vector<MatD> lift_maps;
  std::optional<std::vector<MatQ>> exact_blocks;
};

/// Fully analyzed inner-product stack: filtration, graded pieces, lifts and the
/// almost orthogonal coordinate change. Throws NumericError("not an inner product")
/// when some graded gram fails positive definiteness.
struct StackModel {
  GramStack G;
  Filtration filt;
  std::vector<GradedPiece> graded;  // one per level 1..r (possibly zero-dimensional)
  AODecomposition ao;
  MatD basis;      // [blocks[0] | ... | blocks[r-1]], a basis of R^n
  MatD coords;     // basis^{-1}; rows grouped by block give AO coordinates
  std::optional<MatQ> exact_basis, exact_coords;
  std::vector<int> block_offsets;  // start column of each block inside `basis`

  int n() const { return G.n(); }
  int r() const { return G.r(); }
  int block_dim(int j) const { return graded[static_cast<std::size_t>(j) - 1].dim(); }
  /// AO component of x in block j (1-based), as an ambient vector.
  VecD component(const VecD& x, int j) const;
  VecQ component_exact(const VecQ& x, int j) const;
  /// Coordinates of the block-j component w.r.t. rep_basis of gr^j H.
  VecD block_coords(const VecD& x, int j) const;
  VecQ block_coords_exact(const VecQ& x, int j) const;
  /// q_j(x) for the block-j component (used by ref_norm and the lex machinery).
  double block_quad(const VecD& x, int j) const;
  Rational block_quad_exact(const VecQ& x, int j) const;
  /// Vector-valued quadratic form q(x) = (<x,x>_1, ..., <x,x>_r).
  VecD quad(const VecD& x) const;
  VecQ quad_exact(const VecQ& x) const;
};

StackModel analyze(const GramStack& G, double tol = kDefaultTol);

/// Matrix of the canonical lifting gr^j H -> H in rep_basis coordinates.
MatD lift(const GramStack& G, int j, double tol = kDefaultTol);

AODecomposition ao_decompose(const GramStack& G, double tol = kDefaultTol);

/// Component-wise form in AO coordinates: <x,y>^hat_j = <x_j, y_j>_j.
GramStack orthogonalize(const GramStack& G, double tol = kDefaultTol);

double ref_norm(const StackModel& M, const VecD& x);
double ref_norm(const GramStack& G, const VecD& x, double tol = kDefaultTol);

MatD pullback(const GramStack& G, const VecD& L);
MatQ pullback_exact(const GramStack& G, const VecQ& L);

struct SeparationEstimate {
  bool finite = false;
  double C = 0.0;           // smallest grid ratio with all sampled pullbacks PD
  double grid_max = 0.0;
  int rays_per_ratio = 0;
};

/// Upper estimate of the separation constant: smallest grid ratio rho such that
/// every sampled L with L_j/L_{j+1} >= rho yields a positive definite pullback.
/// Sampling: one deterministic geometric ray per ratio plus random log-uniform rays.
SeparationEstimate min_separation_constant(const GramStack& G,
                                           const std::vector<double>& ratio_grid,
                                           int random_rays = 16,
                                           unsigned seed = 1);

}  // namespace lexvor
