#pragma once

#include "lexvor/numeric.hpp"

namespace lexvor {

/// Full symmetric eigensystem via cyclic Jacobi rotations.
/// Sweeps run until the off-diagonal Frobenius norm drops below
/// rel_off_tol * ||A||_F (relative; the inputs here span many decades).
struct SymEig {
  VecD values;   // ascending
  MatD vectors;  // columns, matching values
};

SymEig jacobi_eigensymmetric(MatD A, double rel_off_tol = 1e-12, int max_sweeps = 100);

/// Eigenvalues of the pencil (A, B) with B positive definite, ascending.
VecD generalized_eigenvalues(const MatD& A, const MatD& B);

/// sup { x^T B y : x^T Ni x = 1, y^T Nj y = 1 } with Ni, Nj positive definite,
/// i.e. the largest singular value of Li^{-1} B Lj^{-T}. Also returns maximizers.
struct BilinearOpNorm {
  double value = 0.0;
  VecD x, y;  // unit vectors for the Ni / Nj norms
};

BilinearOpNorm bilinear_opnorm(const MatD& B, const MatD& Ni, const MatD& Nj);

}  // namespace lexvor
