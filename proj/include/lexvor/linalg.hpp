#pragma once

#include "lexvor/numeric.hpp"

#include <optional>
#include <vector>

namespace lexvor {

// ---- Exact (rational) kernels -------------------------------------------

int rank_q(const MatQ& A);

/// Columns form a basis of { x : A x = 0 }.
MatQ nullspace_q(const MatQ& A);

/// Does v lie in the column span of B?
bool in_span_q(const MatQ& B, const VecQ& v);

/// Mutual span containment of the column spaces.
bool same_span_q(const MatQ& A, const MatQ& B);

/// Solve A x = b for square invertible A.
VecQ solve_q(const MatQ& A, const VecQ& b);

/// Greedily pick columns of `pool` that extend span(fixed) to span([fixed pool]).
/// Returns the chosen column indices in increasing order.
std::vector<int> pivot_complete_q(const MatQ& fixed, const MatQ& pool);

/// Exact positive-definiteness test by congruence diagonalization.
/// Returns a witness v with v^T N v <= 0 when N is not positive definite.
std::optional<VecQ> non_pd_witness_q(const MatQ& N);

// ---- Float kernels (rank decisions via SVD) ------------------------------

struct RankInfo {
  int rank = 0;
  bool conditioning_warning = false;  // some singular value within 10x of the cut
};

RankInfo rank_d(const MatD& A, double tol);

/// Orthonormal basis of the nullspace; sets warning when the rank decision is marginal.
MatD nullspace_d(const MatD& A, double tol, bool* warning = nullptr);

bool in_span_d(const MatD& B, const VecD& v, double tol);
bool same_span_d(const MatD& A, const MatD& B, double tol);

std::vector<int> pivot_complete_d(const MatD& fixed, const MatD& pool, double tol);

}  // namespace lexvor
