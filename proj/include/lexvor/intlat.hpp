#pragma once

#include "lexvor/numeric.hpp"

namespace lexvor {

/// Smith decomposition U * A * V = S with U, V unimodular and S diagonal,
/// diagonal entries nonnegative with the divisibility chain s_1 | s_2 | ...
struct SmithResult {
  MatZ U, S, V;
  int rank = 0;
};

SmithResult smith(MatZ A);

/// Basis (columns) of the integer kernel { x in Z^cols : A x = 0 }.
/// The result generates a saturated sublattice.
MatZ integer_kernel(const MatZ& A);

/// Clear denominators row-wise, then take the integer kernel.
MatZ integer_kernel_of_rational(const MatQ& A);

/// Given a basis V of a lattice L (columns) and a basis U of a saturated
/// sublattice of L, return a basis of L whose first U.cols() columns generate
/// the sublattice. Throws if U does not sit inside L or is not saturated.
MatZ complete_to_basis(const MatZ& V, const MatZ& U);

MatQ to_rational(const MatZ& A);
MatZ to_integer(const MatQ& A);  // throws unless all entries are integers

}  // namespace lexvor
