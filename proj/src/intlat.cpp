#include "lexvor/intlat.hpp"

#include <boost/multiprecision/gmp.hpp>

namespace lexvor {

MatQ to_rational(const MatZ& A) {
  MatQ B(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) B(i, j) = Rational(A(i, j));
  return B;
}

MatZ to_integer(const MatQ& A) {
  MatZ B(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      if (denominator(A(i, j)) != 1) throw NumericError("to_integer: non-integer entry");
      B(i, j) = numerator(A(i, j));
    }
  return B;
}

namespace {

using boost::multiprecision::abs;

// Clear row and column t of A by unimodular row/column operations,
// pivoting on the smallest nonzero entry of the trailing block.
// Returns false when the trailing block is zero.
bool eliminate_at(MatZ& A, MatZ& U, MatZ& V, int t) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  while (true) {
    int pi = -1, pj = -1;
    Integer best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j)
        if (A(i, j) != 0 && (pi < 0 || abs(A(i, j)) < best)) {
          pi = i; pj = j; best = abs(A(i, j));
        }
    if (pi < 0) return false;
    if (pi != t) { A.row(pi).swap(A.row(t)); U.row(pi).swap(U.row(t)); }
    if (pj != t) { A.col(pj).swap(A.col(t)); V.col(pj).swap(V.col(t)); }
    bool clean = true;
    for (int i = t + 1; i < m; ++i) {
      if (A(i, t) == 0) continue;
      Integer q = A(i, t) / A(t, t);
      if (q != 0) { A.row(i) -= q * A.row(t); U.row(i) -= q * U.row(t); }
      if (A(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < n; ++j) {
      if (A(t, j) == 0) continue;
      Integer q = A(t, j) / A(t, t);
      if (q != 0) { A.col(j) -= q * A.col(t); V.col(j) -= q * V.col(t); }
      if (A(t, j) != 0) clean = false;
    }
    if (clean) {
      if (A(t, t) < 0) { A.row(t) = -A.row(t); U.row(t) = -U.row(t); }
      return true;
    }
  }
}

}  // namespace

SmithResult smith(MatZ A) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  MatZ U = MatZ::Identity(m, m);
  MatZ V = MatZ::Identity(n, n);
  int rank = 0;
  const int steps = std::min(m, n);
  for (int t = 0; t < steps; ++t) {
    if (!eliminate_at(A, U, V, t)) break;
    ++rank;
  }
  // Enforce the divisibility chain s_t | s_{t+1}.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int t = 0; t + 1 < rank; ++t) {
      if (A(t + 1, t + 1) % A(t, t) != 0) {
        A.col(t) += A.col(t + 1);
        V.col(t) += V.col(t + 1);
        for (int s = t; s < rank; ++s) eliminate_at(A, U, V, s);
        changed = true;
      }
    }
  }
  SmithResult out;
  out.U = std::move(U);
  out.V = std::move(V);
  out.S = std::move(A);
  out.rank = rank;
  return out;
}

MatZ integer_kernel(const MatZ& A) {
  SmithResult sm = smith(A);
  const int n = static_cast<int>(A.cols());
  return sm.V.rightCols(n - sm.rank);
}

MatZ integer_kernel_of_rational(const MatQ& A) {
  MatZ B(A.rows(), A.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Integer l = 1;
    for (Eigen::Index j = 0; j < A.cols(); ++j) l = lcm(l, Integer(denominator(A(i, j))));
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      B(i, j) = Integer(numerator(A(i, j))) * (l / Integer(denominator(A(i, j))));
  }
  return integer_kernel(B);
}

MatZ complete_to_basis(const MatZ& V, const MatZ& U) {
  const int k = static_cast<int>(V.cols());
  const int kp = static_cast<int>(U.cols());
  if (kp == 0) return V;
  MatQ Vq = to_rational(V), Uq = to_rational(U);
  Eigen::FullPivLU<MatQ> lu(MatQ(Vq.transpose() * Vq));
  MatQ Cq = lu.solve(MatQ(Vq.transpose() * Uq));
  if ((Vq * Cq - Uq).cwiseAbs().maxCoeff() != 0)
    throw NumericError("complete_to_basis: sublattice not contained in lattice span");
  MatZ C = to_integer(Cq);
  SmithResult sm = smith(C);
  if (sm.rank != kp) throw NumericError("complete_to_basis: sublattice basis is degenerate");
  for (int i = 0; i < kp; ++i)
    if (sm.S(i, i) != 1)
      throw NumericError("complete_to_basis: sublattice is not saturated");
  // C = X [I;0] Y with X = U_sm^{-1}; the first kp columns of V*X generate lattice(U).
  Eigen::FullPivLU<MatQ> luU(to_rational(sm.U));
  MatZ X = to_integer(MatQ(luU.inverse()));
  MatZ W = V * X;
  // Normalize: make the leading columns literally U (still a basis of lattice(V)).
  W.leftCols(kp) = U;
  return W;
}

}  // namespace lexvor
