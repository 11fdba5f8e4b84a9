// Test-only oracles, independent of the library's linear algebra paths:
// plain rational row reduction, exhaustive box minimization, and random
// instance generators. Kept deliberately naive.
#pragma once

#include "lexvor/gram_stack.hpp"

#include <random>
#include <vector>

namespace oracle {

using lexvor::MatQ;
using lexvor::Rational;
using lexvor::VecQ;

using RMat = std::vector<std::vector<Rational>>;

inline RMat to_rows(const MatQ& A) {
  RMat M(static_cast<std::size_t>(A.rows()),
         std::vector<Rational>(static_cast<std::size_t>(A.cols())));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = A(i, j);
  return M;
}

// Row echelon form in place; returns pivot columns.
inline std::vector<int> row_reduce(RMat& M) {
  std::vector<int> pivots;
  if (M.empty()) return pivots;
  std::size_t rows = M.size(), cols = M[0].size();
  std::size_t rr = 0;
  for (std::size_t c = 0; c < cols && rr < rows; ++c) {
    std::size_t p = rr;
    while (p < rows && M[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[rr]);
    Rational d = M[rr][c];
    for (std::size_t j = 0; j < cols; ++j) M[rr][j] /= d;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rr || M[i][c] == 0) continue;
      Rational f = M[i][c];
      for (std::size_t j = 0; j < cols; ++j) M[i][j] -= f * M[rr][j];
    }
    pivots.push_back(static_cast<int>(c));
    ++rr;
  }
  return pivots;
}

// Nullspace basis (columns) via free-variable back substitution.
inline MatQ nullspace(const MatQ& A) {
  RMat M = to_rows(A);
  auto pivots = row_reduce(M);
  int n = static_cast<int>(A.cols());
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<int> freev;
  for (int c = 0; c < n; ++c)
    if (!is_pivot[static_cast<std::size_t>(c)]) freev.push_back(c);
  MatQ K = MatQ::Zero(n, static_cast<int>(freev.size()));
  for (std::size_t k = 0; k < freev.size(); ++k) {
    K(freev[k], static_cast<int>(k)) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      K(pivots[r], static_cast<int>(k)) = -M[r][static_cast<std::size_t>(freev[k])];
  }
  return K;
}

// Sylvester test: symmetric N is positive definite iff every leading
// principal minor is positive.
inline bool sylvester_pd(const MatQ& N) {
  int n = static_cast<int>(N.rows());
  for (int k = 1; k <= n; ++k) {
    MatQ sub = N.topLeftCorner(k, k);
    if (MatQ(sub).determinant() <= 0) return false;
  }
  return true;
}

struct StackOracle {
  std::vector<int> dims;  // dim F^1, ..., dim F^{r+1}
  bool inner_product = true;
  int fail_level = 0;
};

// Filtration dims and the inner-product verdict by exhaustive row reduction.
inline StackOracle analyze_stack(const std::vector<MatQ>& mats) {
  StackOracle out;
  int n = static_cast<int>(mats[0].rows());
  int r = static_cast<int>(mats.size());
  MatQ basis = MatQ::Identity(n, n);  // F^1
  out.dims.push_back(n);
  for (int j = 1; j <= r; ++j) {
    // Graded gram on a complement of F^{j+1} = basis ∩ null(A_j) inside F^j.
    MatQ K = nullspace(MatQ(mats[static_cast<std::size_t>(j) - 1] * basis));
    MatQ next = basis * K;  // F^{j+1}
    // Complement columns: columns of `basis` independent from span(next).
    MatQ cur = next;
    std::vector<int> comp;
    for (int c = 0; c < basis.cols(); ++c) {
      MatQ aug(n, cur.cols() + 1);
      aug << cur, basis.col(c);
      RMat rows = to_rows(MatQ(aug.transpose()));
      if (static_cast<int>(row_reduce(rows).size()) > cur.cols()) {
        comp.push_back(c);
        cur = aug;
      }
    }
    MatQ rep(n, static_cast<int>(comp.size()));
    for (std::size_t c = 0; c < comp.size(); ++c) rep.col(static_cast<int>(c)) = basis.col(comp[c]);
    if (rep.cols() > 0) {
      MatQ Nj = rep.transpose() * mats[static_cast<std::size_t>(j) - 1] * rep;
      if (out.inner_product && !sylvester_pd(Nj)) {
        out.inner_product = false;
        out.fail_level = j;
      }
    }
    basis = next;
    out.dims.push_back(static_cast<int>(basis.cols()));
  }
  return out;
}

// Exhaustive lexicographic minimization of q(x - gamma) over the coordinate box.
struct BoxLexMin {
  VecQ gamma;
  VecQ zeta;
};

inline VecQ quad_of(const std::vector<MatQ>& mats, const VecQ& v) {
  VecQ q(static_cast<int>(mats.size()));
  for (std::size_t j = 0; j < mats.size(); ++j)
    q(static_cast<int>(j)) = (v.transpose() * mats[j] * v)(0, 0);
  return q;
}

inline bool lex_less(const VecQ& a, const VecQ& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

// Minimize over gamma = B c, c in [-K, K]^n.
inline BoxLexMin box_lex_min(const std::vector<MatQ>& mats, const MatQ& B, const VecQ& x, int K) {
  int n = static_cast<int>(B.cols());
  std::vector<int> c(static_cast<std::size_t>(n), -K);
  BoxLexMin best;
  bool have = false;
  while (true) {
    VecQ cc(n);
    for (int i = 0; i < n; ++i) cc(i) = c[static_cast<std::size_t>(i)];
    VecQ gamma = B * cc;
    VecQ q = quad_of(mats, VecQ(x - gamma));
    if (!have || lex_less(q, best.zeta)) {
      best.gamma = gamma;
      best.zeta = q;
      have = true;
    }
    int i = 0;
    for (; i < n; ++i) {
      if (++c[static_cast<std::size_t>(i)] <= K) break;
      c[static_cast<std::size_t>(i)] = -K;
    }
    if (i == n) break;
  }
  return best;
}

// Random rational inner-product stack: block-triangular model conjugated by a
// random unimodular shear, so lifts and candidate sets are nontrivial but tame.
inline lexvor::GramStack random_inner_product_stack(std::mt19937& rng, int n, int r,
                                                    bool force_degenerate_level = false) {
  auto rat = [&](int lo, int hi, int den) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> d(1, den);
    return Rational(num(rng), d(rng));
  };
  // Split n into r nonnegative level dimensions (at least one positive).
  std::vector<int> dims(static_cast<std::size_t>(r), 0);
  for (int i = 0; i < n; ++i) dims[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, r - 1)(rng))]++;
  std::vector<int> offset(static_cast<std::size_t>(r), 0);
  for (int j = 1; j < r; ++j) offset[static_cast<std::size_t>(j)] = offset[static_cast<std::size_t>(j) - 1] + dims[static_cast<std::size_t>(j) - 1];
  std::vector<MatQ> model;
  for (int j = 0; j < r; ++j) {
    MatQ A = MatQ::Zero(n, n);
    int upto = offset[static_cast<std::size_t>(j)] + dims[static_cast<std::size_t>(j)];
    // Arbitrary symmetric junk on the earlier-level coordinates.
    for (int a = 0; a < offset[static_cast<std::size_t>(j)]; ++a)
      for (int b = a; b < upto; ++b) {
        Rational v = rat(-1, 1, 2);
        A(a, b) = v;
        A(b, a) = v;
      }
    // Positive definite level block: B^T B + d I on the level coordinates.
    int dj = dims[static_cast<std::size_t>(j)];
    if (dj > 0) {
      MatQ B(dj, dj);
      for (int a = 0; a < dj; ++a)
        for (int b = 0; b < dj; ++b) B(a, b) = rat(-1, 1, 2);
      MatQ blk = B.transpose() * B;
      bool degenerate = force_degenerate_level && j == r - 1;
      if (!degenerate)
        for (int a = 0; a < dj; ++a) blk(a, a) += Rational(1);
      int off = offset[static_cast<std::size_t>(j)];
      A.block(off, off, dj, dj) = blk;
    }
    model.push_back(std::move(A));
  }
  // Random unimodular shear.
  MatQ T = MatQ::Identity(n, n);
  std::uniform_int_distribution<int> pick(0, n - 1), coin(0, 1);
  for (int s = 0; s < 2 * n; ++s) {
    int i = pick(rng), j = pick(rng);
    if (i == j) continue;
    T.row(i) += (coin(rng) ? Rational(1) : Rational(-1)) * T.row(j);
  }
  std::vector<MatQ> out;
  for (auto& A : model) out.push_back(MatQ(T.transpose() * A * T));
  return lexvor::GramStack(std::move(out));
}

}  // namespace oracle
