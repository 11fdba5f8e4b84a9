#include "lexvor/linalg.hpp"

#include <Eigen/SVD>

namespace lexvor {

int rank_q(const MatQ& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::FullPivLU<MatQ> lu(A);
  lu.setThreshold(Rational(0));
  return static_cast<int>(lu.rank());
}

MatQ nullspace_q(const MatQ& A) {
  if (A.cols() == 0) return MatQ(A.cols(), 0);
  if (A.rows() == 0) return MatQ::Identity(A.cols(), A.cols());
  Eigen::FullPivLU<MatQ> lu(A);
  lu.setThreshold(Rational(0));
  // Eigen pads a trivial kernel with one zero column; normalize that away.
  if (lu.rank() == A.cols()) return MatQ(A.cols(), 0);
  return lu.kernel();
}

bool in_span_q(const MatQ& B, const VecQ& v) {
  if (v.isZero(Rational(0))) return true;
  if (B.cols() == 0) return false;
  MatQ aug(B.rows(), B.cols() + 1);
  aug << B, v;
  return rank_q(aug) == rank_q(B);
}

bool same_span_q(const MatQ& A, const MatQ& B) {
  int ra = rank_q(A), rb = rank_q(B);
  if (ra != rb) return false;
  MatQ aug(A.rows(), A.cols() + B.cols());
  aug << A, B;
  return rank_q(aug) == ra;
}

VecQ solve_q(const MatQ& A, const VecQ& b) {
  Eigen::FullPivLU<MatQ> lu(A);
  lu.setThreshold(Rational(0));
  if (lu.rank() != A.cols()) throw NumericError("solve_q: singular system");
  return lu.solve(b);
}

std::vector<int> pivot_complete_q(const MatQ& fixed, const MatQ& pool) {
  std::vector<int> chosen;
  MatQ cur = fixed;
  int r = rank_q(cur);
  for (int c = 0; c < pool.cols(); ++c) {
    MatQ aug(pool.rows(), cur.cols() + 1);
    aug << cur, pool.col(c);
    if (rank_q(aug) > r) {
      chosen.push_back(c);
      cur = aug;
      ++r;
    }
  }
  return chosen;
}

std::optional<VecQ> non_pd_witness_q(const MatQ& N) {
  const int n = static_cast<int>(N.rows());
  if (n == 0) return std::nullopt;
  // Congruence elimination: maintain W whose columns express the current reduced
  // coordinates in the original basis, so witnesses map straight back.
  MatQ A = N;
  MatQ W = MatQ::Identity(n, n);
  std::vector<bool> alive(n, true);
  int remaining = n;
  while (remaining > 0) {
    int pivot = -1;
    for (int i = 0; i < n; ++i)
      if (alive[i] && A(i, i) > 0) { pivot = i; break; }
    if (pivot < 0) {
      // No positive diagonal left: the form is not positive definite here.
      for (int i = 0; i < n; ++i)
        if (alive[i] && A(i, i) < 0) return VecQ(W.col(i));
      for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        for (int j = 0; j < n; ++j) {
          if (!alive[j] || j == i) continue;
          if (A(i, j) != 0) {
            // All diagonals vanish; e_i -+ e_j evaluates to -+2 A(i,j).
            VecQ w = A(i, j) > 0 ? VecQ(W.col(i) - W.col(j)) : VecQ(W.col(i) + W.col(j));
            return w;
          }
        }
      }
      // Remaining block is identically zero: any surviving direction gives value 0.
      for (int i = 0; i < n; ++i)
        if (alive[i]) return VecQ(W.col(i));
    }
    Rational d = A(pivot, pivot);
    VecQ prow = A.row(pivot).transpose();
    for (int j = 0; j < n; ++j) {
      if (!alive[j] || j == pivot) continue;
      if (prow(j) != 0) W.col(j) -= (prow(j) / d) * W.col(pivot);
    }
    // Schur complement of the surviving block.
    for (int j = 0; j < n; ++j) {
      if (!alive[j] || j == pivot) continue;
      for (int k = 0; k < n; ++k) {
        if (!alive[k] || k == pivot) continue;
        A(j, k) -= prow(j) * prow(k) / d;
      }
    }
    alive[pivot] = false;
    --remaining;
  }
  return std::nullopt;
}

// ---- float ----------------------------------------------------------------

static Eigen::JacobiSVD<MatD> svd_of(const MatD& A) {
  return Eigen::JacobiSVD<MatD>(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

RankInfo rank_d(const MatD& A, double tol) {
  RankInfo info;
  if (A.rows() == 0 || A.cols() == 0) return info;
  auto svd = svd_of(A);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  if (smax == 0.0) return info;
  double cut = tol * smax;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++info.rank;
    if (sv(i) > 0.1 * cut && sv(i) < 10.0 * cut) info.conditioning_warning = true;
  }
  return info;
}

MatD nullspace_d(const MatD& A, double tol, bool* warning) {
  if (A.cols() == 0) return MatD(A.cols(), 0);
  if (A.rows() == 0 || A.isZero(0.0)) {
    if (warning) *warning = false;
    return MatD::Identity(A.cols(), A.cols());
  }
  auto svd = svd_of(A);
  const auto& sv = svd.singularValues();
  double smax = sv(0);
  double cut = tol * smax;
  int rank = 0;
  bool warn = false;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
    if (sv(i) > 0.1 * cut && sv(i) < 10.0 * cut) warn = true;
  }
  if (warning) *warning = warn;
  return svd.matrixV().rightCols(A.cols() - rank);
}

bool in_span_d(const MatD& B, const VecD& v, double tol) {
  double vn = v.norm();
  if (vn == 0.0) return true;
  if (B.cols() == 0) return false;
  // Residual of least-squares projection.
  Eigen::ColPivHouseholderQR<MatD> qr(B);
  VecD x = qr.solve(v);
  return (B * x - v).norm() <= tol * std::max(1.0, vn);
}

bool same_span_d(const MatD& A, const MatD& B, double tol) {
  if (rank_d(A, tol).rank != rank_d(B, tol).rank) return false;
  for (int c = 0; c < B.cols(); ++c)
    if (!in_span_d(A, B.col(c), tol)) return false;
  for (int c = 0; c < A.cols(); ++c)
    if (!in_span_d(B, A.col(c), tol)) return false;
  return true;
}

std::vector<int> pivot_complete_d(const MatD& fixed, const MatD& pool, double tol) {
  std::vector<int> chosen;
  MatD cur = fixed;
  for (int c = 0; c < pool.cols(); ++c) {
    if (!in_span_d(cur, pool.col(c), tol)) {
      chosen.push_back(c);
      MatD aug(pool.rows(), cur.cols() + 1);
      aug << cur, pool.col(c);
      cur = aug;
    }
  }
  return chosen;
}

}  // namespace lexvor
