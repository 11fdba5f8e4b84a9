#include "lexvor/jacobi.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <numeric>

namespace lexvor {

static double offdiag_norm(const MatD& A) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j) s += A(i, j) * A(i, j);
  return std::sqrt(s);
}

SymEig jacobi_eigensymmetric(MatD A, double rel_off_tol, int max_sweeps) {
  const int n = static_cast<int>(A.rows());
  MatD V = MatD::Identity(n, n);
  if (n <= 1) {
    SymEig out;
    out.values = n == 1 ? VecD::Constant(1, A(0, 0)) : VecD(0);
    out.vectors = V;
    return out;
  }
  const double scale = std::max(A.norm(), 1e-300);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (offdiag_norm(A) <= rel_off_tol * scale) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) < A(b, b); });
  SymEig out;
  out.values = VecD(n);
  out.vectors = MatD(n, n);
  for (int i = 0; i < n; ++i) {
    out.values(i) = A(order[i], order[i]);
    out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

VecD generalized_eigenvalues(const MatD& A, const MatD& B) {
  Eigen::LLT<MatD> llt(B);
  if (llt.info() != Eigen::Success)
    throw NumericError("generalized_eigenvalues: right-hand form is not positive definite");
  MatD L = llt.matrixL();
  MatD C = L.triangularView<Eigen::Lower>().solve(A);
  C = L.triangularView<Eigen::Lower>().solve(MatD(C.transpose())).transpose();
  C = 0.5 * (C + C.transpose());
  return jacobi_eigensymmetric(C).values;
}

BilinearOpNorm bilinear_opnorm(const MatD& B, const MatD& Ni, const MatD& Nj) {
  Eigen::LLT<MatD> lli(Ni), llj(Nj);
  if (lli.info() != Eigen::Success || llj.info() != Eigen::Success)
    throw NumericError("bilinear_opnorm: norm gram is not positive definite");
  MatD Li = lli.matrixL();
  MatD Lj = llj.matrixL();
  MatD C = Li.triangularView<Eigen::Lower>().solve(B);                           // Li^{-1} B
  C = Lj.triangularView<Eigen::Lower>().solve(MatD(C.transpose())).transpose();  // .. Lj^{-T}
  MatD CCt = C * C.transpose();
  CCt = 0.5 * (CCt + CCt.transpose());
  SymEig eig = jacobi_eigensymmetric(CCt);
  BilinearOpNorm out;
  int last = static_cast<int>(eig.values.size()) - 1;
  if (last < 0 || C.cols() == 0) return out;
  double lam = std::max(eig.values(last), 0.0);
  out.value = std::sqrt(lam);
  VecD u = eig.vectors.col(last);
  out.x = Li.transpose().triangularView<Eigen::Upper>().solve(u);
  double xn = std::sqrt(out.x.dot(Ni * out.x));
  if (xn > 0) out.x /= xn;
  VecD w = C.transpose() * u;
  if (w.norm() > 0) w /= w.norm();
  out.y = Lj.transpose().triangularView<Eigen::Upper>().solve(w);
  double yn = std::sqrt(out.y.dot(Nj * out.y));
  if (yn > 0) out.y /= yn;
  return out;
}

}  // namespace lexvor
