#include "lexvor/core_linear.hpp"

#include "lexvor/jacobi.hpp"

#include <Eigen/Cholesky>

#include <random>

namespace lexvor {

namespace {

template <class S>
struct Parts {
  std::vector<Mat<S>> bases;   // span F^1 .. F^{r+1}
  std::vector<int> dims;
  bool warn = false;
  std::vector<Mat<S>> reps;    // complement basis of F^{j+1} in F^j, per level
  std::vector<Mat<S>> grams;   // N_j on reps
  std::vector<Mat<S>> blocks;  // canonical lifts, per level
};

template <class S>
Mat<S> kernel_of(const Mat<S>& A, double tol, bool* warn) {
  if constexpr (std::is_same_v<S, Rational>) {
    (void)tol;
    if (warn) *warn = false;
    return nullspace_q(A);
  } else {
    return nullspace_d(A, tol, warn);
  }
}

template <class S>
std::vector<int> complement_cols(const Mat<S>& fixed, const Mat<S>& pool, double tol) {
  if constexpr (std::is_same_v<S, Rational>)
    return pivot_complete_q(fixed, pool);
  else
    return pivot_complete_d(fixed, pool, tol);
}

// Filtration, graded pieces and (optionally) the canonical lifts, in one arithmetic.
template <class S>
Parts<S> build_parts(const std::vector<Mat<S>>& A, int n, double tol, bool with_lifts) {
  const int r = static_cast<int>(A.size());
  Parts<S> P;
  P.bases.push_back(Mat<S>::Identity(n, n));
  P.dims.push_back(n);
  for (int j = 0; j < r; ++j) {
    const Mat<S>& B = P.bases.back();
    bool w = false;
    Mat<S> K = kernel_of<S>(Mat<S>(A[j] * B), tol, &w);
    P.warn = P.warn || w;
    P.bases.push_back(B * K);
    P.dims.push_back(static_cast<int>(K.cols()));
  }
  for (int j = 0; j < r; ++j) {
    const Mat<S>& pool = P.bases[j];
    const Mat<S>& fixed = P.bases[j + 1];
    auto pick = complement_cols<S>(fixed, pool, tol);
    Mat<S> rep(n, static_cast<int>(pick.size()));
    for (std::size_t c = 0; c < pick.size(); ++c) rep.col(static_cast<int>(c)) = pool.col(pick[c]);
    P.grams.push_back(Mat<S>(rep.transpose() * A[j] * rep));
    P.reps.push_back(std::move(rep));
  }
  if (!with_lifts) return P;
  // Inductive correction: at step k solve the level-k gram system and subtract
  // the representative, killing the pairings against F^{k+1}, ..., F^r.
  for (int j = 0; j < r; ++j) {
    Mat<S> theta = P.reps[j];
    for (int k = j + 1; k < r; ++k) {
      if (P.reps[k].cols() == 0) continue;
      Mat<S> f = P.reps[k].transpose() * A[k] * theta;
      Mat<S> a;
      if constexpr (std::is_same_v<S, Rational>) {
        Eigen::FullPivLU<MatQ> lu(P.grams[k]);
        lu.setThreshold(Rational(0));
        if (lu.rank() != P.grams[k].rows()) throw NumericError("not an inner product");
        a = lu.solve(f);
      } else {
        Eigen::LLT<MatD> llt(P.grams[k]);
        if (llt.info() != Eigen::Success) throw NumericError("not an inner product");
        a = llt.solve(f);
      }
      theta -= P.reps[k] * a;
    }
    P.blocks.push_back(std::move(theta));
  }
  return P;
}

Filtration filtration_from(const Parts<Rational>& P) {
  Filtration F;
  F.exact_bases = std::vector<MatQ>();
  for (const auto& B : P.bases) {
    F.exact_bases->push_back(B);
    F.bases.push_back(to_double(B));
  }
  F.dims = P.dims;
  F.conditioning_warning = false;
  return F;
}

Filtration filtration_from(const Parts<double>& P) {
  Filtration F;
  F.bases = P.bases;
  F.dims = P.dims;
  F.conditioning_warning = P.warn;
  return F;
}

// Positive-definiteness verdict for the graded grams of prepared parts.
InnerProductVerdict verdict_of(const Parts<Rational>& P) {
  InnerProductVerdict v;
  for (std::size_t j = 0; j < P.grams.size(); ++j) {
    if (P.grams[j].rows() == 0) continue;
    if (auto w = non_pd_witness_q(P.grams[j])) {
      v.yes = false;
      v.witness_level = static_cast<int>(j) + 1;
      v.exact_witness = VecQ(P.reps[j] * *w);
      v.witness = to_double(*v.exact_witness);
      return v;
    }
  }
  v.yes = true;
  return v;
}

InnerProductVerdict verdict_of(const Parts<double>& P, double tol) {
  InnerProductVerdict v;
  v.conditioning_warning = P.warn;
  for (std::size_t j = 0; j < P.grams.size(); ++j) {
    if (P.grams[j].rows() == 0) continue;
    SymEig eig = jacobi_eigensymmetric(P.grams[j]);
    if (eig.values(0) <= tol * P.grams[j].norm()) {
      v.yes = false;
      v.witness_level = static_cast<int>(j) + 1;
      v.witness = P.reps[j] * eig.vectors.col(0);
      return v;
    }
  }
  v.yes = true;
  return v;
}

}  // namespace

Filtration filtration(const GramStack& G, double tol) {
  if (G.exact()) return filtration_from(build_parts<Rational>(G.exact_mats(), G.n(), tol, false));
  return filtration_from(build_parts<double>(G.mats(), G.n(), tol, false));
}

GradedPiece graded_piece(const GramStack& G, const Filtration& F, int j, double tol) {
  if (j < 1 || j > G.r()) throw ValidationError("graded_piece: invalid level");
  GradedPiece out;
  out.level = j;
  if (G.exact() && F.exact()) {
    const MatQ& pool = (*F.exact_bases)[j - 1];
    const MatQ& fixed = (*F.exact_bases)[j];
    auto pick = pivot_complete_q(fixed, pool);
    MatQ rep(pool.rows(), static_cast<int>(pick.size()));
    for (std::size_t c = 0; c < pick.size(); ++c) rep.col(static_cast<int>(c)) = pool.col(pick[c]);
    out.exact_rep_basis = rep;
    out.exact_gram = MatQ(rep.transpose() * G.exact_mat(j - 1) * rep);
    out.rep_basis = to_double(rep);
    out.gram = to_double(*out.exact_gram);
    return out;
  }
  const MatD& pool = F.bases[j - 1];
  const MatD& fixed = F.bases[j];
  auto pick = pivot_complete_d(fixed, pool, tol);
  MatD rep(pool.rows(), static_cast<int>(pick.size()));
  for (std::size_t c = 0; c < pick.size(); ++c) rep.col(static_cast<int>(c)) = pool.col(pick[c]);
  out.rep_basis = rep;
  out.gram = rep.transpose() * G.mat(j - 1) * rep;
  return out;
}

InnerProductVerdict is_inner_product(const GramStack& G, double tol) {
  if (G.exact()) return verdict_of(build_parts<Rational>(G.exact_mats(), G.n(), tol, false));
  return verdict_of(build_parts<double>(G.mats(), G.n(), tol, false), tol);
}

namespace {

template <class S>
void fill_model_common(StackModel& M, const Parts<S>& P, int n, int r) {
  int total = 0;
  for (int j = 0; j < r; ++j) total += static_cast<int>(P.blocks[j].cols());
  if (total != n) throw NumericError("analyze: almost orthogonal blocks do not span");
  Mat<S> basis(n, n);
  int at = 0;
  M.block_offsets.clear();
  for (int j = 0; j < r; ++j) {
    M.block_offsets.push_back(at);
    int w = static_cast<int>(P.blocks[j].cols());
    if (w > 0) basis.middleCols(at, w) = P.blocks[j];
    at += w;
  }
  Eigen::FullPivLU<Mat<S>> lu(basis);
  if (lu.rank() != n) throw NumericError("analyze: almost orthogonal blocks are dependent");
  Mat<S> inv = lu.inverse();
  if constexpr (std::is_same_v<S, Rational>) {
    M.exact_basis = basis;
    M.exact_coords = inv;
    M.basis = to_double(basis);
    M.coords = to_double(inv);
  } else {
    M.basis = basis;
    M.coords = inv;
  }
}

}  // namespace

StackModel analyze(const GramStack& G, double tol) {
  StackModel M{G, {}, {}, {}, {}, {}, {}, {}, {}};
  const int n = G.n(), r = G.r();
  if (G.exact()) {
    auto P = build_parts<Rational>(G.exact_mats(), n, tol, false);
    auto v = verdict_of(P);
    if (!v.yes) throw NumericError("not an inner product");
    P = build_parts<Rational>(G.exact_mats(), n, tol, true);
    M.filt = filtration_from(P);
    for (int j = 0; j < r; ++j) {
      GradedPiece g;
      g.level = j + 1;
      g.exact_rep_basis = P.reps[j];
      g.rep_basis = to_double(P.reps[j]);
      g.exact_gram = P.grams[j];
      g.gram = to_double(P.grams[j]);
      M.graded.push_back(std::move(g));
    }
    M.ao.exact_blocks = std::vector<MatQ>();
    for (int j = 0; j < r; ++j) {
      M.ao.exact_blocks->push_back(P.blocks[j]);
      M.ao.blocks.push_back(to_double(P.blocks[j]));
      M.ao.lift_maps.push_back(M.ao.blocks.back());
    }
    fill_model_common<Rational>(M, P, n, r);
    return M;
  }
  auto P = build_parts<double>(G.mats(), n, tol, false);
  auto v = verdict_of(P, tol);
  if (!v.yes) throw NumericError("not an inner product");
  P = build_parts<double>(G.mats(), n, tol, true);
  M.filt = filtration_from(P);
  for (int j = 0; j < r; ++j) {
    GradedPiece g;
    g.level = j + 1;
    g.rep_basis = P.reps[j];
    g.gram = P.grams[j];
    M.graded.push_back(std::move(g));
  }
  for (int j = 0; j < r; ++j) {
    M.ao.blocks.push_back(P.blocks[j]);
    M.ao.lift_maps.push_back(P.blocks[j]);
  }
  fill_model_common<double>(M, P, n, r);
  return M;
}

VecD StackModel::component(const VecD& x, int j) const {
  VecD u = block_coords(x, j);
  return ao.blocks[static_cast<std::size_t>(j) - 1] * u;
}

VecQ StackModel::component_exact(const VecQ& x, int j) const {
  VecQ u = block_coords_exact(x, j);
  return (*ao.exact_blocks)[static_cast<std::size_t>(j) - 1] * u;
}

VecD StackModel::block_coords(const VecD& x, int j) const {
  int off = block_offsets[static_cast<std::size_t>(j) - 1];
  return coords.middleRows(off, block_dim(j)) * x;
}

VecQ StackModel::block_coords_exact(const VecQ& x, int j) const {
  if (!exact_coords) throw NumericError("exact coordinates unavailable on float stack");
  int off = block_offsets[static_cast<std::size_t>(j) - 1];
  return exact_coords->middleRows(off, block_dim(j)) * x;
}

double StackModel::block_quad(const VecD& x, int j) const {
  VecD c = component(x, j);
  return c.dot(G.mat(j - 1) * c);
}

Rational StackModel::block_quad_exact(const VecQ& x, int j) const {
  VecQ c = component_exact(x, j);
  return Rational((c.transpose() * G.exact_mat(j - 1) * c)(0, 0));
}

VecD StackModel::quad(const VecD& x) const {
  VecD q(r());
  for (int j = 0; j < r(); ++j) q(j) = x.dot(G.mat(j) * x);
  return q;
}

VecQ StackModel::quad_exact(const VecQ& x) const {
  VecQ q(r());
  for (int j = 0; j < r(); ++j) q(j) = (x.transpose() * G.exact_mat(j) * x)(0, 0);
  return q;
}

MatD lift(const GramStack& G, int j, double tol) {
  if (j < 1 || j > G.r()) throw ValidationError("lift: invalid level");
  StackModel M = analyze(G, tol);
  return M.ao.lift_maps[static_cast<std::size_t>(j) - 1];
}

AODecomposition ao_decompose(const GramStack& G, double tol) { return analyze(G, tol).ao; }

GramStack orthogonalize(const GramStack& G, double tol) {
  StackModel M = analyze(G, tol);
  const int n = G.n(), r = G.r();
  if (G.exact()) {
    std::vector<MatQ> out;
    for (int j = 1; j <= r; ++j) {
      int off = M.block_offsets[static_cast<std::size_t>(j) - 1];
      int w = M.block_dim(j);
      if (w == 0) {
        out.push_back(MatQ::Zero(n, n));
        continue;
      }
      MatQ S = M.exact_coords->middleRows(off, w);
      MatQ U = (*M.ao.exact_blocks)[static_cast<std::size_t>(j) - 1];
      MatQ Nj = U.transpose() * G.exact_mat(j - 1) * U;
      out.push_back(MatQ(S.transpose() * Nj * S));
    }
    return GramStack(std::move(out));
  }
  std::vector<MatD> out;
  for (int j = 1; j <= r; ++j) {
    int off = M.block_offsets[static_cast<std::size_t>(j) - 1];
    int w = M.block_dim(j);
    if (w == 0) {
      out.push_back(MatD::Zero(n, n));
      continue;
    }
    MatD S = M.coords.middleRows(off, w);
    MatD U = M.ao.blocks[static_cast<std::size_t>(j) - 1];
    MatD Nj = U.transpose() * G.mat(j - 1) * U;
    out.push_back(S.transpose() * Nj * S);
  }
  return GramStack(std::move(out));
}

double ref_norm(const StackModel& M, const VecD& x) {
  double s = 0.0;
  for (int j = 1; j <= M.r(); ++j)
    if (M.block_dim(j) > 0) s += M.block_quad(x, j);
  return std::sqrt(std::max(s, 0.0));
}

double ref_norm(const GramStack& G, const VecD& x, double tol) {
  return ref_norm(analyze(G, tol), x);
}

MatD pullback(const GramStack& G, const VecD& L) {
  if (L.size() != G.r()) throw ValidationError("pullback: weight count mismatch");
  MatD A = MatD::Zero(G.n(), G.n());
  for (int j = 0; j < G.r(); ++j) {
    if (L(j) <= 0) throw ValidationError("pullback: weights must be positive");
    A += L(j) * G.mat(j);
  }
  return A;
}

MatQ pullback_exact(const GramStack& G, const VecQ& L) {
  if (!G.exact()) throw NumericError("pullback_exact: stack has no rational data");
  if (L.size() != G.r()) throw ValidationError("pullback: weight count mismatch");
  MatQ A = MatQ::Zero(G.n(), G.n());
  for (int j = 0; j < G.r(); ++j) {
    if (L(j) <= 0) throw ValidationError("pullback: weights must be positive");
    A += L(j) * G.exact_mat(j);
  }
  return A;
}

namespace {

bool pd_check(const MatD& A) {
  SymEig eig = jacobi_eigensymmetric(A);
  return eig.values(0) > 1e-12 * std::max(A.norm(), 1e-300);
}

}  // namespace

SeparationEstimate min_separation_constant(const GramStack& G,
                                           const std::vector<double>& ratio_grid,
                                           int random_rays, unsigned seed) {
  if (ratio_grid.empty()) throw ValidationError("min_separation_constant: empty ratio grid");
  std::vector<double> grid = ratio_grid;
  std::sort(grid.begin(), grid.end());
  const int r = G.r();
  SeparationEstimate est;
  est.grid_max = grid.back();
  est.rays_per_ratio = 1 + random_rays;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double rho : grid) {
    if (rho <= 0.0) continue;
    bool all_pd = true;
    for (int ray = 0; ray <= random_rays && all_pd; ++ray) {
      VecD L(r);
      L(r - 1) = 1.0;
      for (int j = r - 2; j >= 0; --j) {
        double ratio = rho;
        if (ray > 0) ratio = rho * std::pow(1000.0, unif(rng));  // log-uniform in [rho, 1000 rho]
        L(j) = L(j + 1) * ratio;
      }
      all_pd = pd_check(pullback(G, L));
    }
    if (all_pd) {
      est.finite = true;
      est.C = rho;
      return est;
    }
  }
  est.finite = false;
  est.C = grid.back();
  return est;
}

}  // namespace lexvor
