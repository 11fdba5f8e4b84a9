#include "lexvor/tame.hpp"

#include "lexvor/jacobi.hpp"

#include <algorithm>
#include <cmath>

namespace lexvor {

namespace {

constexpr double kSettledFloor = 1e-9;  // constants at or below this count as vanished

// Reference-norm gram of <.,.>_ref restricted to the column span of V.
MatD ref_gram(const StackModel& M, const MatD& V) {
  MatD R = MatD::Zero(V.cols(), V.cols());
  for (int j = 1; j <= M.r(); ++j) {
    int w = M.block_dim(j);
    if (w == 0) continue;
    int off = M.block_offsets[static_cast<std::size_t>(j) - 1];
    MatD C = M.coords.middleRows(off, w) * V;  // block coordinates of the columns
    const MatD& U = M.ao.blocks[static_cast<std::size_t>(j) - 1];
    MatD Nj = U.transpose() * M.G.mat(j - 1) * U;
    R += C.transpose() * Nj * C;
  }
  return R;
}

// Log-log trend slope over the trailing half of the sampled (t, value) points.
double trend_slope(const std::vector<std::pair<double, double>>& pts) {
  std::vector<std::pair<double, double>> usable;
  for (auto [t, v] : pts)
    if (t > 0 && v > 1e-300) usable.emplace_back(std::log(t), std::log(v));
  if (usable.size() < 2) return 0.0;
  std::size_t start = usable.size() / 2;
  if (usable.size() - start < 2) start = usable.size() - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (std::size_t k = start; k < usable.size(); ++k) {
    sx += usable[k].first;
    sy += usable[k].second;
    sxx += usable[k].first * usable[k].first;
    sxy += usable[k].first * usable[k].second;
    m += 1;
  }
  double den = m * sxx - sx * sx;
  if (den == 0) return 0.0;
  return (m * sxy - sx * sy) / den;
}

struct PairSup {
  double value = 0;
  int i = 0, j = 0;
  VecD x, y;
};

}  // namespace

TameReport check_tame(const ScalarFamily& family, const GramStack& G,
                      const ParamSchedule& schedule, std::vector<double> t_grid, double tol) {
  return check_tame(family, analyze(G, tol), schedule, std::move(t_grid));
}

TameReport check_tame(const ScalarFamily& family, const StackModel& M,
                      const ParamSchedule& schedule, std::vector<double> t_grid) {
  const int r = M.r();
  if (schedule.r() != r) throw ValidationError("check_tame: schedule rank mismatch");
  if (family.n != M.n()) throw ValidationError("check_tame: family dimension mismatch");
  if (t_grid.empty()) t_grid = default_t_grid();
  for (std::size_t k = 0; k + 1 < t_grid.size(); ++k)
    if (!(t_grid[k] < t_grid[k + 1])) throw ValidationError("check_tame: t grid must increase");

  // Block data reused across t.
  std::vector<MatD> N(r);  // <.,.>_j gram on block basis (also the ref-norm gram there)
  std::vector<double> block_scale(r, 0.0);   // ||U_j||_F
  std::vector<double> block_lammin(r, 1.0);  // smallest eigenvalue of N_j
  for (int j = 1; j <= r; ++j) {
    if (M.block_dim(j) == 0) continue;
    const MatD& U = M.ao.blocks[static_cast<std::size_t>(j) - 1];
    N[j - 1] = U.transpose() * M.G.mat(j - 1) * U;
    block_scale[j - 1] = U.norm();
    block_lammin[j - 1] = std::max(jacobi_eigensymmetric(N[j - 1]).values(0), 1e-300);
  }
  std::vector<MatD> filt_ref(r);  // ref-norm gram on filtration bases
  for (int j = 1; j <= r; ++j)
    if (M.filt.bases[j - 1].cols() > 0) filt_ref[j - 1] = ref_gram(M, M.filt.bases[j - 1]);

  TameReport rep;
  std::vector<std::pair<double, double>> a_pts, b_pts, bp_pts, c_pts;
  PairSup b_w, bp_w, c_w;
  double b_w_t = 0, bp_w_t = 0, c_w_t = 0;

  for (double t : t_grid) {
    TamePoint pt;
    pt.t = t;
    VecD L = schedule.eval(t);
    for (int j = 0; j < r; ++j)
      if (!(L(j) > 0)) throw NumericError("check_tame: schedule not positive at sampled t");
    MatD Mt = family(t);
    SymEig eig = jacobi_eigensymmetric(Mt);
    pt.pd = eig.values(0) > 0;
    if (!pt.pd) {
      ++rep.excluded_non_pd;
      rep.points.push_back(pt);
      continue;
    }
    if (r >= 2) {
      double ratio = std::numeric_limits<double>::infinity();
      for (int j = 0; j + 1 < r; ++j) ratio = std::min(ratio, L(j) / L(j + 1));
      pt.ratio_min = ratio;
      a_pts.emplace_back(t, ratio);
    }
    const double mt_norm = Mt.norm();
    auto resolution = [&](int i, int j, double denom) {
      // Error bound for the normalized bilinear form computed in doubles.
      return 2e-15 * mt_norm * block_scale[i - 1] * block_scale[j - 1] /
             (denom * std::sqrt(block_lammin[i - 1] * block_lammin[j - 1]));
    };
    // (b): AO block pairs i != j.
    for (int i = 1; i <= r; ++i) {
      if (M.block_dim(i) == 0) continue;
      for (int j = i + 1; j <= r; ++j) {
        if (M.block_dim(j) == 0) continue;
        const MatD& Ui = M.ao.blocks[static_cast<std::size_t>(i) - 1];
        const MatD& Uj = M.ao.blocks[static_cast<std::size_t>(j) - 1];
        MatD B = Ui.transpose() * Mt * Uj;
        auto opn = bilinear_opnorm(B, N[i - 1], N[j - 1]);
        double val = opn.value / L(std::max(i, j) - 1);
        pt.b_floor = std::max(pt.b_floor, resolution(i, j, L(std::max(i, j) - 1)));
        if (val > pt.b) {
          pt.b = val;
          if (val > b_w.value) {
            b_w = {val, i, j, VecD(Ui * opn.x), VecD(Uj * opn.y)};
            b_w_t = t;
          }
        }
      }
    }
    // (b'): filtration pairs, all i, j.
    for (int i = 1; i <= r; ++i) {
      const MatD& Vi = M.filt.bases[i - 1];
      if (Vi.cols() == 0) continue;
      for (int j = i; j <= r; ++j) {
        const MatD& Vj = M.filt.bases[j - 1];
        if (Vj.cols() == 0) continue;
        MatD B = Vi.transpose() * Mt * Vj;
        auto opn = bilinear_opnorm(B, filt_ref[i - 1], filt_ref[j - 1]);
        double val = opn.value / L(std::max(i, j) - 1);
        if (val > pt.bprime) {
          pt.bprime = val;
          if (val > bp_w.value) {
            bp_w = {val, i, j, VecD(Vi * opn.x), VecD(Vj * opn.y)};
            bp_w_t = t;
          }
        }
      }
    }
    // (c): per-level deviation of the rescaled family from <.,.>_j on H_j.
    for (int j = 1; j <= r; ++j) {
      if (M.block_dim(j) == 0) continue;
      const MatD& Uj = M.ao.blocks[static_cast<std::size_t>(j) - 1];
      MatD D = (Uj.transpose() * Mt * Uj) / L(j - 1) - N[j - 1];
      auto opn = bilinear_opnorm(D, N[j - 1], N[j - 1]);
      double val = opn.value;
      pt.c_floor = std::max(pt.c_floor, resolution(j, j, L(j - 1)));
      if (val > pt.c) {
        pt.c = val;
        if (val > c_w.value) {
          c_w = {val, j, j, VecD(Uj * opn.x), VecD(Uj * opn.y)};
          c_w_t = t;
        }
      }
    }
    if (pt.b > 30 * pt.b_floor) b_pts.emplace_back(t, pt.b);
    if (pt.bprime > 30 * pt.b_floor) bp_pts.emplace_back(t, pt.bprime);
    if (pt.c > 30 * pt.c_floor) c_pts.emplace_back(t, pt.c);
    rep.points.push_back(pt);
  }

  rep.slope_a = trend_slope(a_pts);
  rep.slope_b = trend_slope(b_pts);
  rep.slope_bprime = trend_slope(bp_pts);
  rep.slope_c = trend_slope(c_pts);
  const double margin = rep.noise_margin;

  const TamePoint* last_pd = nullptr;
  for (const auto& pt : rep.points)
    if (pt.pd) last_pd = &pt;
  bool b_settled = true, c_settled = true, bp_settled = true;
  if (last_pd) {
    b_settled = last_pd->b <= std::max(kSettledFloor, 30 * last_pd->b_floor);
    bp_settled = last_pd->bprime <= std::max(kSettledFloor, 30 * last_pd->b_floor);
    c_settled = last_pd->c <= std::max(kSettledFloor, 30 * last_pd->c_floor);
  }
  bool a_ok = r == 1 || (!a_pts.empty() && rep.slope_a > margin);
  bool b_ok = b_settled || rep.slope_b <= -margin;
  bool c_ok = c_settled || rep.slope_c <= -margin;
  bool bp_bounded = bp_settled || rep.slope_bprime <= margin;

  if (a_ok && b_ok && c_ok) {
    rep.verdict = TameVerdict::ConsistentWithTame;
  } else if (a_ok && bp_bounded && c_ok) {
    rep.verdict = TameVerdict::ConsistentWithOmegaTameOnly;
  } else {
    rep.verdict = TameVerdict::Refuted;
    TameWitness w;
    if (!a_ok) {
      w.property = "a";
      w.t = a_pts.empty() ? (t_grid.empty() ? 0 : t_grid.back()) : a_pts.back().first;
    } else if (!c_ok) {
      w.property = "c";
      w.t = c_w_t;
      w.level_i = c_w.i;
      w.level_j = c_w.j;
      w.x = c_w.x;
      w.y = c_w.y;
    } else {
      w.property = rep.slope_b > margin ? "b" : "b'";
      const PairSup& s = rep.slope_b > margin ? b_w : bp_w;
      w.t = rep.slope_b > margin ? b_w_t : bp_w_t;
      w.level_i = s.i;
      w.level_j = s.j;
      w.x = s.x;
      w.y = s.y;
    }
    rep.witness = std::move(w);
  }
  return rep;
}

double uniform_equivalence(const ScalarFamily& family, const GramStack& G,
                           const ParamSchedule& schedule, double t, double tol) {
  GramStack ortho = orthogonalize(G, tol);
  MatD Q = pullback(ortho, schedule.eval(t));
  MatD Mt = family(t);
  VecD lams = generalized_eigenvalues(Mt, Q);
  double lo = lams(0), hi = lams(lams.size() - 1);
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return std::max(hi, 1.0 / lo);
}

namespace {

bool grams_match_exact(const MatQ& V, const MatQ& A, const MatQ& B) {
  return MatQ(V.transpose() * A * V) == MatQ(V.transpose() * B * V);
}

bool grams_match_float(const MatD& V, const MatD& A, const MatD& B, double tol) {
  MatD GA = V.transpose() * A * V;
  MatD GB = V.transpose() * B * V;
  double scale = std::max({1.0, GA.norm(), GB.norm()});
  return (GA - GB).norm() <= tol * scale;
}

}  // namespace

TameEquivalenceResult tame_equivalent(const GramStack& G, const GramStack& Gp, double tol) {
  if (G.n() != Gp.n() || G.r() != Gp.r())
    throw ValidationError("tame_equivalent: dimension or rank mismatch");
  StackModel A = analyze(G, tol);
  StackModel B = analyze(Gp, tol);
  const bool exact = G.exact() && Gp.exact();
  TameEquivalenceResult res;
  for (int j = 2; j <= G.r(); ++j) {   // F^1 = H always agrees
    bool same;
    if (exact)
      same = same_span_q((*A.filt.exact_bases)[j - 1], (*B.filt.exact_bases)[j - 1]);
    else
      same = same_span_d(A.filt.bases[j - 1], B.filt.bases[j - 1], tol);
    if (!same) {
      res.kind = TameEquivalenceKind::Inequivalent;
      res.witness_level = j;
      res.what = "filtration";
      return res;
    }
  }
  for (int j = 1; j <= G.r(); ++j) {
    if (A.filt.dims[j - 1] == 0) continue;
    bool same;
    if (exact)
      same = grams_match_exact((*A.filt.exact_bases)[j - 1], G.exact_mat(j - 1),
                               Gp.exact_mat(j - 1));
    else
      same = grams_match_float(A.filt.bases[j - 1], G.mat(j - 1), Gp.mat(j - 1), tol);
    if (!same) {
      res.kind = TameEquivalenceKind::Inequivalent;
      res.witness_level = j;
      res.what = "graded form";
      return res;
    }
  }
  for (int j = 1; j <= G.r(); ++j) {
    if (A.block_dim(j) != B.block_dim(j)) {
      res.kind = TameEquivalenceKind::OmegaTameEquivalentOnly;
      res.witness_level = j;
      res.what = "ao block";
      return res;
    }
    if (A.block_dim(j) == 0) continue;
    bool same;
    if (exact)
      same = same_span_q((*A.ao.exact_blocks)[j - 1], (*B.ao.exact_blocks)[j - 1]);
    else
      same = same_span_d(A.ao.blocks[j - 1], B.ao.blocks[j - 1], tol);
    if (!same) {
      res.kind = TameEquivalenceKind::OmegaTameEquivalentOnly;
      res.witness_level = j;
      res.what = "ao block";
      return res;
    }
  }
  res.kind = TameEquivalenceKind::TameEquivalent;
  return res;
}

}  // namespace lexvor
