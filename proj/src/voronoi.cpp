#include "lexvor/voronoi.hpp"

#include "lexvor/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace lexvor {

namespace {

void check_cell_dim(Eigen::Index n) {
  if (n > 6) throw BudgetError("voronoi_cell_scalar: dimension over budget (n <= 6)");
}

}  // namespace

PolytopeD voronoi_cell_scalar(const MatD& Q, const MatD& basis, double tol) {
  check_cell_dim(Q.rows());
  const int n = static_cast<int>(Q.rows());
  MatD N = basis.transpose() * Q * basis;
  auto rel = relevant_vector_candidates(N);
  MatD normals(2 * static_cast<int>(rel.size()), n);
  VecD offsets(2 * static_cast<int>(rel.size()));
  for (std::size_t k = 0; k < rel.size(); ++k) {
    VecD gamma = basis * rel[k].cast<double>();
    VecD a = 2.0 * (Q * gamma);
    double b = gamma.dot(Q * gamma);
    normals.row(2 * static_cast<int>(k)) = a.transpose();
    offsets(2 * static_cast<int>(k)) = b;
    normals.row(2 * static_cast<int>(k) + 1) = -a.transpose();
    offsets(2 * static_cast<int>(k) + 1) = b;
  }
  return from_hrep(normals, offsets, tol);
}

PolytopeQ voronoi_cell_scalar_exact(const MatQ& Q, const MatQ& basis) {
  check_cell_dim(Q.rows());
  const int n = static_cast<int>(Q.rows());
  MatQ N = basis.transpose() * Q * basis;
  MatD Nd = to_double(N);
  auto rel = relevant_vector_candidates(Nd, &N);
  MatQ normals(2 * static_cast<int>(rel.size()), n);
  VecQ offsets(2 * static_cast<int>(rel.size()));
  for (std::size_t k = 0; k < rel.size(); ++k) {
    VecQ u(n);
    for (int i = 0; i < n; ++i) u(i) = Rational(static_cast<long long>(rel[k](i)));
    VecQ gamma = basis * u;
    VecQ a = 2 * (Q * gamma);
    Rational b = (gamma.transpose() * Q * gamma)(0, 0);
    normals.row(2 * static_cast<int>(k)) = a.transpose();
    offsets(2 * static_cast<int>(k)) = b;
    normals.row(2 * static_cast<int>(k) + 1) = -a.transpose();
    offsets(2 * static_cast<int>(k) + 1) = b;
  }
  return from_hrep(normals, offsets);
}

namespace {

// Lift a graded-cell halfspace system from rep coordinates to ambient ones.
PolytopeQ lift_level_cell(const StackModel& M, const PolytopeQ& cell, int level) {
  const MatQ& U = (*M.ao.exact_blocks)[static_cast<std::size_t>(level) - 1];
  int off = M.block_offsets[static_cast<std::size_t>(level) - 1];
  MatQ S = M.exact_coords->middleRows(off, M.block_dim(level));
  PolytopeQ out;
  out.normals = cell.normals * S;
  out.offsets = cell.offsets;
  out.vertices = U * cell.vertices;
  out.consistent = cell.consistent;
  return out;
}

PolytopeQ translate(const PolytopeQ& P, const VecQ& gamma) {
  PolytopeQ out = P;
  out.vertices.colwise() += gamma;
  out.offsets += P.normals * gamma;
  return out;
}

}  // namespace

HigherVorCell higher_voronoi_closure(const StackModel& M, const GradedLatticeData& lat,
                                     const VecQ* center) {
  if (!M.G.exact()) throw ValidationError("higher_voronoi_closure: rational stack required");
  const int n = M.n(), r = M.r();
  HigherVorCell cell;
  cell.center = center ? *center : VecQ(VecQ::Zero(n));
  std::vector<PolytopeQ> lifted;
  for (int j = 1; j <= r; ++j) {
    int nj = M.block_dim(j);
    if (nj == 0) continue;
    const MatQ& Nj = *M.graded[static_cast<std::size_t>(j) - 1].exact_gram;
    const MatQ& Gj = lat.graded_bases[static_cast<std::size_t>(j) - 1];
    PolytopeQ graded_cell = voronoi_cell_scalar_exact(Nj, Gj);
    PolytopeQ P = lift_level_cell(M, graded_cell, j);
    cell.levels.push_back(j);
    cell.level_cells.push_back(P);
    lifted.push_back(std::move(P));
  }
  // The blocks live in complementary subspaces, so the Minkowski sum is the
  // product polytope: every sum of level vertices is a vertex, and the level
  // half-space systems concatenate.
  int total_halfspaces = 0;
  std::size_t vert_count = 1;
  for (const auto& P : lifted) {
    total_halfspaces += P.facet_candidates();
    vert_count *= static_cast<std::size_t>(P.vertex_count());
  }
  PolytopeQ sum;
  sum.normals = MatQ(total_halfspaces, n);
  sum.offsets = VecQ(total_halfspaces);
  int at = 0;
  for (const auto& P : lifted) {
    sum.normals.middleRows(at, P.facet_candidates()) = P.normals;
    sum.offsets.segment(at, P.facet_candidates()) = P.offsets;
    at += P.facet_candidates();
  }
  sum.vertices = MatQ(n, static_cast<int>(vert_count));
  std::vector<int> pick(lifted.size(), 0);
  for (std::size_t v = 0; v < vert_count; ++v) {
    VecQ x = VecQ::Zero(n);
    for (std::size_t l = 0; l < lifted.size(); ++l)
      x += lifted[l].vertices.col(pick[l]);
    sum.vertices.col(static_cast<int>(v)) = x;
    for (std::size_t l = 0; l < lifted.size(); ++l) {
      if (++pick[l] < lifted[l].vertex_count()) break;
      pick[l] = 0;
    }
  }
  sum.consistent = true;
  for (int v = 0; v < sum.vertex_count() && sum.consistent; ++v)
    sum.consistent = contains(sum, VecQ(sum.vertices.col(v)));
  if (center) {
    for (auto& P : cell.level_cells) P = translate(P, *center);
    sum = translate(sum, *center);
  }
  cell.closure = std::move(sum);
  return cell;
}

Membership lex_membership(const StackModel& M, const std::vector<VecQ>& sites,
                          const VecQ& gamma, const VecQ& x) {
  VecQ qg = M.quad_exact(VecQ(x - gamma));
  for (const VecQ& eta : sites) {
    if (eta == gamma) continue;
    VecQ qe = M.quad_exact(VecQ(x - eta));
    if (lex_compare(qg, qe) == LexOrder::Greater) return Membership::Out;
  }
  return Membership::In;
}

Membership lex_membership(const StackModel& M, const std::vector<VecD>& sites,
                          const VecD& gamma, const VecD& x, double tau_tie) {
  VecD qg = M.quad(VecD(x - gamma));
  bool ambiguous = false;
  for (const VecD& eta : sites) {
    if ((eta - gamma).norm() == 0) continue;
    VecD qe = M.quad(VecD(x - eta));
    switch (lex_compare(qg, qe, tau_tie)) {
      case LexOrder::Greater: return Membership::Out;
      case LexOrder::Ambiguous: ambiguous = true; break;
      default: break;
    }
  }
  return ambiguous ? Membership::TieAmbiguous : Membership::In;
}

namespace {

struct CandidateBuilder {
  const StackModel& M;
  const LatticeModel& L;
  const GradedLatticeData& lat;
  std::size_t cap;

  std::vector<MatD> lat_gram;       // per level: G_k^T N_k G_k on graded lattice coords
  std::vector<MatD> rep_extract;    // per level: block-coordinate rows (double)
  std::vector<MatD> level_cols;     // ambient double columns of adapted basis, per level

  explicit CandidateBuilder(const StackModel& m, const LatticeModel& l,
                            const GradedLatticeData& la, std::size_t cap_)
      : M(m), L(l), lat(la), cap(cap_) {
    for (int k = 1; k <= M.r(); ++k) {
      int nk = M.block_dim(k);
      MatD Gk = to_double(lat.graded_bases[static_cast<std::size_t>(k) - 1]);
      MatD Nk = M.graded[static_cast<std::size_t>(k) - 1].gram;
      lat_gram.push_back(nk > 0 ? MatD(Gk.transpose() * Nk * Gk) : MatD());
      int off = M.block_offsets[static_cast<std::size_t>(k) - 1];
      rep_extract.push_back(M.coords.middleRows(off, nk));
      MatD cols(M.n(), nk);
      for (int c = 0; c < nk; ++c)
        cols.col(c) = to_double(
            VecQ(lat.adapted_ambient.col(lat.level_offsets[static_cast<std::size_t>(k) - 1] + c)));
      level_cols.push_back(std::move(cols));
    }
  }

  // Enumerate all lattice points whose level-k AO components stay within radii.
  std::vector<VecI> run(const std::vector<double>& radii) {
    std::vector<VecI> coords;
    VecI cur = VecI::Zero(M.n());
    VecD partial = VecD::Zero(M.n());
    rec(1, radii, cur, partial, coords);
    return coords;
  }

  void rec(int k, const std::vector<double>& radii, VecI& cur, const VecD& partial,
           std::vector<VecI>& out) {
    if (k > M.r()) {
      if (out.size() >= 20 * cap) throw BudgetError("candidate_set: total size over budget");
      out.push_back(cur);
      return;
    }
    int nk = M.block_dim(k);
    if (nk == 0) {
      rec(k + 1, radii, cur, partial, out);
      return;
    }
    const MatD& Gk = to_double(lat.graded_bases[static_cast<std::size_t>(k) - 1]);
    // Level-k rep coordinates contributed by the earlier levels.
    VecD upre = rep_extract[static_cast<std::size_t>(k) - 1] * partial;
    VecD zc = Gk.fullPivLu().solve(-upre);
    double R = radii[static_cast<std::size_t>(k) - 1];
    std::vector<VecI> hits;
    enumerate_ball(lat_gram[static_cast<std::size_t>(k) - 1], zc, R * R,
                   [&](const VecI& c, double) {
                     if (hits.size() >= cap)
                       throw BudgetError("candidate_set: per-level point budget exceeded");
                     hits.push_back(c);
                   });
    int off = lat.level_offsets[static_cast<std::size_t>(k) - 1];
    for (const VecI& c : hits) {
      for (int i = 0; i < nk; ++i) cur(off + i) = c(i);
      VecD add = level_cols[static_cast<std::size_t>(k) - 1] * c.cast<double>();
      rec(k + 1, radii, cur, VecD(partial + add), out);
    }
    for (int i = 0; i < nk; ++i) cur(off + i) = 0;
  }
};

CandidateSet candidate_set_impl(const StackModel& M, const LatticeModel& L,
                                const GradedLatticeData& lat, const VecD& lo, const VecD& hi,
                                const std::function<MatD(double)>& form_at, double t_min,
                                double t_max, std::size_t cap) {
  const int n = M.n();
  const int r = M.r();
  // Verification grid over the box.
  int per_axis = n <= 2 ? 7 : (n == 3 ? 5 : 3);
  std::vector<VecD> grid;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    VecD x(n);
    for (int i = 0; i < n; ++i)
      x(i) = lo(i) + (hi(i) - lo(i)) * (per_axis == 1 ? 0.5 : double(idx[static_cast<std::size_t>(i)]) / (per_axis - 1));
    grid.push_back(x);
    int i = 0;
    for (; i < n; ++i) {
      if (++idx[static_cast<std::size_t>(i)] < per_axis) break;
      idx[static_cast<std::size_t>(i)] = 0;
    }
    if (i == n) break;
  }
  CandidateBuilder builder(M, L, lat, cap);
  // Initial radii: grid reach plus a covering bound from the graded basis.
  std::vector<double> radii;
  for (int k = 1; k <= r; ++k) {
    int nk = M.block_dim(k);
    if (nk == 0) {
      radii.push_back(0);
      continue;
    }
    double reach = 0;
    for (const VecD& x : grid) reach = std::max(reach, std::sqrt(std::max(0.0, M.block_quad(x, k))));
    double covering = 0;
    const MatD& NG = builder.lat_gram[static_cast<std::size_t>(k) - 1];
    for (int c = 0; c < nk; ++c) covering += 0.5 * std::sqrt(NG(c, c));
    radii.push_back(reach + covering + 1e-6);
  }
  std::vector<double> t_samples{t_min};
  if (t_max > t_min) t_samples.push_back(t_max);
  MatD Binv = L.basis_d.fullPivLu().inverse();
  CandidateSet cs;
  cs.grid_per_axis = per_axis;
  for (int attempt = 0; attempt < 12; ++attempt) {
    std::vector<VecI> coords = builder.run(radii);
    bool ok = true;
    for (double t : t_samples) {
      MatD Mt = form_at(t);
      MatD Nt = L.basis_d.transpose() * Mt * L.basis_d;
      for (const VecD& x : grid) {
        VecD w = Binv * x;
        double opt = cvp_enumerate(Nt, w).dist2;
        double best = std::numeric_limits<double>::infinity();
        for (const VecI& c : coords) {
          VecD gamma = to_double(MatQ(lat.adapted_ambient)) * c.cast<double>();
          VecD d = x - gamma;
          best = std::min(best, d.dot(Mt * d));
        }
        if (best > opt * (1.0 + 1e-9) + 1e-12) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) {
      cs.verified = true;
      cs.radii = radii;
      MatQ E = lat.adapted_ambient;
      for (const VecI& c : coords) {
        VecQ cq(n);
        for (int i = 0; i < n; ++i) cq(i) = Rational(static_cast<long long>(c(i)));
        VecQ gamma = E * cq;
        cs.points.push_back(gamma);
        cs.points_d.push_back(to_double(gamma));
      }
      return cs;
    }
    for (double& R : radii) R *= 1.6;
  }
  throw NumericError("candidate_set: verification did not converge while growing radii");
}

}  // namespace

CandidateSet candidate_set(const StackModel& M, const LatticeModel& L,
                           const GradedLatticeData& lat, const VecD& box_lo, const VecD& box_hi,
                           const ParamSchedule& schedule, double t_min, double t_max,
                           std::size_t max_points_per_level) {
  auto form_at = [&](double t) { return pullback(M.G, schedule.eval(t)); };
  return candidate_set_impl(M, L, lat, box_lo, box_hi, form_at, t_min, t_max,
                            enumeration_budget(max_points_per_level));
}

namespace {

PolytopeD translate(const PolytopeD& P, const VecD& gamma) {
  PolytopeD out = P;
  out.vertices.colwise() += gamma;
  out.offsets += P.normals * gamma;
  return out;
}

}  // namespace

SweepResult hausdorff_sweep(const ScalarFamily& family, const StackModel& M,
                            const LatticeModel& L, const GradedLatticeData& lat,
                            const VecQ& gamma, const std::vector<double>& t_grid,
                            const std::optional<std::pair<VecD, VecD>>& window, int threads) {
  if (t_grid.empty()) throw ValidationError("hausdorff_sweep: empty t grid");
  HigherVorCell cell = higher_voronoi_closure(M, lat);
  PolytopeD closure0 = to_double(cell.closure);
  VecD gamma_d = to_double(gamma);
  // Candidate box: the closure inflated, around the origin cell.
  VecD lo = closure0.vertices.rowwise().minCoeff();
  VecD hi = closure0.vertices.rowwise().maxCoeff();
  VecD mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  lo = mid - 1.6 * half;
  hi = mid + 1.6 * half;
  auto form_at = [&](double t) { return family(t); };
  CandidateSet cs = candidate_set_impl(M, L, lat, lo, hi, form_at, t_grid.front(), t_grid.back(),
                                       enumeration_budget(10000));
  PolytopeD target = translate(closure0, gamma_d);
  std::optional<MatD> win_normals;
  std::optional<VecD> win_offsets;
  if (window) {
    MatD A(0, M.n());
    VecD b(0);
    append_box(A, b, window->first, window->second);
    win_normals = A;
    win_offsets = b;
    target = clip(target, A, b);
  }
  SweepResult res;
  res.points.resize(t_grid.size());
  auto work = [&](std::size_t k) {
    double t = t_grid[k];
    SweepPoint pt;
    pt.t = t;
    MatD Mt = family(t);
    SymEig eig = jacobi_eigensymmetric(Mt);
    pt.pd = eig.values(0) > 0;
    if (!pt.pd) {
      pt.dH = std::numeric_limits<double>::quiet_NaN();
      res.points[k] = pt;
      return;
    }
    PolytopeD Wt = voronoi_cell_scalar(Mt, L.basis_d);
    // Augment with the candidate half-spaces (sound within the sweep box).
    int extra = 0;
    for (const VecD& eta : cs.points_d)
      if (eta.norm() > 0) ++extra;
    MatD A(Wt.normals.rows() + extra, M.n());
    VecD b(Wt.offsets.size() + extra);
    A.topRows(Wt.normals.rows()) = Wt.normals;
    b.head(Wt.offsets.size()) = Wt.offsets;
    int at = static_cast<int>(Wt.normals.rows());
    for (const VecD& eta : cs.points_d) {
      if (eta.norm() == 0) continue;
      A.row(at) = (2.0 * (Mt * eta)).transpose();
      b(at) = eta.dot(Mt * eta);
      ++at;
    }
    PolytopeD Wt_full = translate(from_hrep(A, b), gamma_d);
    if (win_normals) Wt_full = clip(Wt_full, *win_normals, *win_offsets);
    pt.dH = hausdorff_distance(Wt_full, target);
    res.points[k] = pt;
  };
  if (threads <= 1) {
    for (std::size_t k = 0; k < t_grid.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (t_grid.size() + static_cast<std::size_t>(threads) - 1) /
                        static_cast<std::size_t>(threads);
    for (int th = 0; th < threads; ++th) {
      std::size_t begin = static_cast<std::size_t>(th) * chunk;
      std::size_t end = std::min(t_grid.size(), begin + chunk);
      if (begin >= end) break;
      pool.emplace_back([&, begin, end] {
        for (std::size_t k = begin; k < end; ++k) work(k);
      });
    }
    for (auto& th : pool) th.join();
  }
  res.monotone_decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& pt : res.points) {
    if (!pt.pd) continue;
    if (pt.dH >= prev) res.monotone_decreasing = false;
    prev = pt.dH;
    res.final_dH = pt.dH;
  }
  return res;
}

std::vector<double> compact_hausdorff_distance(
    const std::vector<VecD>& A, const std::vector<VecD>& B,
    const std::vector<std::pair<VecD, VecD>>& windows) {
  auto in_box = [](const VecD& x, const VecD& lo, const VecD& hi) {
    for (int i = 0; i < x.size(); ++i)
      if (x(i) < lo(i) || x(i) > hi(i)) return false;
    return true;
  };
  std::vector<double> out;
  for (const auto& [lo, hi] : windows) {
    std::vector<VecD> a, b;
    for (const VecD& x : A)
      if (in_box(x, lo, hi)) a.push_back(x);
    for (const VecD& x : B)
      if (in_box(x, lo, hi)) b.push_back(x);
    if (a.empty() && b.empty()) {
      out.push_back(0.0);
      continue;
    }
    if (a.empty() || b.empty()) {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    double h = 0;
    for (const VecD& x : a) {
      double d = std::numeric_limits<double>::infinity();
      for (const VecD& y : b) d = std::min(d, (x - y).norm());
      h = std::max(h, d);
    }
    for (const VecD& y : b) {
      double d = std::numeric_limits<double>::infinity();
      for (const VecD& x : a) d = std::min(d, (x - y).norm());
      h = std::max(h, d);
    }
    out.push_back(h);
  }
  return out;
}

bool polydisk_contains(const StackModel& M, const VecD& z, const VecD& rho, const VecD& x,
                       double tol) {
  if (rho.size() != M.r()) throw ValidationError("polydisk: radius rank mismatch");
  VecD d = x - z;
  if (d.norm() <= tol) return true;
  int level = 1;
  while (level < M.r() && in_span_d(M.filt.bases[static_cast<std::size_t>(level)], d, tol))
    ++level;
  double q = d.dot(M.G.mat(level - 1) * d);
  return q > 0 && q < rho(level - 1);
}

bool polydisk_contains(const StackModel& M, const VecQ& z, const VecQ& rho, const VecQ& x) {
  if (!M.filt.exact_bases) throw ValidationError("polydisk: exact filtration unavailable");
  if (rho.size() != M.r()) throw ValidationError("polydisk: radius rank mismatch");
  VecQ d = x - z;
  if (d.isZero(Rational(0))) return true;
  int level = 1;
  while (level < M.r() && in_span_q((*M.filt.exact_bases)[static_cast<std::size_t>(level)], d))
    ++level;
  Rational q = (d.transpose() * M.G.exact_mat(level - 1) * d)(0, 0);
  return q > 0 && q < rho(level - 1);
}

}  // namespace lexvor
