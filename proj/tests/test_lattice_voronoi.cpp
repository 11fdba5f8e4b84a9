#include "lexvor/torus.hpp"
#include "lexvor/voronoi.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lexvor;

namespace {

GramStack rank2_euclidean() {
  MatQ A1 = MatQ::Zero(2, 2), A2 = MatQ::Zero(2, 2);
  A1(0, 0) = 1;
  A2(1, 1) = 1;
  return GramStack(std::vector<MatQ>{A1, A2});
}

GramStack quasi_tiling2() {
  MatQ A1 = MatQ::Zero(2, 2), A2(2, 2);
  A1(0, 0) = 1;
  A2 << Rational(1, 4), Rational(-1, 2), Rational(-1, 2), Rational(1);
  return GramStack(std::vector<MatQ>{A1, A2});
}

LatticeModel z_lattice(int n) { return LatticeModel(MatQ::Identity(n, n)); }

// Exhaustive lex membership over the window |gamma_i| <= K (the brute-force
// tiler used to freeze the quasi-tiling coordinates).
bool brute_member(const std::vector<MatQ>& mats, const VecQ& x, const VecQ& gamma, int K) {
  auto qg = oracle::quad_of(mats, VecQ(x - gamma));
  int n = static_cast<int>(x.size());
  std::vector<int> c(static_cast<std::size_t>(n), -K);
  while (true) {
    VecQ eta(n);
    for (int i = 0; i < n; ++i) eta(i) = c[static_cast<std::size_t>(i)];
    auto qe = oracle::quad_of(mats, VecQ(x - eta));
    if (oracle::lex_less(qe, qg)) return false;
    int i = 0;
    for (; i < n; ++i) {
      if (++c[static_cast<std::size_t>(i)] <= K) break;
      c[static_cast<std::size_t>(i)] = -K;
    }
    if (i == n) break;
  }
  return true;
}

}  // namespace

TEST_CASE("admissible lattices") {
  SUBCASE("Z^2 with the rank-2 Euclidean product: graded lattices are Z and Z") {
    auto res = admissible_lattice(rank2_euclidean(), z_lattice(2));
    REQUIRE(res.admissible);
    CHECK(res.data->level_dims == std::vector<int>{1, 1});
    for (int k = 0; k < 2; ++k) {
      REQUIRE(res.data->graded_bases[static_cast<std::size_t>(k)].cols() == 1);
      // One generator of unit length in rep coordinates.
      CHECK(boost::multiprecision::abs(res.data->graded_bases[static_cast<std::size_t>(k)](0, 0)) == 1);
    }
  }
  SUBCASE("the lattice spanned by (pi, 1), (1, 0) is refused with a rank deficit at level 2") {
    MatD B(2, 2);
    B << 3.14159265358979323846, 1.0, 1.0, 0.0;
    auto res = admissible_lattice_float(rank2_euclidean(), B, 1000);
    CHECK_FALSE(res.admissible);
    CHECK(res.fail_level == 2);
  }
  SUBCASE("Z^2 with quasi-tiling-2 is admissible") {
    auto res = admissible_lattice(quasi_tiling2(), z_lattice(2));
    REQUIRE(res.admissible);
    CHECK(res.data->level_dims == std::vector<int>{1, 1});
    // Lambda^2 = {0} x Z: the level-2 adapted column is +-e2.
    VecQ e = res.data->adapted_ambient.col(res.data->level_offsets[1]);
    CHECK(e(0) == 0);
    CHECK(boost::multiprecision::abs(e(1)) == 1);
  }
  SUBCASE("float stacks must be rationalized or rejected") {
    GramStack Gf(std::vector<MatD>{to_double(MatQ(MatQ::Identity(2, 2)))});
    CHECK_THROWS_AS(admissible_lattice(Gf, z_lattice(2)), ValidationError);
  }
}

TEST_CASE("scalar Voronoi cells") {
  SUBCASE("Z^n with the identity gram: cube [-1/2, 1/2]^n") {
    for (int n = 1; n <= 3; ++n) {
      PolytopeQ P = voronoi_cell_scalar_exact(MatQ::Identity(n, n), MatQ::Identity(n, n));
      CHECK(P.vertex_count() == (1 << n));
      for (int v = 0; v < P.vertex_count(); ++v)
        for (int i = 0; i < n; ++i)
          CHECK(boost::multiprecision::abs(P.vertices(i, v)) == Rational(1, 2));
    }
  }
  SUBCASE("hexagonal gram [[2,1],[1,2]]: hexagon matching the nearest-point oracle") {
    MatQ N(2, 2);
    N << Rational(2), Rational(1), Rational(1), Rational(2);
    PolytopeQ P = voronoi_cell_scalar_exact(N, MatQ::Identity(2, 2));
    CHECK(P.vertex_count() == 6);
    // Oracle: grid points are inside the cell iff 0 is a nearest lattice point.
    PolytopeD Pd = to_double(P);
    for (int a = -12; a <= 12; ++a) {
      for (int b = -12; b <= 12; ++b) {
        VecD x(2);
        x << a / 10.0, b / 10.0;
        double q0 = x.dot(to_double(N) * x);
        double best = q0;
        for (int g1 = -3; g1 <= 3; ++g1)
          for (int g2 = -3; g2 <= 3; ++g2) {
            VecD d = x - (VecD(2) << g1, g2).finished();
            best = std::min(best, d.dot(to_double(N) * d));
          }
        bool inside_oracle = q0 <= best + 1e-12;
        bool boundary = std::abs(q0 - best) <= 1e-9;
        if (!boundary) CHECK(contains(Pd, x) == inside_oracle);
      }
    }
  }
  SUBCASE("one dimensional cell of gram [L] is [-1/2, 1/2]") {
    MatQ N(1, 1);
    N << Rational(5);
    PolytopeQ P = voronoi_cell_scalar_exact(N, MatQ::Identity(1, 1));
    REQUIRE(P.vertex_count() == 2);
    CHECK(boost::multiprecision::abs(P.vertices(0, 0)) == Rational(1, 2));
  }
  SUBCASE("dimension budget") {
    CHECK_THROWS_AS(voronoi_cell_scalar(MatD::Identity(7, 7), MatD::Identity(7, 7)),
                    BudgetError);
  }
}

TEST_CASE("higher Voronoi closure of quasi-tiling-2 over Z^2") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  auto adm = admissible_lattice(M, z_lattice(2));
  REQUIRE(adm.admissible);
  HigherVorCell cell = higher_voronoi_closure(M, *adm.data);
  SUBCASE("the lifted level cells are the expected segments") {
    REQUIRE(cell.level_cells.size() == 2);
    const PolytopeQ& P1 = cell.level_cells[0];
    REQUIRE(P1.vertex_count() == 2);
    // Segment from (-1/2, -1/4) to (1/2, 1/4).
    for (int v = 0; v < 2; ++v) {
      CHECK(boost::multiprecision::abs(P1.vertices(0, v)) == Rational(1, 2));
      CHECK(P1.vertices(1, v) == P1.vertices(0, v) / 2);
    }
    const PolytopeQ& P2 = cell.level_cells[1];
    REQUIRE(P2.vertex_count() == 2);
    for (int v = 0; v < 2; ++v) {
      CHECK(P2.vertices(0, v) == 0);
      CHECK(boost::multiprecision::abs(P2.vertices(1, v)) == Rational(1, 2));
    }
  }
  SUBCASE("closure is the parallelogram with the frozen vertices, exactly") {
    REQUIRE(cell.closure.vertex_count() == 4);
    std::vector<std::pair<Rational, Rational>> expect = {
        {Rational(1, 2), Rational(3, 4)},
        {Rational(1, 2), Rational(-1, 4)},
        {Rational(-1, 2), Rational(1, 4)},
        {Rational(-1, 2), Rational(-3, 4)}};
    for (const auto& [ex, ey] : expect) {
      bool found = false;
      for (int v = 0; v < 4; ++v)
        if (cell.closure.vertices(0, v) == ex && cell.closure.vertices(1, v) == ey) found = true;
      CHECK(found);
    }
    CHECK(cell.closure.consistent);
  }
  SUBCASE("translation equivariance is exact") {
    VecQ gamma(2);
    gamma << Rational(2), Rational(-1);
    HigherVorCell shifted = higher_voronoi_closure(M, *adm.data, &gamma);
    for (int v = 0; v < 4; ++v) {
      VecQ d = shifted.closure.vertices.col(v) - gamma;
      bool found = false;
      for (int w = 0; w < 4; ++w)
        if (VecQ(cell.closure.vertices.col(w)) == d) found = true;
      CHECK(found);
    }
  }
  SUBCASE("rank-2 Euclidean over Z^2 gives the unit square") {
    StackModel ME = analyze(rank2_euclidean());
    auto adm2 = admissible_lattice(ME, z_lattice(2));
    HigherVorCell sq = higher_voronoi_closure(ME, *adm2.data);
    CHECK(sq.closure.vertex_count() == 4);
    for (int v = 0; v < 4; ++v) {
      CHECK(boost::multiprecision::abs(sq.closure.vertices(0, v)) == Rational(1, 2));
      CHECK(boost::multiprecision::abs(sq.closure.vertices(1, v)) == Rational(1, 2));
    }
  }
  SUBCASE("rank one reduces to the scalar cell") {
    MatQ A(2, 2);
    A << Rational(2), Rational(1), Rational(1), Rational(2);
    GramStack G1(std::vector<MatQ>{A});
    StackModel M1 = analyze(G1);
    auto adm1 = admissible_lattice(M1, z_lattice(2));
    HigherVorCell c1 = higher_voronoi_closure(M1, *adm1.data);
    PolytopeQ direct = voronoi_cell_scalar_exact(A, MatQ::Identity(2, 2));
    CHECK(c1.closure.vertex_count() == direct.vertex_count());
  }
}

TEST_CASE("lex membership") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  // Candidate window: |gamma_i| <= 3.
  std::vector<VecQ> sites;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      VecQ g(2);
      g << Rational(a), Rational(b);
      sites.push_back(g);
    }
  VecQ zero = VecQ::Zero(2);
  SUBCASE("x = gamma is always a member") {
    CHECK(lex_membership(M, sites, zero, zero) == Membership::In);
  }
  SUBCASE("(0.3, 0.3) is inside the cell of 0") {
    VecQ x(2);
    x << Rational(3, 10), Rational(3, 10);
    CHECK(lex_membership(M, sites, zero, x) == Membership::In);
    CHECK(brute_member(G.exact_mats(), x, zero, 3));
  }
  SUBCASE("(0.5, 0.76) is outside (beyond the vertex (1/2, 3/4))") {
    VecQ x(2);
    x << Rational(1, 2), Rational(76, 100);
    CHECK(lex_membership(M, sites, zero, x) == Membership::Out);
    CHECK_FALSE(brute_member(G.exact_mats(), x, zero, 3));
  }
  SUBCASE("float mode reports unresolvable ties explicitly") {
    std::vector<VecD> sites_d;
    for (const auto& s : sites) sites_d.push_back(to_double(s));
    // Near (1/2, 0) the competitor (1,0) ties in both coordinates; a sub-tau
    // perturbation makes every comparison a near-tie, which must be reported.
    VecD x(2);
    x << 0.5 + 1e-12, 1e-12;
    CHECK(lex_membership(M, sites_d, VecD(VecD::Zero(2)), x) == Membership::TieAmbiguous);
    // The boundary segment itself resolves cleanly at the second coordinate.
    VecD y(2);
    y << 0.5, 0.25;
    CHECK(lex_membership(M, sites_d, VecD(VecD::Zero(2)), y) == Membership::In);
  }
}

TEST_CASE("membership agrees with the Minkowski closure away from the boundary") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  auto adm = admissible_lattice(M, z_lattice(2));
  HigherVorCell cell = higher_voronoi_closure(M, *adm.data);
  std::vector<VecQ> sites;
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      VecQ g(2);
      g << Rational(a), Rational(b);
      sites.push_back(g);
    }
  VecQ zero = VecQ::Zero(2);
  int checked = 0;
  for (int a = -10; a <= 10; ++a) {
    for (int b = -10; b <= 10; ++b) {
      VecQ x(2);
      x << Rational(a, 10), Rational(b, 10);
      // Skip points within 1e-6 of the closure boundary.
      bool near_boundary = false;
      for (int i = 0; i < cell.closure.normals.rows(); ++i) {
        Rational slack = cell.closure.offsets(i) - (cell.closure.normals.row(i) * x)(0, 0);
        if (boost::multiprecision::abs(slack) < Rational(1, 100000)) near_boundary = true;
      }
      if (near_boundary) continue;
      ++checked;
      bool inside = contains(cell.closure, x);
      bool member = lex_membership(M, sites, zero, x) == Membership::In;
      CHECK(member == inside);
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("candidate sets") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  LatticeModel L = z_lattice(2);
  auto adm = admissible_lattice(M, L);
  auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
  SUBCASE("B = {0}: contains the center and is verified") {
    CandidateSet cs = candidate_set(M, L, *adm.data, VecD::Zero(2), VecD::Zero(2), sched, 10.0);
    CHECK(cs.verified);
    bool has_zero = false;
    for (const auto& p : cs.points)
      if (p.isZero(Rational(0))) has_zero = true;
    CHECK(has_zero);
  }
  SUBCASE("B = [-1,1]^2: small verified set, argmin matches the box oracle") {
    VecD lo = VecD::Constant(2, -1.0), hi = VecD::Constant(2, 1.0);
    CandidateSet cs = candidate_set(M, L, *adm.data, lo, hi, sched, 10.0);
    CHECK(cs.verified);
    CHECK(cs.points.size() <= 50);
    // Independent re-verification on a fresh grid against |c_i| <= 5.
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double t : {10.0, 1000.0, 1000000.0}) {
      MatD Mt = pullback(G, sched.eval(t));
      for (int k = 0; k < 25; ++k) {
        VecD x(2);
        x << u(rng), u(rng);
        double best_box = std::numeric_limits<double>::infinity();
        for (int a = -5; a <= 5; ++a)
          for (int b = -5; b <= 5; ++b) {
            VecD d = x - (VecD(2) << a, b).finished();
            best_box = std::min(best_box, d.dot(Mt * d));
          }
        double best_cs = std::numeric_limits<double>::infinity();
        for (const auto& p : cs.points_d) {
          VecD d = x - p;
          best_cs = std::min(best_cs, d.dot(Mt * d));
        }
        CHECK(best_cs <= best_box * (1 + 1e-9) + 1e-12);
      }
    }
  }
  SUBCASE("rank one: the classical CVP candidate ball") {
    MatQ A(1, 1);
    A << Rational(1);
    GramStack G1(std::vector<MatQ>{A});
    StackModel M1 = analyze(G1);
    LatticeModel L1 = z_lattice(1);
    auto adm1 = admissible_lattice(M1, L1);
    auto s1 = ParamSchedule::power({0.0}, {1.0});
    CandidateSet cs = candidate_set(M1, L1, *adm1.data, VecD::Constant(1, -1.0),
                                    VecD::Constant(1, 1.0), s1, 10.0);
    CHECK(cs.verified);
    CHECK(cs.points.size() >= 3);  // at least {-1, 0, 1}
  }
}

TEST_CASE("tiling invariants on a fundamental-domain grid") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  LatticeModel L = z_lattice(2);
  auto adm = admissible_lattice(M, L);
  auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
  CandidateSet cs = candidate_set(M, L, *adm.data, VecD::Constant(2, -1.5),
                                  VecD::Constant(2, 1.5), sched, 10.0);
  std::vector<VecQ> sites = cs.points;
  HigherVorCell cell = higher_voronoi_closure(M, *adm.data);
  int covered = 0, interior_overlaps = 0, total = 0;
  for (int a = 0; a < 9; ++a) {
    for (int b = 0; b < 9; ++b) {
      VecQ x(2);
      x << Rational(a, 9), Rational(b, 9);
      ++total;
      int strict_members = 0, members = 0;
      for (const auto& gamma : cs.points) {
        if (lex_membership(M, sites, gamma, x) != Membership::In) continue;
        ++members;
        // Strict interior of the translated closure?
        bool strict = true;
        for (int i = 0; i < cell.closure.normals.rows(); ++i) {
          Rational lhs = (cell.closure.normals.row(i) * VecQ(x - gamma))(0, 0);
          if (lhs >= cell.closure.offsets(i)) strict = false;
        }
        if (strict) ++strict_members;
      }
      if (members >= 1) ++covered;
      if (strict_members > 1) ++interior_overlaps;
    }
  }
  CHECK(covered == total);
  CHECK(interior_overlaps == 0);
}

TEST_CASE("hausdorff sweeps") {
  auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
  std::vector<double> grid{10, 100, 1000, 10000};
  SUBCASE("rank-2 Euclidean: W_t is the unit square for every t") {
    GramStack G = rank2_euclidean();
    StackModel M = analyze(G);
    LatticeModel L = z_lattice(2);
    auto adm = admissible_lattice(M, L);
    auto res = hausdorff_sweep(pullback_family(G, sched), M, L, *adm.data, VecQ::Zero(2), grid);
    for (const auto& pt : res.points) CHECK(pt.dH <= 1e-8);
  }
  SUBCASE("quasi-tiling-2: decreasing to < 0.02 at t = 1e4; translate invariance") {
    GramStack G = quasi_tiling2();
    StackModel M = analyze(G);
    LatticeModel L = z_lattice(2);
    auto adm = admissible_lattice(M, L);
    auto fam = pullback_family(G, sched);
    auto res = hausdorff_sweep(fam, M, L, *adm.data, VecQ::Zero(2), grid);
    CHECK(res.monotone_decreasing);
    CHECK(res.final_dH < 0.02);
    VecQ gamma(2);
    gamma << Rational(1), Rational(1);
    auto res2 = hausdorff_sweep(fam, M, L, *adm.data, gamma, grid);
    for (std::size_t k = 0; k < grid.size(); ++k)
      CHECK(res2.points[k].dH == doctest::Approx(res.points[k].dH).epsilon(1e-6));
  }
  SUBCASE("windowed sweep matches on a box window") {
    GramStack G = quasi_tiling2();
    StackModel M = analyze(G);
    LatticeModel L = z_lattice(2);
    auto adm = admissible_lattice(M, L);
    auto fam = pullback_family(G, sched);
    std::pair<VecD, VecD> window{VecD::Constant(2, -0.4), VecD::Constant(2, 0.4)};
    auto res = hausdorff_sweep(fam, M, L, *adm.data, VecQ::Zero(2), grid, window);
    CHECK(res.final_dH < 0.02);
  }
}

TEST_CASE("compact hausdorff distances on windowed point sets") {
  SUBCASE("identical sets give zero in every window") {
    std::vector<VecD> A;
    for (int k = -5; k <= 5; ++k) A.push_back((VecD(2) << k, 0.0).finished());
    std::vector<std::pair<VecD, VecD>> windows{
        {VecD::Constant(2, -1.0), VecD::Constant(2, 1.0)},
        {VecD::Constant(2, -4.0), VecD::Constant(2, 4.0)}};
    for (double d : compact_hausdorff_distance(A, A, windows)) CHECK(d == doctest::Approx(0.0));
  }
  SUBCASE("shifted lattice vs lattice: shift norm per window") {
    std::vector<VecD> A, B;
    for (int k = -10; k <= 10; ++k) {
      A.push_back((VecD(1) << double(k)).finished());
      B.push_back((VecD(1) << k + 0.25).finished());
    }
    // Window ends chosen away from both sets so there is no clipping artifact.
    std::vector<std::pair<VecD, VecD>> windows{{VecD::Constant(1, -2.6), VecD::Constant(1, 2.6)}};
    auto d = compact_hausdorff_distance(A, B, windows);
    CHECK(d[0] == doctest::Approx(0.25));
  }
  SUBCASE("pathology fixture: the cell of 0 degenerates to the vertical axis") {
    // S = {0} u {(a_n, b_n)} u {(c_n, d_n)} with a_n = 1/n, b_n = n (and the
    // mirror image), under the rank-2 Euclidean product. On any fixed window,
    // lex membership of the cell of 0 concentrates on the axis {0} x R.
    GramStack G = rank2_euclidean();
    StackModel M = analyze(G);
    std::vector<VecQ> S;
    S.push_back(VecQ::Zero(2));
    for (int n = 1; n <= 40; ++n) {
      VecQ p(2), q(2);
      p << Rational(1, n), Rational(n);
      q << Rational(-1, n), Rational(-n);
      S.push_back(p);
      S.push_back(q);
    }
    std::vector<VecD> members, axis;
    for (int a = -20; a <= 20; ++a)
      for (int b = -20; b <= 20; ++b) {
        VecQ x(2);
        x << Rational(a, 10), Rational(b, 10);
        if (lex_membership(M, S, VecQ(VecQ::Zero(2)), x) == Membership::In)
          members.push_back(to_double(x));
      }
    for (int b = -20; b <= 20; ++b) axis.push_back((VecD(2) << 0.0, b / 10.0).finished());
    std::vector<std::pair<VecD, VecD>> windows{{VecD::Constant(2, -2.0), VecD::Constant(2, 2.0)}};
    auto d = compact_hausdorff_distance(members, axis, windows);
    // Grid resolution bound: membership only sampled on a 0.1 grid, and the
    // grid x-values 1/n are never hit beyond n = 10.
    CHECK(d[0] <= 0.15);
  }
}

TEST_CASE("polydisk membership") {
  GramStack G = rank2_euclidean();
  StackModel M = analyze(G);
  VecQ zero = VecQ::Zero(2);
  VecQ rho(2);
  rho << Rational(1), Rational(1);
  SUBCASE("the center is inside") { CHECK(polydisk_contains(M, zero, rho, zero)); }
  SUBCASE("(0, 1/2) enters via the level-2 clause: q2 = 1/4 in (0,1)") {
    VecQ x(2);
    x << Rational(0), Rational(1, 2);
    CHECK(polydisk_contains(M, zero, rho, x));
  }
  SUBCASE("(2, 0) is outside: q1 = 4 >= 1") {
    VecQ x(2);
    x << Rational(2), Rational(0);
    CHECK_FALSE(polydisk_contains(M, zero, rho, x));
  }
  SUBCASE("float variant agrees") {
    VecD x(2);
    x << 0.0, 0.5;
    CHECK(polydisk_contains(M, VecD(VecD::Zero(2)), (VecD(2) << 1.0, 1.0).finished(), x));
    x << 2.0, 0.0;
    CHECK_FALSE(polydisk_contains(M, VecD(VecD::Zero(2)), (VecD(2) << 1.0, 1.0).finished(), x));
  }
}
