#include "lexvor/core_linear.hpp"
#include "lexvor/jacobi.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lexvor;

namespace {

MatQ qmat(int n, std::initializer_list<const char*> entries) {
  MatQ A(n, n);
  int k = 0;
  for (const char* e : entries) {
    A(k / n, k % n) = parse_rational(e);
    ++k;
  }
  REQUIRE(k == n * n);
  return A;
}

GramStack rank2_euclidean() {
  return GramStack(std::vector<MatQ>{qmat(2, {"1", "0", "0", "0"}), qmat(2, {"0", "0", "0", "1"})});
}

GramStack quasi_tiling2() {
  // <x,y>_1 = x1 y1, <x,y>_2 = (x2 - x1/2)(y2 - y1/2)
  return GramStack(std::vector<MatQ>{qmat(2, {"1", "0", "0", "0"}),
                                     qmat(2, {"1/4", "-1/2", "-1/2", "1"})});
}

GramStack positive_but_not_inner() {
  // (x1 y1, x2 y2 + x1 y3 + x3 y1, x3 y3) on R^3
  return GramStack(std::vector<MatQ>{
      qmat(3, {"1", "0", "0", "0", "0", "0", "0", "0", "0"}),
      qmat(3, {"0", "0", "1", "0", "1", "0", "1", "0", "0"}),
      qmat(3, {"0", "0", "0", "0", "0", "0", "0", "0", "1"})});
}

}  // namespace

TEST_CASE("filtration of the worked examples") {
  SUBCASE("rank-2 Euclidean: F^2 = span e2, F^3 = 0") {
    Filtration F = filtration(rank2_euclidean());
    CHECK(F.dims == std::vector<int>{2, 1, 0});
    const MatQ& B2 = (*F.exact_bases)[1];
    REQUIRE(B2.cols() == 1);
    CHECK(B2(0, 0) == 0);
    CHECK(B2(1, 0) != 0);
  }
  SUBCASE("rank one: F^1 = H, F^2 = 0") {
    GramStack G(std::vector<MatQ>{qmat(2, {"2", "1", "1", "2"})});
    Filtration F = filtration(G);
    CHECK(F.dims == std::vector<int>{2, 0});
  }
  SUBCASE("quasi-tiling-2: F^2 = span e2 (checked against the row-reduction oracle)") {
    GramStack G = quasi_tiling2();
    Filtration F = filtration(G);
    auto orc = oracle::analyze_stack(G.exact_mats());
    CHECK(F.dims == orc.dims);
    CHECK(F.dims == std::vector<int>{2, 1, 0});
    CHECK((*F.exact_bases)[1](0, 0) == 0);
  }
  SUBCASE("zero component and r > n are legal; levels may repeat") {
    GramStack G(std::vector<MatQ>{qmat(1, {"0"}), qmat(1, {"0"}), qmat(1, {"1"})});
    Filtration F = filtration(G);
    CHECK(F.dims == std::vector<int>{1, 1, 1, 0});
  }
}

TEST_CASE("nullspace soundness invariant") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GramStack G = oracle::random_inner_product_stack(rng, 4, 3);
    Filtration F = filtration(G);
    for (int j = 2; j <= G.r() + 1; ++j) {
      const MatQ& B = (*F.exact_bases)[j - 1];
      for (int i = 1; i < j; ++i)
        CHECK(MatQ(G.exact_mat(i - 1) * B).isZero(Rational(0)));
    }
  }
}

TEST_CASE("is_inner_product verdicts") {
  SUBCASE("PositiveButNotInner: no with a level-2 witness") {
    auto v = is_inner_product(positive_but_not_inner());
    CHECK_FALSE(v.yes);
    CHECK(v.witness_level == 2);
    REQUIRE(v.exact_witness.has_value());
    const VecQ& w = *v.exact_witness;
    // Witness must sit in F^2 \ F^3 = {x1 = 0} and have q_2 <= 0.
    CHECK(w(0) == 0);
    CHECK_FALSE(w.isZero(Rational(0)));
    GramStack G = positive_but_not_inner();
    Rational q2 = (w.transpose() * G.exact_mat(1) * w)(0, 0);
    CHECK(q2 <= 0);
  }
  SUBCASE("identity, rank one: yes") {
    CHECK(is_inner_product(GramStack(std::vector<MatQ>{qmat(2, {"1", "0", "0", "1"})})).yes);
  }
  SUBCASE("quasi-tiling-2: yes, graded grams both [1]") {
    GramStack G = quasi_tiling2();
    CHECK(is_inner_product(G).yes);
    StackModel M = analyze(G);
    CHECK(*M.graded[0].exact_gram == qmat(1, {"1"}));
    CHECK(*M.graded[1].exact_gram == qmat(1, {"1"}));
  }
  SUBCASE("float mode agrees on the same examples") {
    GramStack Gf(std::vector<MatD>{to_double(qmat(2, {"1", "0", "0", "0"})),
                                   to_double(qmat(2, {"1/4", "-1/2", "-1/2", "1"}))});
    CHECK(is_inner_product(Gf).yes);
  }
}

TEST_CASE("is_inner_product agrees with the row-reduction oracle on random stacks") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + trial % 3, r = 1 + (trial / 3) % 3;
    bool degenerate = trial % 2 == 0;
    GramStack G = oracle::random_inner_product_stack(rng, n, r, degenerate);
    auto orc = oracle::analyze_stack(G.exact_mats());
    auto v = is_inner_product(G);
    CHECK(v.yes == orc.inner_product);
    Filtration F = filtration(G);
    CHECK(F.dims == orc.dims);
    if (!v.yes) {
      // The returned witness is always a genuine certificate.
      const VecQ& w = *v.exact_witness;
      Rational q = (w.transpose() * G.exact_mat(v.witness_level - 1) * w)(0, 0);
      CHECK(q <= 0);
    }
  }
}

TEST_CASE("graded pieces") {
  GramStack G(std::vector<MatQ>{qmat(2, {"2", "1", "1", "2"})});
  Filtration F = filtration(G);
  GradedPiece g = graded_piece(G, F, 1);
  CHECK(*g.exact_gram == G.exact_mat(0));  // r = 1: N_1 = A_1
  CHECK_THROWS_AS(graded_piece(G, F, 2), ValidationError);
}

TEST_CASE("lifting") {
  SUBCASE("quasi-tiling-2: lift of the gr^1 class of e1 is (1, 1/2)") {
    MatD L = lift(quasi_tiling2(), 1);
    REQUIRE(L.cols() == 1);
    CHECK(L(0, 0) == doctest::Approx(1.0));
    CHECK(L(1, 0) == doctest::Approx(0.5));
  }
  SUBCASE("disjoint supports: lifts are coordinate inclusions") {
    GramStack G(std::vector<MatQ>{qmat(2, {"1", "0", "0", "0"}), qmat(2, {"0", "0", "0", "3"})});
    StackModel M = analyze(G);
    CHECK((*M.ao.exact_blocks)[0] == qmat(2, {"1", "0", "0", "0"}).col(0));
    CHECK((*M.ao.exact_blocks)[1] == qmat(2, {"0", "0", "0", "1"}).col(1));
  }
  SUBCASE("last level lifts are inclusions") {
    MatD L = lift(rank2_euclidean(), 2);
    CHECK(L(0, 0) == doctest::Approx(0.0));
    CHECK(std::abs(L(1, 0)) == doctest::Approx(1.0));
  }
  SUBCASE("not-an-inner-product input fails") {
    CHECK_THROWS_WITH_AS(analyze(positive_but_not_inner()), "not an inner product",
                         NumericError);
  }
}

TEST_CASE("almost orthogonal decomposition invariants on random stacks") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 25; ++trial) {
    int n = 2 + trial % 4, r = 1 + trial % 3;
    GramStack G = oracle::random_inner_product_stack(rng, n, r);
    StackModel M = analyze(G);
    // Blocks span: exact determinant nonzero.
    CHECK(rank_q(*M.exact_basis) == n);
    // pi_j o pi_j^* = id: block coordinates of a lifted rep vector are unit.
    for (int j = 1; j <= r; ++j) {
      int nj = M.block_dim(j);
      for (int c = 0; c < nj; ++c) {
        VecQ theta = (*M.ao.exact_blocks)[static_cast<std::size_t>(j) - 1].col(c);
        VecQ u = M.block_coords_exact(theta, j);
        for (int i = 0; i < nj; ++i) CHECK(u(i) == (i == c ? 1 : 0));
      }
    }
    // Almost orthogonality, exactly: <u, v>_max(i,j) = 0 for block pairs.
    for (int i = 1; i <= r; ++i)
      for (int j = i + 1; j <= r; ++j) {
        const MatQ& Ui = (*M.ao.exact_blocks)[static_cast<std::size_t>(i) - 1];
        const MatQ& Uj = (*M.ao.exact_blocks)[static_cast<std::size_t>(j) - 1];
        CHECK(MatQ(Ui.transpose() * G.exact_mat(j - 1) * Uj).isZero(Rational(0)));
      }
    // Lifted image pairs to zero against all deeper filtration levels.
    Filtration F = M.filt;
    for (int j = 1; j <= r; ++j)
      for (int k = j + 1; k <= r; ++k) {
        const MatQ& Uj = (*M.ao.exact_blocks)[static_cast<std::size_t>(j) - 1];
        const MatQ& Fk = (*F.exact_bases)[static_cast<std::size_t>(k) - 1];
        CHECK(MatQ(Uj.transpose() * G.exact_mat(k - 1) * Fk).isZero(Rational(0)));
      }
  }
}

TEST_CASE("orthogonalize") {
  SUBCASE("orthogonal input is a fixed point") {
    GramStack G(std::vector<MatQ>{qmat(2, {"1", "0", "0", "0"}), qmat(2, {"0", "0", "0", "3"})});
    GramStack O = orthogonalize(G);
    CHECK(O.exact_mat(0) == G.exact_mat(0));
    CHECK(O.exact_mat(1) == G.exact_mat(1));
  }
  SUBCASE("quasi-tiling-2 is already orthogonal (A_2 is rank one along the lift complement)") {
    GramStack G = quasi_tiling2();
    GramStack O = orthogonalize(G);
    CHECK(O.exact_mat(0) == G.exact_mat(0));
    CHECK(O.exact_mat(1) == G.exact_mat(1));
  }
  SUBCASE("cross terms vanish exactly after orthogonalization; filtration is preserved") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
      GramStack G = oracle::random_inner_product_stack(rng, 4, 2);
      GramStack O = orthogonalize(G);
      StackModel MO = analyze(O);
      for (int i = 1; i <= 2; ++i)
        for (int j = i + 1; j <= 2; ++j) {
          const MatQ& Ui = (*MO.ao.exact_blocks)[static_cast<std::size_t>(i) - 1];
          const MatQ& Uj = (*MO.ao.exact_blocks)[static_cast<std::size_t>(j) - 1];
          for (int k = 1; k <= 2; ++k)
            CHECK(MatQ(Ui.transpose() * O.exact_mat(k - 1) * Uj).isZero(Rational(0)));
        }
      CHECK(filtration(O).dims == filtration(G).dims);
    }
  }
}

TEST_CASE("reference norm") {
  GramStack G = quasi_tiling2();
  StackModel M = analyze(G);
  CHECK(ref_norm(M, VecD::Zero(2)) == doctest::Approx(0.0));
  VecD x(2);
  x << 1.0, 0.5;
  CHECK(ref_norm(M, x) == doctest::Approx(1.0));
  StackModel E = analyze(rank2_euclidean());
  VecD y(2);
  y << 3.0, 4.0;
  CHECK(ref_norm(E, y) == doctest::Approx(5.0));
  // Norm axioms on samples: homogeneity and triangle inequality.
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 50; ++k) {
    VecD a(2), b(2);
    a << u(rng), u(rng);
    b << u(rng), u(rng);
    CHECK(ref_norm(M, VecD(2 * a)) == doctest::Approx(2 * ref_norm(M, a)));
    CHECK(ref_norm(M, VecD(a + b)) <= ref_norm(M, a) + ref_norm(M, b) + 1e-12);
  }
}

TEST_CASE("pullback") {
  SUBCASE("rank one scales") {
    GramStack G(std::vector<MatQ>{qmat(2, {"2", "1", "1", "2"})});
    VecD L(1);
    L << 3.0;
    CHECK((pullback(G, L) - 3.0 * G.mat(0)).norm() == doctest::Approx(0.0));
  }
  SUBCASE("quasi-tiling-2 closed form") {
    GramStack G = quasi_tiling2();
    VecQ L(2);
    L << Rational(7), Rational(2);
    MatQ P = pullback_exact(G, L);
    CHECK(P == qmat(2, {"15/2", "-1", "-1", "2"}));
  }
  SUBCASE("rank-2 Euclidean is diagonal") {
    VecD L(2);
    L << 5.0, 1.0;
    CHECK((pullback(rank2_euclidean(), L) - (MatD(2, 2) << 5, 0, 0, 1).finished()).norm() ==
          doctest::Approx(0.0));
  }
}

TEST_CASE("min_separation_constant") {
  std::vector<double> grid{1.5, 3.0, 10.0, 100.0, 1000.0};
  SUBCASE("rank-2 Euclidean: PD for all positive weights, estimate at grid minimum") {
    auto est = min_separation_constant(rank2_euclidean(), grid);
    CHECK(est.finite);
    CHECK(est.C == doctest::Approx(1.5));
  }
  SUBCASE("quasi-tiling-2: estimate at grid minimum (det = L1 L2 > 0)") {
    auto est = min_separation_constant(quasi_tiling2(), grid);
    CHECK(est.finite);
    CHECK(est.C == doctest::Approx(1.5));
  }
  SUBCASE("PositiveButNotInner: no finite C up to grid max") {
    auto est = min_separation_constant(positive_but_not_inner(), grid);
    CHECK_FALSE(est.finite);
  }
}

TEST_CASE("pullback PD law on random inner products") {
  std::mt19937 rng(31);
  std::vector<double> grid{2.0, 5.0, 20.0, 200.0};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    GramStack G = oracle::random_inner_product_stack(rng, 3, 2);
    auto est = min_separation_constant(G, grid, 8, 17);
    REQUIRE(est.finite);
    double rho = 10.0 * est.C;
    for (int ray = 0; ray < 100; ++ray) {
      VecD L(G.r());
      L(G.r() - 1) = std::pow(10.0, u(rng));
      for (int j = G.r() - 2; j >= 0; --j) L(j) = L(j + 1) * rho * std::pow(100.0, u(rng));
      SymEig eig = jacobi_eigensymmetric(pullback(G, L));
      CHECK(eig.values(0) > 0.0);
    }
  }
}
