#include "lexvor/tame.hpp"
#include "lexvor/torus.hpp"

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

std::vector<double> short_grid() { return {10, 100, 1000, 10000, 100000, 1000000}; }

}  // namespace

TEST_CASE("schedule construction and evaluation") {
  auto s = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
  VecD L = s.eval(100.0);
  CHECK(L(0) == doctest::Approx(100.0));
  CHECK(L(1) == doctest::Approx(1.0));
  auto Lx = s.eval_exact(Rational(100));
  REQUIRE(Lx.has_value());
  CHECK((*Lx)(0) == Rational(100));
  CHECK_THROWS_AS(ParamSchedule::power({0.0, 1.0}, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(ParamSchedule::power({1.0, 0.0}, {1.0, -1.0}), ValidationError);
  auto tbl = ParamSchedule::table({{1.0, (VecD(1) << 2.0).finished()},
                                   {2.0, (VecD(1) << 3.0).finished()}});
  CHECK(tbl.eval(2.0)(0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(tbl.eval(1.5), ValidationError);
}

TEST_CASE("check_tame on pullback families never refutes") {
  SUBCASE("rank-2 Euclidean with power (1, 0)") {
    GramStack G = rank2_euclidean();
    auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
    auto rep = check_tame(pullback_family(G, sched), G, sched, short_grid());
    CHECK(rep.verdict == TameVerdict::ConsistentWithTame);
    for (const auto& pt : rep.points) {
      CHECK(pt.b <= 1e-12);
      CHECK(pt.c <= 1e-12);
    }
  }
  SUBCASE("random rational corpus") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
      GramStack G = oracle::random_inner_product_stack(rng, 3, 2);
      auto sched = ParamSchedule::power({2.0, 0.0}, {1.0, 1.0});
      auto rep = check_tame(pullback_family(G, sched), G, sched, short_grid());
      CHECK(rep.verdict == TameVerdict::ConsistentWithTame);
    }
  }
  SUBCASE("constant family, rank one") {
    MatQ A(1, 1);
    A << Rational(2);
    GramStack G(std::vector<MatQ>{A});
    auto sched = ParamSchedule::power({0.0}, {1.0});
    auto rep = check_tame(pullback_family(G, sched), G, sched, short_grid());
    CHECK(rep.verdict == TameVerdict::ConsistentWithTame);
  }
}

TEST_CASE("check_tame refutes the metric-collapse family") {
  // M_t = [[1, b_t], [b_t, 1/t]] with t b_t^2 -> 1 against a rank-2 inner
  // product with F^2 = span e2; the natural parameters are (1, 1/t).
  ScalarFamily fam;
  fam.n = 2;
  fam.provenance = "table";
  fam.eval_d = [](double t) {
    MatD M(2, 2);
    double b = std::sqrt((1.0 - 1.0 / std::log(t)) / t);
    M << 1, b, b, 1.0 / t;
    return M;
  };
  auto sched = ParamSchedule::power({0.0, -1.0}, {1.0, 1.0});
  auto rep = check_tame(fam, rank2_euclidean(), sched, short_grid());
  CHECK(rep.verdict == TameVerdict::Refuted);
  REQUIRE(rep.witness.has_value());
  CHECK((rep.witness->property == "b" || rep.witness->property == "b'"));
  // And the defining rank-3 form of the family fails is_inner_product.
  MatQ A1 = MatQ::Zero(2, 2), A2 = MatQ::Zero(2, 2), A3 = MatQ::Zero(2, 2);
  A1(0, 0) = 1;
  A2(0, 1) = A2(1, 0) = 1;
  A3(1, 1) = 1;
  auto v = is_inner_product(GramStack(std::vector<MatQ>{A1, A2, A3}));
  CHECK_FALSE(v.yes);
  CHECK(v.witness_level == 2);
}

TEST_CASE("check_tame flags non-PD samples") {
  ScalarFamily fam;
  fam.n = 1;
  fam.provenance = "table";
  fam.eval_d = [](double t) {
    MatD M(1, 1);
    M << (t < 50 ? -1.0 : 1.0);
    return M;
  };
  MatQ A(1, 1);
  A << Rational(1);
  GramStack G(std::vector<MatQ>{A});
  auto sched = ParamSchedule::power({0.0}, {1.0});
  auto rep = check_tame(fam, G, sched, {10, 100, 1000});
  CHECK(rep.excluded_non_pd == 1);
  CHECK_FALSE(rep.points[0].pd);
}

TEST_CASE("uniform equivalence constants") {
  SUBCASE("orthogonal pullback family gives D = 1") {
    GramStack G = rank2_euclidean();
    auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
    double D = uniform_equivalence(pullback_family(G, sched), G, sched, 100.0);
    CHECK(D == doctest::Approx(1.0));
  }
  SUBCASE("quasi-tiling-2 pullback: D decreases toward 1 as the ratio grows") {
    GramStack G = quasi_tiling2();
    auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
    auto fam = pullback_family(G, sched);
    double d100 = uniform_equivalence(fam, G, sched, 100.0);
    double d10000 = uniform_equivalence(fam, G, sched, 10000.0);
    CHECK(d100 >= 1.0);
    CHECK(d10000 >= 1.0);
    CHECK(d10000 <= d100);
    CHECK(d10000 < 1.05);
  }
  SUBCASE("collapse family matches the 2x2 closed form (1+theta)/(1-theta)") {
    double t = 1e4;
    double b = std::sqrt((1.0 - 1.0 / std::log(t)) / t);
    ScalarFamily fam;
    fam.n = 2;
    fam.provenance = "table";
    fam.eval_d = [b](double) {
      MatD M(2, 2);
      M << 1, b, b, 1.0 / 1e4;
      return M;
    };
    auto sched = ParamSchedule::power({0.0, -1.0}, {1.0, 1.0});
    double D = uniform_equivalence(fam, rank2_euclidean(), sched, t);
    // Generalized eigenvalues of the pencil are 1 +- theta; D covers both sides.
    double theta = b * std::sqrt(t);
    CHECK(D == doctest::Approx(std::max(1 + theta, 1 / (1 - theta))).epsilon(1e-8));
  }
  SUBCASE("invariance under simultaneous congruence") {
    GramStack G = quasi_tiling2();
    auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
    MatQ Sq(2, 2);
    Sq << Rational(1), Rational(2), Rational(-1), Rational(1);
    std::vector<MatQ> conj;
    for (int j = 0; j < 2; ++j) conj.push_back(MatQ(Sq.transpose() * G.exact_mat(j) * Sq));
    GramStack Gc(std::move(conj));
    double a = uniform_equivalence(pullback_family(G, sched), G, sched, 1000.0);
    double b = uniform_equivalence(pullback_family(Gc, sched), Gc, sched, 1000.0);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("tame equivalence decisions") {
  SUBCASE("identical stacks are tame equivalent") {
    GramStack G = quasi_tiling2();
    CHECK(tame_equivalent(G, G).kind == TameEquivalenceKind::TameEquivalent);
  }
  SUBCASE("orthogonalization is fully tame equivalent") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      GramStack G = oracle::random_inner_product_stack(rng, 4, 2);
      GramStack O = orthogonalize(G);
      CHECK(tame_equivalent(G, O).kind == TameEquivalenceKind::TameEquivalent);
    }
  }
  SUBCASE("rank-2 Euclidean vs quasi-tiling-2: same filtration and graded forms, different H_1") {
    auto res = tame_equivalent(rank2_euclidean(), quasi_tiling2());
    CHECK(res.kind == TameEquivalenceKind::OmegaTameEquivalentOnly);
    CHECK(res.what == "ao block");
    CHECK(res.witness_level == 1);
  }
  SUBCASE("different graded forms are inequivalent") {
    MatQ A1 = MatQ::Zero(2, 2), A2 = MatQ::Zero(2, 2);
    A1(0, 0) = 1;
    A2(1, 1) = 2;
    GramStack G(std::vector<MatQ>{A1, A2});
    auto res = tame_equivalent(rank2_euclidean(), G);
    CHECK(res.kind == TameEquivalenceKind::Inequivalent);
    CHECK(res.what == "graded form");
    CHECK(res.witness_level == 2);
  }
  SUBCASE("different filtrations are inequivalent") {
    MatQ A1 = MatQ::Zero(2, 2), A2 = MatQ::Zero(2, 2);
    A1(1, 1) = 1;
    A2(0, 0) = 1;
    GramStack G(std::vector<MatQ>{A1, A2});
    auto res = tame_equivalent(rank2_euclidean(), G);
    CHECK(res.kind == TameEquivalenceKind::Inequivalent);
    CHECK(res.what == "filtration");
  }
  SUBCASE("rank or dimension mismatch is an error") {
    MatQ A(1, 1);
    A << Rational(1);
    CHECK_THROWS_AS(tame_equivalent(rank2_euclidean(), GramStack(std::vector<MatQ>{A})),
                    ValidationError);
  }
  SUBCASE("equivalence relation on a randomized set") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 6; ++trial) {
      GramStack G = oracle::random_inner_product_stack(rng, 3, 2);
      GramStack O = orthogonalize(G);
      GramStack O2 = orthogonalize(O);
      CHECK(tame_equivalent(G, G).kind == TameEquivalenceKind::TameEquivalent);
      CHECK(tame_equivalent(G, O).kind == tame_equivalent(O, G).kind);
      if (tame_equivalent(G, O).kind == TameEquivalenceKind::TameEquivalent &&
          tame_equivalent(O, O2).kind == TameEquivalenceKind::TameEquivalent)
        CHECK(tame_equivalent(G, O2).kind == TameEquivalenceKind::TameEquivalent);
    }
  }
}

TEST_CASE("tame report entries are finite and nonnegative") {
  GramStack G = quasi_tiling2();
  auto sched = ParamSchedule::power({1.0, 0.0}, {1.0, 1.0});
  auto rep = check_tame(pullback_family(G, sched), G, sched, short_grid());
  for (const auto& pt : rep.points) {
    REQUIRE(pt.pd);
    REQUIRE(pt.ratio_min.has_value());
    CHECK(std::isfinite(*pt.ratio_min));
    CHECK(pt.b >= 0);
    CHECK(pt.bprime >= 0);
    CHECK(std::isfinite(pt.bprime));
    CHECK(pt.c >= 0);
  }
}
