#include <cmath>

#include <gtest/gtest.h>

#include "orlicz/interpolation.hpp"

using namespace orlicz;

TEST(ExponentPath, ClarksonExponents) {
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto path = ExponentPath::clarkson(s);
    EXPECT_NEAR(path.r_s(), 2.0 / (2.0 - s), 4 * kEps * path.r_s());
    if (s == 0.0) EXPECT_TRUE(std::isinf(path.t_s()));
    else EXPECT_NEAR(path.t_s(), 2.0 / s, 4 * kEps * path.t_s());
  }
  EXPECT_THROW(ExponentPath(0.5, 2, 2, 2, 0.5), std::invalid_argument);
  EXPECT_THROW(ExponentPath(1, 2, 2, 2, 1.5), std::invalid_argument);
}

TEST(TupleLinearMap, Apply) {
  const OperatorPair t{Matrix::diagonal({1.0, 2.0}), Matrix::diagonal({3.0, 5.0})};
  const auto c = TupleLinearMap::clarkson().apply(t);
  EXPECT_EQ(c.t1, Matrix::diagonal({4.0, 7.0}));
  EXPECT_EQ(c.t2, Matrix::diagonal({-2.0, -3.0}));
  const auto sw = TupleLinearMap::swap().apply(t);
  EXPECT_EQ(sw.t1, t.t2);
  EXPECT_EQ(TupleLinearMap::identity().apply(t).t1, t.t1);
  EXPECT_THROW(TupleLinearMap(1, kInf, 0, 1), std::invalid_argument);
}

TEST(EmpiricalBound, ClarksonEndpoints) {
  const auto phi = power_function(1.5), sq = power_function(2.0);
  // (phi, 1) -> (phi, inf): max(||T1+T2||, ||T1-T2||) <= ||T1|| + ||T2||
  const double k1 = empirical_bound(TupleLinearMap::clarkson(), {phi, phi, 1.0}, {phi, phi, kInf}, 300, 1);
  EXPECT_LE(k1, 1.0 + 1e-12);
  EXPECT_GE(k1, 0.99);
  // (u^2, 2) -> (u^2, 2): the parallelogram law gives sqrt 2 for every tuple
  const double k2 = empirical_bound(TupleLinearMap::clarkson(), {sq, sq, 2.0}, {sq, sq, 2.0}, 50, 1);
  EXPECT_NEAR(k2, std::sqrt(2.0), 1e-12);
  const double swap = empirical_bound(TupleLinearMap::swap(), {phi, phi, 3.0}, {phi, phi, 3.0}, 50, 2);
  EXPECT_NEAR(swap, 1.0, 1e-12);
}

TEST(RieszThorin, ClarksonConfiguration) {
  const auto phi = power_function(1.5), sq = power_function(2.0);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto r = check_riesz_thorin(TupleLinearMap::clarkson(), {phi, phi}, {sq, sq}, ExponentPath::clarkson(s), 1.0,
                                      std::sqrt(2.0), 60, 3);
    EXPECT_TRUE(r.ok()) << s;
    EXPECT_EQ(r.summary().total, 60u);
  }
}

TEST(RieszThorin, IdentityWithUnitConstant) {
  const auto a = power_function(1.2), b = power_function(3.0);
  const auto r = check_riesz_thorin(TupleLinearMap::identity(), {a, b}, {b, a}, ExponentPath(2, 2, 2, 2, 0.4), 1.0, 1.0, 30, 4);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.statistics(r.check_names().front()).min_gap, 1e-9);
}

TEST(ClarksonOrlicz, PassesAndRejectsBadS) {
  Rng rng(5);
  const auto phi = power_function(1.5);
  for (int i = 0; i < 60; ++i) {
    const auto t = sample_pair(rng, 3, i);
    for (double s : {0.25, 0.5, 0.75, 1.0}) EXPECT_TRUE(check_clarkson_orlicz(phi, s, t.t1, t.t2).ok()) << i << " " << s;
  }
  EXPECT_THROW(check_clarkson_orlicz(phi, 0.0, Matrix(2), Matrix(2)), std::invalid_argument);
  EXPECT_THROW(check_clarkson_orlicz(phi, 0.5, Matrix(2), Matrix(3)), std::invalid_argument);
}

TEST(ClarksonOrlicz, ParallelogramAtSOne) {
  // s = 1 gives phi_s = u^2 and the Clarkson bound is the parallelogram law
  Rng rng(6);
  const auto t = sample_pair(rng, 4, 0);
  const auto r = check_clarkson_orlicz(power_function(3.0), 1.0, t.t1, t.t2);
  EXPECT_NEAR(r.records().front().gap, 0.0, 1e-12);
}

TEST(ClarksonOrlicz, StableAgainstTabulatedPhiS) {
  // The same inequality evaluated with phi_s replaced by a fine piecewise-linear
  // tabulation; gaps move by the tabulation error only.
  Rng rng(7);
  const auto phi = power_function(1.5);
  const double s = 0.5;
  const auto phis = intermediate(phi, power_function(2.0), s);
  const auto grid = from_grid(tabulate(phis, GridSpec{1e-6, 1e3, 1 << 14, true}));
  for (int i = 0; i < 20; ++i) {
    const auto t = sample_pair(rng, 3, i);
    auto gap = [&](const OrliczFunction& f) {
      auto n = [&](const Matrix& m) { return luxemburg_norm(f, m).value; };
      const double lhs = p_aggregate(n(t.t1 + t.t2), n(t.t1 - t.t2), 2.0 / s);
      const double rhs = std::exp2(0.5 * s) * p_aggregate(n(t.t1), n(t.t2), 2.0 / (2.0 - s));
      return relative_gap(lhs, rhs);
    };
    EXPECT_NEAR(gap(phis), check_clarkson_orlicz(phi, s, t.t1, t.t2).records().front().gap, 1e-15);
    EXPECT_NEAR(gap(grid), gap(phis), 1e-6) << i;
  }
}

TEST(ClarksonSp, ParallelogramAndBranches) {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const auto t = sample_pair(rng, 5, i);
    const auto r2 = check_clarkson_sp(2.0, t.t1, t.t2);
    EXPECT_EQ(r2.summary().total, 2u);
    for (const auto& rec : r2.records()) EXPECT_LE(std::abs(rec.gap), 1e-9);
    for (double p : {1.5, 3.0, 4.0}) {
      const auto r = check_clarkson_sp(p, t.t1, t.t2);
      EXPECT_TRUE(r.ok());
      EXPECT_EQ(r.summary().total, 1u);
    }
  }
  EXPECT_THROW(check_clarkson_sp(1.0, Matrix(2), Matrix(2)), std::invalid_argument);
  EXPECT_THROW(check_clarkson_sp(kInf, Matrix(2), Matrix(2)), std::invalid_argument);
}

TEST(ClarksonSp, EqualityWhenOneSlotVanishes) {
  // T2 = 0: both sides equal 2^{1/q} ||T1|| for p <= 2
  const Matrix t1{{1, 2}, {0, 3}};
  const auto r = check_clarkson_sp(1.5, t1, Matrix(2));
  EXPECT_NEAR(r.records().front().gap, 0.0, 1e-12);
}
