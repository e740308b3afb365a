#include <cmath>

#include <gtest/gtest.h>

#include "orlicz/geometry.hpp"
#include "orlicz/random.hpp"

using namespace orlicz;

namespace {

double cnj_exact(double p) { return std::max(std::exp2(2.0 / p - 1.0), std::exp2(1.0 - 2.0 / p)); }

}  // namespace

TEST(NormEvaluator, AgreesWithGeneralLuxemburg) {
  Rng rng(1);
  const auto fast = NormEvaluator::luxemburg(power_function(3.0));
  for (int i = 0; i < 20; ++i) {
    const Matrix m = random_matrix(rng, 4, i % 2 ? MatrixKind::diagonal : MatrixKind::dense);
    const double want = luxemburg_norm(power_function(3.0), m).value;
    EXPECT_NEAR(fast(m), want, 1e-12 * want);
    EXPECT_NEAR(NormEvaluator::schatten(3.0)(m), want, 1e-12 * want);
  }
}

TEST(NjFunctional, HilbertAndTraceClass) {
  Rng rng(2);
  const auto s2 = NormEvaluator::schatten(2.0);
  for (int i = 0; i < 20; ++i) {
    const Matrix x = random_matrix(rng, 3), y = random_matrix(rng, 3);
    EXPECT_NEAR(nj_functional(s2, x, y), 1.0, 1e-12);
  }
  const auto s1 = NormEvaluator::schatten(1.0);
  EXPECT_NEAR(nj_functional(s1, Matrix::diagonal({1.0, 0.0}), Matrix::diagonal({0.0, 1.0})), 2.0, 1e-15);
  const Matrix x{{1, 0}, {0, 0}};
  EXPECT_NEAR(nj_functional(s1, x, x), 1.0, 1e-15);
  EXPECT_NEAR(nj_functional(s1, x, Matrix(2)), 1.0, 1e-15);
  EXPECT_THROW(nj_functional(s1, Matrix(2), Matrix(2)), std::invalid_argument);
}

TEST(NjFunctional, ScaleAndSymmetryInvariant) {
  Rng rng(3);
  const auto n = NormEvaluator::luxemburg(power_function(1.5));
  for (int i = 0; i < 20; ++i) {
    const Matrix x = random_matrix(rng, 3), y = random_matrix(rng, 3);
    const double v = nj_functional(n, x, y);
    EXPECT_NEAR(nj_functional(n, 3.7 * x, 3.7 * y), v, 1e-12);
    EXPECT_NEAR(nj_functional(n, y, x), v, 1e-12);
    EXPECT_NEAR(nj_functional(n, x, -1.0 * y), v, 1e-12);
    EXPECT_GE(v, 0.5 - 1e-12);
    EXPECT_LE(v, 2.0 + 1e-12);
  }
}

TEST(NonsquareFunctional, Examples) {
  const auto s1 = NormEvaluator::schatten(1.0);
  EXPECT_NEAR(nonsquare_functional(s1, Matrix::diagonal({1.0, 0.0}), Matrix::diagonal({0.0, 1.0})), 2.0, 1e-15);
  const auto s2 = NormEvaluator::schatten(2.0);
  EXPECT_NEAR(nonsquare_functional(s2, Matrix::diagonal({1.0, 0.0}), Matrix::diagonal({0.0, 5.0})), std::sqrt(2.0), 1e-15);
  EXPECT_THROW(nonsquare_functional(s2, Matrix(2), Matrix::identity(2)), std::invalid_argument);
}

TEST(ExtremalPair, AttainsExactConstant) {
  for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 10.0}) {
    const auto [x, y] = extremal_pair(p, 4);
    const auto n = NormEvaluator::luxemburg(power_function(p));
    EXPECT_NEAR(n(x), 1.0, 1e-14);
    EXPECT_NEAR(n(y), 1.0, 1e-14);
    EXPECT_NEAR(nj_functional(n, x, y), cnj_exact(p), 1e-10) << p;
  }
  EXPECT_THROW(extremal_pair(2.0, 1), std::invalid_argument);
}

TEST(EstimateCnj, PowerFunctions) {
  for (double p : {1.0, 2.0, 3.0}) {
    const auto e = estimate_cnj(power_function(p), 3, 3000, 5);
    EXPECT_LE(e.value, cnj_exact(p) + 1e-9) << p;
    EXPECT_GE(e.value, cnj_exact(p) - 2e-2) << p;
    EXPECT_EQ(e.dim, 3u);
    EXPECT_LE(e.trials, 3000);
  }
  EXPECT_NEAR(estimate_cnj(power_function(2.0), 4, 500, 1).value, 1.0, 1e-9);
}

TEST(EstimateCnj, FindsConstantWithoutCanonicalSeeds) {
  const auto e = estimate_cnj(power_function(1.0), 2, 4000, 6, {.canonical = false});
  EXPECT_GE(e.value, 2.0 - 2e-2);
  EXPECT_LE(e.value, 2.0 + 1e-9);
}

TEST(EstimateCnj, WitnessReproducesValue) {
  const auto phi = power_function(1.5);
  const auto e = estimate_cnj(phi, 3, 1000, 7);
  const auto n = NormEvaluator::luxemburg(phi);
  EXPECT_NEAR(nj_functional(n, e.x, e.y), e.value, 1e-12);
  EXPECT_NEAR(n(e.x), 1.0, 1e-12);
  EXPECT_LE(n(e.y), 1.0 + 1e-12);
  const auto again = estimate_cnj(phi, 3, 1000, 7);
  EXPECT_EQ(again.value, e.value);
  EXPECT_EQ(again.x, e.x);
}

TEST(EstimateCnj, MonotoneInBudget) {
  const auto phi = intermediate(power_function(1.5), power_function(2.0), 0.3);
  double prev = 0.0;
  for (int budget : {50, 200, 800, 2000}) {
    const double v = estimate_cnj(phi, 3, budget, 8, {.canonical = false}).value;
    EXPECT_GE(v, prev) << budget;
    prev = v;
  }
}

TEST(EstimateNonsquare, PowerFunctions) {
  EXPECT_NEAR(estimate_nonsquare(power_function(2.0), 3, 2000, 9).value, std::sqrt(2.0), 1e-6);
  const double j1 = estimate_nonsquare(power_function(1.0), 3, 2000, 9).value;
  EXPECT_GE(j1, 2.0 - 2e-2);
  EXPECT_LE(j1, 2.0 + 1e-9);
}

TEST(CheckBounds, PowerPathsPass) {
  // phi_s = u^p along the interpolation path of the exponent pair (alpha, 2)
  struct Case {
    double alpha, s, p;
  };
  for (const auto& c : {Case{1.2, 0.5, 1.5}, Case{4.0, 1.0 / 3.0, 3.0}, Case{1.5, 1.0, 2.0}}) {
    const auto r = check_bounds(power_function(c.alpha), c.s, 3, 3000, 10);
    EXPECT_TRUE(r.report.ok()) << c.p;
    EXPECT_EQ(r.report.summary().skipped, 0u);
    EXPECT_NEAR(r.alpha, std::exp2(-1.0 / c.p), 1e-9);
    EXPECT_NEAR(r.cnj.value, cnj_exact(c.p), 2e-2);
  }
}

TEST(CheckBounds, UncalibratedAndWithoutS) {
  std::vector<double> u{0.0}, v{0.0};
  for (int i = 1; i <= 200; ++i) {
    u.push_back(0.05 * i);
    v.push_back(std::pow(0.05 * i, 1.7) + 0.05 * i);
  }
  const auto r = check_bounds(from_grid(GridFunction(u, v)), 0.5, 2, 500, 11);
  EXPECT_EQ(r.report.statistics("nonsquare.lower").skipped, 1u);
  EXPECT_TRUE(r.report.ok());
  const auto plain = check_bounds(power_function(2.0), std::nullopt, 2, 300, 12);
  EXPECT_EQ(plain.report.statistics("cnj.upper").skipped, 1u);
  EXPECT_THROW(check_bounds(power_function(2.0), 0.0, 2, 10, 1), std::invalid_argument);
}
