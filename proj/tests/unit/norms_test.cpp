#include <cmath>

#include <gtest/gtest.h>

#include "orlicz/norms.hpp"
#include "orlicz/random.hpp"

using namespace orlicz;

namespace {

OrliczFunction mixed_grid() {
  std::vector<double> u, v;
  for (int i = 0; i <= 600; ++i) {
    const double x = 0.01 * i;
    u.push_back(x);
    v.push_back(x * x * x + 0.5 * x);
  }
  return from_grid(GridFunction(u, v));
}

// Amemiya objective minimized in closed form for u^p, p > 1:
// p (p-1)^{1/p - 1} ||T||_p.
double power_orlicz_norm(double p, const Matrix& t) {
  return p * std::pow(p - 1.0, 1.0 / p - 1.0) * schatten_norm(p, t);
}

}  // namespace

TEST(Luxemburg, Examples) {
  EXPECT_DOUBLE_EQ(luxemburg_norm(power_function(2.0), Matrix::diagonal({3.0, 4.0})).value, 5.0);
  EXPECT_EQ(luxemburg_norm(power_function(2.0), Matrix(3)).value, 0.0);
  EXPECT_NEAR(luxemburg_norm(power_function(1.0), Matrix{{1, 1}, {1, 1}}).value, 2.0, 1e-14);
}

TEST(Luxemburg, MatchesSchatten) {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix t = random_matrix(rng, 1 + rng.below(8));
    for (double p : {1.0, 1.5, 2.0, 3.0, 7.0}) {
      const double want = schatten_norm(p, t);
      EXPECT_NEAR(luxemburg_norm(power_function(p), t).value, want, 1e-12 * std::max(1.0, want));
    }
  }
}

TEST(Luxemburg, ModularConstraintAndTightness) {
  const auto phi = mixed_grid();
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix t = random_matrix(rng, 4);
    const double lam = luxemburg_norm(phi, t).value;
    EXPECT_LE(modular_trace(phi, t, 1.0 / lam), 1.0 + 1e-12);
    EXPECT_GT(modular_trace(phi, t, 1.0 / (lam * (1.0 - 1e-9))), 1.0 - 1e-12);
  }
}

TEST(Luxemburg, NormAxioms) {
  const auto phi = mixed_grid();
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix a = random_matrix(rng, 3), b = random_matrix(rng, 3);
    const double na = luxemburg_norm(phi, a).value, nb = luxemburg_norm(phi, b).value;
    EXPECT_LE(luxemburg_norm(phi, a + b).value, na + nb + 1e-10);
    EXPECT_NEAR(luxemburg_norm(phi, -2.5 * a).value, 2.5 * na, 1e-10 * na);
  }
}

TEST(Schatten, Values) {
  const Matrix t = Matrix::diagonal({3.0, -4.0});
  EXPECT_DOUBLE_EQ(schatten_norm(1.0, t), 7.0);
  EXPECT_DOUBLE_EQ(schatten_norm(2.0, t), 5.0);
  EXPECT_DOUBLE_EQ(schatten_norm(kInf, t), 4.0);
}

TEST(OrliczNorm, PowerClosedForm) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix t = random_matrix(rng, 1 + rng.below(6));
    for (double p : {1.2, 2.0, 3.0}) {
      const double want = power_orlicz_norm(p, t);
      EXPECT_NEAR(orlicz_norm(power_function(p), t).value, want, 1e-9 * want);
    }
  }
}

TEST(OrliczNorm, PowerOneIsTraceNorm) {
  const Matrix t{{1, 2}, {3, 4}};
  EXPECT_NEAR(orlicz_norm(power_function(1.0), t).value, schatten_norm(1.0, t), 1e-12);
}

TEST(OrliczNorm, BetweenLuxemburgAndTwice) {
  Rng rng(6);
  for (const auto& phi : {power_function(1.2), power_function(3.0), mixed_grid()}) {
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix t = random_matrix(rng, 1 + rng.below(6));
      const double lux = luxemburg_norm(phi, t).value, orl = orlicz_norm(phi, t).value;
      EXPECT_LE(lux, orl + 1e-10 * lux);
      EXPECT_LE(orl, 2.0 * lux + 1e-8);
    }
  }
}

TEST(OrliczNorm, DualSearchApproachesAmemiya) {
  Rng rng(7);
  for (const auto& phi : {power_function(1.5), power_function(3.0), mixed_grid()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix t = random_matrix(rng, 3);
      const double amemiya = orlicz_norm(phi, t).value;
      const double dual = orlicz_norm_dual_search(phi, t, 2000, 9);
      EXPECT_LE(dual, amemiya * (1.0 + 1e-7)) << phi.label();
      EXPECT_GE(dual, amemiya * 0.999) << phi.label();
    }
  }
  EXPECT_EQ(orlicz_norm_dual_search(power_function(2.0), Matrix(2), 100, 1), 0.0);
}
