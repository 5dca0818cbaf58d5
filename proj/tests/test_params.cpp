#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "loggas/inertia.hpp"
#include "loggas/params.hpp"

using namespace loggas;

TEST(Params, TableRows) {
  const auto rs = EnsembleSpec::table(Field::Real, true, 3, 4.0);
  EXPECT_EQ(rs.a(), 1);
  EXPECT_EQ(rs.b(), 1.0);
  EXPECT_EQ(rs.c(), 0.0);
  const auto cf = EnsembleSpec::table(Field::Complex, false, 2, 4.0);
  EXPECT_EQ(cf.a(), 2);
  EXPECT_EQ(cf.b(), 2.0);
  EXPECT_EQ(cf.c(), 1.0);
  const auto qh = EnsembleSpec::table(Field::Quaternion, true, 2, 4.0);
  EXPECT_EQ(qh.b(), 4.0);
  EXPECT_EQ(qh.with_n(7).n(), 7);
  EXPECT_TRUE(qh.is_table_row());
  EXPECT_FALSE(EnsembleSpec::raw(1, 3.0, 0.0, 2, 2.0).is_table_row());
}

TEST(Params, RejectsInvalid) {
  EXPECT_THROW(EnsembleSpec::raw(3, 1.0, 0.0, 2, 2.0), std::invalid_argument);
  EXPECT_THROW(EnsembleSpec::raw(1, -1.0, 0.0, 2, 2.0), std::invalid_argument);
  EXPECT_THROW(EnsembleSpec::raw(1, 1.0, 0.0, 0, 2.0), std::invalid_argument);
  EXPECT_THROW(log_gamma_p(0.5), std::invalid_argument);
}

TEST(Params, Dimension) {
  EXPECT_EQ(dimension(EnsembleSpec::table(Field::Real, true, 3, 2.0)), 6.0);
  EXPECT_EQ(dimension(EnsembleSpec::table(Field::Real, true, 1, 2.0)), 1.0);
  EXPECT_EQ(dimension(EnsembleSpec::table(Field::Complex, false, 2, 2.0)), 8.0);
  EXPECT_EQ(dimension(EnsembleSpec::table(Field::Quaternion, false, 3, 2.0)), 36.0);
  EXPECT_EQ(dimension(EnsembleSpec::table(Field::Complex, true, 4, 2.0)), 16.0);
}

TEST(Params, GammaP) {
  // mpmath, 30 digits.
  EXPECT_NEAR(gamma_p(2.0), 1.0, 1e-15);
  EXPECT_NEAR(gamma_p(1.0), std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(gamma_p(4.0), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(gamma_p(1.5), 1.19814023473559220743992249228, 1e-14);
  EXPECT_NEAR(gamma_p(3.0), 0.785398163397448309615660845820, 1e-15);
  EXPECT_NEAR(gamma_p(8.0), 0.457142857142857142857142857143, 1e-15);
}

TEST(Params, WeylConstant) {
  EXPECT_NEAR(log_c_n(1, 1.0, 1), 0.0, 1e-15);
  // 2x2 real symmetric: |HS unit ball| = 4 pi / 3 and int_{|x|<=1} |x1 - x2| dx = 4 sqrt 2 / 3.
  EXPECT_NEAR(log_c_n(1, 1.0, 2), std::log(std::numbers::pi / std::numbers::sqrt2), 1e-14);
  const auto full = EnsembleSpec::table(Field::Real, false, 3, 2.0);
  EXPECT_NEAR(log_weyl_constant(full), log_c_n(full) - 3.0 * std::log(2.0), 1e-14);
  const auto sym = EnsembleSpec::table(Field::Complex, true, 3, 2.0);
  EXPECT_EQ(log_weyl_constant(sym), log_c_n(sym));
}

TEST(Params, WeylConstantLimit) {
  for (int a : {1, 2}) {
    for (double b : {1.0, 2.0, 4.0}) {
      double prev = INFINITY;
      for (int n : {8, 32, 128}) {
        const double v = std::sqrt(n) * std::exp(log_c_n(a, b, n) / dimension(a, b, a == 1 ? 0.0 : b - 1.0, n));
        const double gap = std::abs(v / c_n_limit(a, b) - 1.0);
        EXPECT_LT(gap, prev) << "a=" << a << " b=" << b << " n=" << n;
        prev = gap;
      }
      EXPECT_LT(prev, 0.06);
    }
  }
}

TEST(Params, GammaRatioExpansion) {
  // Exact values from mpmath.
  EXPECT_NEAR(gamma_ratio(100.0, 2.0, 4.0).exact_log_ratio, -0.812120436451903633692561843432, 1e-12);
  EXPECT_NEAR(gamma_ratio(528.0, 4.0, 4.0).exact_log_ratio, -1.22258728205543844127859504382, 1e-12);
  EXPECT_NEAR(gamma_ratio(10.0, 3.0, 3.0).exact_log_ratio, -0.488779022931142348219414068214, 1e-12);
  EXPECT_LT(std::abs(gamma_ratio(100.0, 2.0, 4.0).relative_gap()),
            std::abs(gamma_ratio(25.0, 2.0, 4.0).relative_gap()));
  // Second-order error: shrinks roughly 16-fold per 4-fold d.
  for (double p : {1.5, 3.0, 4.0, 8.0}) {
    const double g1 = std::abs(gamma_ratio(200.0, 4.0, p).relative_gap());
    const double g2 = std::abs(gamma_ratio(800.0, 4.0, p).relative_gap());
    EXPECT_LT(g2, g1 / 8.0) << p;
  }
}

TEST(Params, CombinedGammaFactor) {
  for (double d : {3.0, 36.0, 528.0}) EXPECT_EQ(log_ratio_gamma_factor(d, 2.0, 4.0), 0.0);
  // 1 - (q-2)/(2pd) to second order.
  for (double p : {3.0, 4.0, 6.0}) {
    const double d = 2000.0;
    const double exact = std::exp(log_ratio_gamma_factor(d, 4.0, p));
    EXPECT_NEAR(d * (exact - 1.0), -2.0 / (2.0 * p), 5.0 / d) << p;
  }
}
