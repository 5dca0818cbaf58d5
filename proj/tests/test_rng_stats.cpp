#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loggas/rng.hpp"
#include "loggas/stats.hpp"

using namespace loggas;

TEST(Rng, Reproducible) {
  RngStream a(42, 3), b(42, 3);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
  RngStream c(42, 4);
  RngStream d(42, 3);
  int same = 0;
  for (int i = 0; i < 1000; ++i) same += c() == d();
  EXPECT_EQ(same, 0);
}

TEST(Rng, UniformMean) {
  RngStream s(1, 0);
  const int N = 1'000'000;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    const double u = s.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / N, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / N));
}

TEST(Rng, StreamsUncorrelated) {
  RngStream s0(9, 0), s1(9, 1);
  const int N = 100'000;
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (int i = 0; i < N; ++i) {
    const double x = s0.uniform(), y = s1.uniform();
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  const double cov = sxy / N - sx * sy / N / N;
  const double corr = cov / std::sqrt((sxx / N - sx * sx / N / N) * (syy / N - sy * sy / N / N));
  EXPECT_LT(std::abs(corr), 0.01);
}

TEST(Rng, NormalAndGammaMoments) {
  RngStream s(5, 0);
  const int N = 400'000;
  double m1 = 0, m2 = 0;
  for (int i = 0; i < N; ++i) {
    const double z = s.normal();
    m1 += z;
    m2 += z * z;
  }
  EXPECT_NEAR(m1 / N, 0.0, 4.0 / std::sqrt(N));
  EXPECT_NEAR(m2 / N, 1.0, 4.0 * std::sqrt(2.0 / N));
  for (double shape : {0.3, 1.0, 7.5}) {
    double g1 = 0, g2 = 0;
    for (int i = 0; i < N; ++i) {
      const double g = s.gamma(shape);
      ASSERT_GT(g, 0.0);
      g1 += g;
      g2 += g * g;
    }
    const double mean = g1 / N;
    EXPECT_NEAR(mean, shape, 4.0 * std::sqrt(shape / N)) << shape;
    EXPECT_NEAR(g2 / N - mean * mean, shape, 0.03 * shape + 4.0 * std::sqrt((6 * shape + 2 * shape * shape) * shape / N))
        << shape;
  }
}

TEST(Stats, BatchMeansOnIid) {
  RngStream s(3, 0);
  ChainTraces t(2, std::vector<double>(40'000));
  for (auto& chain : t)
    for (double& v : chain) v = s.normal();
  const auto e = batch_means(t);
  EXPECT_EQ(batch_length(40'000), 200u);
  EXPECT_NEAR(e.value, 0.0, 4.0 * e.stderr_);
  EXPECT_NEAR(e.stderr_, 1.0 / std::sqrt(80'000.0), 0.25 / std::sqrt(80'000.0));
  EXPECT_GT(e.ess, 40'000.0);
  EXPECT_LE(e.ess, 80'000.0);
}

TEST(Stats, BatchMeansSeesCorrelation) {
  // AR(1) with phi = 0.9: integrated autocorrelation time 19.
  RngStream s(4, 0);
  ChainTraces t(1, std::vector<double>(400'000));
  double x = 0.0;
  for (double& v : t[0]) v = x = 0.9 * x + s.normal();
  const auto e = batch_means(t);
  const double var = 1.0 / (1.0 - 0.81);
  EXPECT_NEAR(e.ess, 400'000.0 / 19.0, 0.25 * 400'000.0 / 19.0);
  EXPECT_NEAR(e.stderr_, std::sqrt(var * 19.0 / 400'000.0), 0.25 * std::sqrt(var * 19.0 / 400'000.0));
}

TEST(Stats, JackknifeRatio) {
  RngStream s(6, 0);
  ChainTraces x(1, std::vector<double>(90'000)), y(1, std::vector<double>(90'000));
  for (std::size_t i = 0; i < x[0].size(); ++i) {
    x[0][i] = 2.0 + s.normal();
    y[0][i] = 2.0 * x[0][i];
  }
  const ChainTraces* series[] = {&x, &y};
  const auto e = jackknife(series, [](std::span<const double> m) { return m[1] / m[0]; });
  EXPECT_NEAR(e.value, 2.0, 1e-12);
  EXPECT_LT(e.stderr_, 1e-12);
  const auto v = jackknife(series, [](std::span<const double> m) { return m[0]; });
  EXPECT_NEAR(v.stderr_, batch_means(x).stderr_, 0.1 * batch_means(x).stderr_);
}

TEST(Stats, LinearFit) {
  const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
  const auto f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
}
