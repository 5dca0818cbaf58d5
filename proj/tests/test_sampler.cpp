#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "loggas/equilibrium.hpp"
#include "loggas/gibbs.hpp"
#include "loggas/sampler.hpp"

using namespace loggas;

namespace {

SampleBatch sample(const GibbsTarget& t, std::size_t sweeps, std::uint64_t seed, std::size_t thin = 0,
                   std::vector<Observable> obs = {}, StepPolicy policy = {}) {
  SamplerOptions o;
  o.sweeps = sweeps;
  o.burn_in = sweeps / 10;
  o.seed = seed;
  o.thin = thin;
  o.observables = std::move(obs);
  o.policy = policy;
  return run_chains(t, o);
}

}  // namespace

TEST(Sampler, HpIdentityAllRows) {
  const std::pair<Field, bool> rows[] = {{Field::Real, true},  {Field::Complex, true},  {Field::Quaternion, true},
                                         {Field::Real, false}, {Field::Complex, false}, {Field::Quaternion, false}};
  std::uint64_t seed = 100;
  for (const auto& [field, sa] : rows) {
    const GibbsTarget t(EnsembleSpec::table(field, sa, 6, 3.0));
    const auto b = sample(t, 60'000, seed++);
    const auto e = b.trace_estimate(kTraceHp);
    EXPECT_NEAR(e.value, mean_hp_exact(t), 3.5 * e.stderr_) << to_string(field) << " " << sa;
  }
}

TEST(Sampler, HpIdentityWithoutRadialMove) {
  const GibbsTarget t(1, 1.0, 0.0, 8, 4.0);
  StepPolicy policy;
  policy.radial_move = false;
  const auto b = sample(t, 150'000, 7, 0, {}, policy);
  const auto e = b.trace_estimate(kTraceHp);
  EXPECT_NEAR(e.value, mean_hp_exact(t), 3.5 * e.stderr_);
  EXPECT_GT(b.mean_acceptance(), 0.2);
}

TEST(Sampler, MeanIsCentered) {
  const GibbsTarget t(1, 1.0, 0.0, 10, 4.0);
  const auto e = sample(t, 50'000, 8).trace_estimate(kTraceMean);
  EXPECT_NEAR(e.value, 0.0, 3.5 * e.stderr_);
}

TEST(Sampler, TwoParticleAgainstQuadrature) {
  const GibbsTarget t(1, 1.0, 0.0, 2, 3.0);
  const auto e = sample(t, 400'000, 9).trace_estimate(kTraceH2);
  EXPECT_NEAR(e.value, 0.3764079712817903861997353, 3.5 * e.stderr_);
}

TEST(Sampler, MarginalHistogram) {
  const GibbsTarget t(1, 1.0, 0.0, 2, 3.0);
  const auto b = sample(t, 600'000, 10, 1);
  constexpr int kBins = 100;
  constexpr double lo = -2.5, hi = 2.5, w = (hi - lo) / kBins;
  std::vector<double> hist(kBins, 0.0);
  double count = 0.0;
  b.for_each_configuration([&](std::span<const double> x) {
    const int k = static_cast<int>((x[0] - lo) / w);
    if (k >= 0 && k < kBins) hist[k] += 1.0;
    count += 1.0;
  });
  double tv = 0.0;
  for (int k = 0; k < kBins; ++k) {
    // Bin mass by 3-point Gauss.
    const double c = lo + (k + 0.5) * w, h = 0.5 * w * std::sqrt(0.6);
    const double pts[] = {c - h, c, c + h};
    const auto f = marginal_density_quadrature(t, pts);
    const double mass = w * (5.0 * f[0] + 8.0 * f[1] + 5.0 * f[2]) / 18.0;
    tv += std::abs(hist[k] / count - mass);
  }
  EXPECT_LT(0.5 * tv, 0.01);
}

TEST(Sampler, DeterministicAcrossThreads) {
  const GibbsTarget t(1, 2.0, 0.0, 6, 3.0);
  SamplerOptions o;
  o.sweeps = 4000;
  o.burn_in = 500;
  o.chains = 3;
  o.seed = 21;
  o.thin = 100;
  const auto one = run_chains(t, o);
  o.threads = 3;
  const auto three = run_chains(t, o);
  EXPECT_EQ(one.trace(kTraceH2), three.trace(kTraceH2));
  EXPECT_EQ(one.configurations, three.configurations);
  EXPECT_EQ(one.stream_ids, (std::vector<std::uint64_t>{0, 1, 2}));
  EXPECT_EQ(one.stored_configurations(), 3u * 35u);
}

TEST(Sampler, LinearStatistic) {
  const GibbsTarget t(1, 1.0, 0.0, 4, 4.0);
  const auto b = sample(t, 20'000, 12, 10);
  const auto one = linear_statistic(b, [](double) { return 1.0; }, 1.0);
  EXPECT_EQ(one.value, 1.0);
  EXPECT_EQ(one.stderr_, 0.0);
  const auto hp = linear_statistic(b, [](double x) { return x * x * x * x; }, 1.0);
  EXPECT_NEAR(hp.value, mean_hp_exact(t), 4.0 * hp.stderr_);
}

TEST(Sampler, SecondMomentTrend) {
  const double target = 4.0 / 12.0;
  double prev = INFINITY;
  std::uint64_t seed = 30;
  for (int n : {8, 16, 32}) {
    const auto e = sample(GibbsTarget(1, 1.0, 0.0, n, 4.0), 40'000, seed++).trace_estimate(kTraceH2);
    const double gap = std::abs(e.value - target);
    EXPECT_LT(gap, prev) << n;
    EXPECT_LT(gap * n, 0.5) << n;
    prev = gap;
  }
}

TEST(Sampler, FluctuationVariance) {
  const double B = 1.5;
  for (double b : {1.0, 2.0}) {
    const GibbsTarget t(1, b, 0.0, 16, 4.0);
    const auto batch = sample(t, 200'000, 40 + static_cast<int>(b), 0, {truncated_h2_observable(B)});
    const auto f = fluctuation_stats(batch, 4.0, B);
    EXPECT_NEAR(f.variance.value, 0.25 / b, 0.15 * 0.25 / b) << b;
    EXPECT_GT(f.variance.stderr_, 0.0);
  }
}

TEST(Sampler, RareLargeParticles) {
  const GibbsTarget t(1, 1.0, 0.0, 16, 4.0);
  const auto b = sample(t, 50'000, 50);
  double hits = 0.0, total = 0.0;
  for (const auto& chain : b.trace(kTraceMaxAbs))
    for (double m : chain) {
      hits += m > 1.5;
      total += 1.0;
    }
  EXPECT_LT(hits / total, 1e-3);
}

TEST(Sampler, ExceedanceInsideSupport) {
  const double p = 4.0, B = 0.5;
  const EquilibriumMeasure mu(p);
  const double mass = 1.0 - (mu.cdf(B) - mu.cdf(-B));
  const auto b = sample(GibbsTarget(1, 1.0, 0.0, 32, p), 40'000, 51, 0, {exceedance_observable(B)});
  EXPECT_NEAR(marginal_tail(b, B).value, mass, 0.05 * mass);
}

TEST(Sampler, ConditionalTailMatchesCount) {
  const double B = 1.2;
  for (const auto& t : {GibbsTarget(1, 1.0, 0.0, 4, 4.0), GibbsTarget(2, 2.0, 1.0, 3, 3.0)}) {
    const auto b = sample(t, 400'000, 52, 200, {exceedance_observable(B)});
    const auto direct = marginal_tail(b, B);
    const auto rb = marginal_tail_conditional(b, t, B);
    ASSERT_GT(direct.value, 0.0);
    EXPECT_NEAR(rb.value, direct.value, 4.0 * std::hypot(rb.stderr_, direct.stderr_)) << t.a();
    EXPECT_LT(rb.stderr_, direct.stderr_ * 2.0);
  }
}

TEST(Sampler, ConditionalTailSingleParticle) {
  // One particle, no interaction: the tail of exp(-k |x|^2) beyond B.
  const GibbsTarget t(1, 1.0, 0.0, 1, 2.0);
  const double x[] = {0.0};
  EXPECT_NEAR(conditional_tail(t, x, 0, 1.0), std::erfc(1.0), 1e-9);
}

TEST(Sampler, TruncationGap) {
  const GibbsTarget t(1, 1.0, 0.0, 32, 4.0);
  const auto b = sample(t, 40'000, 53, 20);
  auto h2 = [](double x) { return x * x; };
  auto id = [](double v) { return v; };
  const auto gap = truncation_gap(b, h2, id, 1.5);
  EXPECT_LE(gap.value, 2.0 * gap.stderr_);
  const double B = 1.5;
  const auto inside = truncation_gap(b, [B](double x) { return x * x * truncation_bump(x, B); }, id, B);
  EXPECT_EQ(inside.value, 0.0);
  const auto small = sample(GibbsTarget(1, 1.0, 0.0, 4, 4.0), 100'000, 54, 5);
  EXPECT_LE(truncation_gap(small, h2, id, 1.6).value, truncation_gap(small, h2, id, 1.0).value);
}

TEST(Sampler, TruncationBump) {
  EXPECT_EQ(truncation_bump(1.5, 1.5), 1.0);
  EXPECT_EQ(truncation_bump(-0.3, 1.5), 1.0);
  EXPECT_EQ(truncation_bump(2.5, 1.5), 0.0);
  EXPECT_NEAR(truncation_bump(2.0, 1.5), 0.5, 1e-15);
  EXPECT_EQ(truncation_bump(-2.0, 1.5), truncation_bump(2.0, 1.5));
}

TEST(Sampler, AbortsOnLowAcceptance) {
  StepPolicy policy;
  policy.initial_step = 50.0;
  policy.adapt_interval = 1'000'000;
  policy.radial_move = false;
  policy.min_acceptance = 0.9;
  EXPECT_THROW(sample(GibbsTarget(1, 1.0, 0.0, 8, 4.0), 2000, 1, 0, {}, policy), SamplerError);
}
