// Acceptance run: one PASS/FAIL line per criterion, with the measured numbers
// and the wall time against its budget. Exits 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "loggas/equilibrium.hpp"
#include "loggas/gibbs.hpp"
#include "loggas/inertia.hpp"
#include "loggas/master.hpp"
#include "loggas/partition.hpp"
#include "loggas/sampler.hpp"
#include "loggas/stats.hpp"

using namespace loggas;

namespace {

constexpr double kPi = std::numbers::pi;
std::uint64_t g_seed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void append(Outcome& o, bool ok, const std::string& s) {
  o.pass = o.pass && ok;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += s;
}

int g_failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < budget_seconds;
  const bool pass = o.pass && in_time;
  if (!pass) ++g_failures;
  std::printf("[%s] %2d %s: %s | %.1fs of %.0fs%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), dt,
              budget_seconds, in_time ? "" : " (over budget)");
  std::fflush(stdout);
}

SampleBatch sample(const GibbsTarget& t, std::size_t sweeps, std::size_t thin = 0, std::vector<Observable> obs = {},
                   StepPolicy policy = {}) {
  SamplerOptions o;
  o.sweeps = sweeps;
  o.burn_in = sweeps / 20;
  o.thin = thin;
  o.seed = g_seed++;
  o.observables = std::move(obs);
  o.policy = policy;
  return run_chains(t, o);
}

PartitionEstimate thermo(const GibbsTarget& t, std::size_t sweeps) {
  ThermoOptions o;
  o.sweeps = sweeps;
  o.burn_in = sweeps / 10;
  o.seed = g_seed++;
  return thermodynamic_integration(t, o);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

std::string list(const std::vector<double>& v, const char* f = "%.4g") {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt(f, x);
  return s;
}

// Shared between criteria 8(iii) and 14.
std::vector<PartitionEstimate> g_thermo_p4;
const int kThermoSizes[] = {4, 8, 16};

// Shared between criteria 9, 11 and 12.
constexpr double kTruncation = 1.5;
std::optional<SampleBatch> g_batch_b1;

const SampleBatch& batch_b1() {
  if (!g_batch_b1)
    g_batch_b1 = sample(GibbsTarget(EnsembleSpec::raw(1, 1.0, 0.0, 32, 4.0)), 1'000'000, 0,
                        {truncated_h2_observable(kTruncation)});
  return *g_batch_b1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_seed = std::strtoull(argv[1], nullptr, 10);
  std::printf("loggas acceptance, seed %llu\n", static_cast<unsigned long long>(g_seed));

  criterion(1, "equilibrium normalization", 10, [] {
    Outcome o;
    double worst = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0, 8.0})
      worst = std::max(worst, std::abs(EquilibriumMeasure(p).moment_quadrature(0) - 1.0));
    append(o, worst < 1e-9, fmt("max |int f_p - 1| = %.2e over p in {1,1.5,2,3,4,8}", worst));
    return o;
  });

  criterion(2, "second moment and semicircle", 10, [] {
    Outcome o;
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0})
      worst = std::max(worst, std::abs(EquilibriumMeasure(p).moment_quadrature(2) - p / (2.0 * p + 4.0)));
    append(o, worst < 1e-8, fmt("max |<mu,h2> - p/(2p+4)| = %.2e", worst));
    double semi = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double x = -1.0 + 2.0 * k / 200.0;
      semi = std::max(semi, std::abs(equilibrium_density(2.0, x) - 2.0 / kPi * std::sqrt(std::max(0.0, 1.0 - x * x))));
    }
    append(o, semi < 1e-8, fmt("semicircle sup error %.2e", semi));
    return o;
  });

  criterion(3, "equilibrium energy", 120, [] {
    Outcome o;
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0})
      worst = std::max(worst, std::abs(equilibrium_energy(p) - (std::log(2.0) + 1.5 / p)));
    append(o, worst < 1e-5, fmt("max |I_p(mu_p) - (log 2 + 3/(2p))| = %.2e", worst));
    return o;
  });

  criterion(4, "arcsine double integral", 60, [] {
    Outcome o;
    const double v = arcsine_variance_integral();
    append(o, std::abs(v - 0.5) < 1e-8, fmt("integral - 1/2 = %.2e", v - 0.5));
    double worst = 0.0;
    for (double b : {1.0, 2.0, 4.0}) worst = std::max(worst, std::abs(sigma2_h2(b) - 0.25 / b));
    append(o, worst < 1e-8, fmt("max |sigma2(b) - 1/(4b)| = %.2e", worst));
    return o;
  });

  criterion(5, "master equation residual", 300, [] {
    Outcome o;
    for (double p : {3.5, 4.0, 6.0}) {
      const MasterSolution ms(p);
      double sup = 0.0;
      for (int k = 0; k <= 40; ++k) sup = std::max(sup, std::abs(ms.master_residual(-0.95 + 1.9 * k / 40.0)));
      append(o, sup < 1e-4, fmt("p=%g sup %.2e", p, sup));
    }
    return o;
  });

  criterion(6, "exact <L,h_p> identity, six ensembles, n=16 p=4", 600, [] {
    Outcome o;
    StepPolicy coordinate_only;
    coordinate_only.radial_move = false;
    for (Field f : {Field::Real, Field::Complex, Field::Quaternion}) {
      for (bool sa : {true, false}) {
        const GibbsTarget t(EnsembleSpec::table(f, sa, 16, 4.0));
        const auto e = sample(t, 1'000'000, 0, {}, coordinate_only).trace_estimate(kTraceHp);
        const double z = (e.value - mean_hp_exact(t)) / e.stderr_;
        append(o, std::abs(z) < 3.0, fmt("a=%d b=%g z=%+.2f", t.a(), t.b(), z));
      }
    }
    return o;
  });

  criterion(7, "n=2 p=3 sampler vs quadrature", 300, [] {
    Outcome o;
    const GibbsTarget t(1, 1.0, 0.0, 2, 3.0);
    const double exact = brute_force_expectation(t, [](double x) { return x * x; }, 1.0).value;
    const auto e = sample(t, 10'000'000).trace_estimate(kTraceH2);
    const double z = (e.value - exact) / e.stderr_, rel = std::abs(e.value / exact - 1.0);
    append(o, std::abs(z) < 3.0 && rel < 1e-3,
           fmt("E<L,h2> %.7f vs %.7f, z=%+.2f, rel %.1e", e.value, exact, z, rel));
    return o;
  });

  criterion(8, "partition function", 1800, [] {
    Outcome o;
    double worst = 0.0;
    for (int n : {2, 3}) {
      const GibbsTarget t(1, 2.0, 0.0, n, 2.0);
      const double mehta = log_partition_mehta(t);
      worst = std::max(worst, std::abs(log_partition_quadrature(t).value / mehta - 1.0));
    }
    append(o, worst < 1e-6, fmt("(i) quadrature vs Mehta rel %.1e", worst));

    const GibbsTarget small(1, 1.0, 0.0, 2, 3.0);
    const double quad = log_partition_quadrature(small).value;
    const auto ti = thermo(small, 8'000'000);
    const double rel = std::abs(ti.log_z / quad - 1.0);
    append(o, rel < 1e-3, fmt("(ii) TI %.6f vs %.6f rel %.1e", ti.log_z, quad, rel));

    const double limit = std::log(2.0) + 1.5 / 4.0;
    std::vector<double> gaps;
    for (int n : kThermoSizes) {
      const GibbsTarget t(EnsembleSpec::table(Field::Real, true, n, 4.0));
      g_thermo_p4.push_back(thermo(t, 100'000));
      gaps.push_back(std::abs(-g_thermo_p4.back().log_z / t.dimension() / limit - 1.0));
    }
    append(o, strictly_decreasing(gaps) && gaps.back() < 0.05,
           fmt("(iii) -log Z/d gaps to log2+3/(2p) at n=4,8,16: %s", list(gaps).c_str()));
    return o;
  });

  criterion(9, "fluctuation variance, n=32 p=4", 3600, [] {
    Outcome o;
    for (double b : {1.0, 2.0}) {
      const GibbsTarget t(EnsembleSpec::raw(1, b, 0.0, 32, 4.0));
      auto batch = sample(t, 1'000'000, 0, {truncated_h2_observable(kTruncation)});
      const auto f = fluctuation_stats(batch, 4.0, kTruncation);
      const double rel = std::abs(f.variance.value * 4.0 * b - 1.0);
      append(o, rel < 0.15 && f.mean.ess >= 1e5,
             fmt("b=%g Var F %.4f +- %.4f vs %.4f (rel %.3f, ESS %.0f)", b, f.variance.value, f.variance.stderr_,
                 0.25 / b, rel, f.mean.ess));
      if (b == 1.0) g_batch_b1 = std::move(batch);
    }
    return o;
  });

  criterion(10, "I_2/sqrt(d) limit, p=4", 3600, [] {
    Outcome o;
    for (Field f : {Field::Real, Field::Complex}) {
      std::vector<double> gaps;
      for (int n : {8, 16, 32}) {
        const auto spec = EnsembleSpec::table(f, true, n, 4.0);
        const GibbsTarget t(spec);
        const auto lz = thermo(t, 100'000);
        gaps.push_back(iq_normalized(spec, 2.0, sample(t, 200'000), lz).gap);
      }
      append(o, strictly_decreasing(gaps) && gaps.back() < 0.05,
             fmt("b=%g gaps at n=8,16,32: %s", f == Field::Real ? 1.0 : 2.0, list(gaps).c_str()));
    }
    append(o, true, fmt("constant %.6f", theorem1_limit(4.0)));
    return o;
  });

  criterion(11, "d(I_4/I_2 - 1), n=32 p=4 b=1", 3600, [] {
    Outcome o;
    const auto spec = EnsembleSpec::raw(1, 1.0, 0.0, 32, 4.0);
    const auto r = theorem2_statistic(spec, 4.0, batch_b1());
    const double rel = std::abs(r.estimate / r.paper_constant - 1.0);
    append(o, rel < 0.25, fmt("%.5f +- %.5f vs 1/32 (rel %.3f)", r.estimate, r.stderr_, rel));
    return o;
  });

  criterion(12, "d Var||T||^2/(E||T||^2)^2, n=32 p=4", 3600, [] {
    Outcome o;
    const auto spec = EnsembleSpec::raw(1, 1.0, 0.0, 32, 4.0);
    const auto r = variance_ratio(spec, batch_b1());
    const double rel = std::abs(r.estimate / r.paper_constant - 1.0);
    append(o, rel < 0.25 && r.estimate < 0.5, fmt("%.5f +- %.5f vs 1/8 (rel %.3f)", r.estimate, r.stderr_, rel));
    return o;
  });

  criterion(13, "rejection oracle vs formula route, n=2 p=3", 900, [] {
    Outcome o;
    const auto spec = EnsembleSpec::table(Field::Real, true, 2, 3.0);
    const GibbsTarget t(spec);
    const double m = brute_force_expectation(t, [](double x) { return x * x; }, 1.0).value;
    const double lz = log_partition_quadrature(t).value;
    const double formula = std::exp(log_iq_normalized(spec, 2.0, std::log(m), lz)) * std::sqrt(dimension(spec));
    RngStream stream(g_seed++, 0);
    const auto r = ball_oracle(2, 3.0, stream, 10'000'000);
    const double rel = std::abs(r.i2 / formula - 1.0);
    append(o, rel < 0.01, fmt("I_2 oracle %.6f +- %.6f vs %.6f (rel %.1e)", r.i2, r.i2_stderr, formula, rel));
    return o;
  });

  criterion(14, "c_n and volume limits", 60, [] {
    Outcome o;
    bool all = true;
    std::string last;
    for (int a : {1, 2}) {
      for (double b : {1.0, 2.0, 4.0}) {
        std::vector<double> gaps;
        for (int n : {8, 32, 128}) {
          const double d = dimension(a, b, a == 1 ? 0.0 : b - 1.0, n);
          gaps.push_back(std::abs(std::sqrt(n) * std::exp(log_c_n(a, b, n) / d) / c_n_limit(a, b) - 1.0));
        }
        all = all && strictly_decreasing(gaps);
        if (a == 1 && b == 1.0) last = list(gaps);
      }
    }
    append(o, all, fmt("c_n gaps decreasing for all six rows (a=1 b=1: %s)", last.c_str()));
    if (g_thermo_p4.size() != std::size(kThermoSizes)) {
      append(o, false, "volume needs criterion 8 log Z");
      return o;
    }
    std::vector<double> gaps;
    for (std::size_t i = 0; i < g_thermo_p4.size(); ++i)
      gaps.push_back(volume_report(EnsembleSpec::table(Field::Real, true, kThermoSizes[i], 4.0), g_thermo_p4[i]).gap);
    append(o, strictly_decreasing(gaps), fmt("volume gaps at n=4,8,16: %s", list(gaps).c_str()));
    return o;
  });

  criterion(15, "tail and truncation", 1200, [] {
    Outcome o;
    constexpr double B = 1.2;
    std::vector<double> ns, tails, logs, direct;
    for (int n : {8, 16, 32}) {
      const GibbsTarget t(EnsembleSpec::table(Field::Real, true, n, 4.0));
      const auto batch = sample(t, 1'000'000, 500, {exceedance_observable(B)});
      const auto rb = marginal_tail_conditional(batch, t, B);
      ns.push_back(n);
      tails.push_back(rb.value);
      logs.push_back(std::log(rb.value));
      direct.push_back(marginal_tail(batch, B).value);
    }
    const auto fit = linear_fit(ns, logs);
    append(o, strictly_decreasing(tails) && fit.r_squared > 0.9,
           fmt("P(|x|>1.2) at n=8,16,32: %s (direct counts %s), log-linear R^2 %.4f", list(tails).c_str(),
               list(direct).c_str(), fit.r_squared));
    const GibbsTarget t(EnsembleSpec::table(Field::Real, true, 32, 4.0));
    const auto batch = sample(t, 1'000'000, 500);
    const auto g = truncation_gap(batch, [](double x) { return x * x; }, [](double v) { return v; }, kTruncation);
    double largest = 0.0;
    for (const auto& chain : batch.trace(kTraceMaxAbs)) largest = std::max(largest, *std::max_element(chain.begin(), chain.end()));
    append(o, g.value <= 2.0 * g.stderr_,
           fmt("truncation gap at B=%.1f, n=32: %.2e +- %.2e (largest |x_i| in the run %.3f)", kTruncation, g.value,
               g.stderr_, largest));
    return o;
  });

  std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
