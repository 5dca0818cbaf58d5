#include "loggas/inertia.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace loggas {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_batch(const EnsembleSpec& spec, const SampleBatch& batch) {
  if (batch.a != spec.a() || batch.b != spec.b() || batch.c != spec.c() || batch.n != spec.n() ||
      batch.p != spec.p() || batch.coupling != 1.0) {
    throw std::invalid_argument("batch was not sampled from " + spec.label());
  }
  if (!batch.has_trace(kTraceH2)) throw std::invalid_argument("batch has no h2 trace");
}

double relative_gap(double estimate, double constant) {
  const double diff = std::abs(estimate - constant);
  return constant == 0.0 ? diff : diff / std::abs(constant);
}

InertiaReport make_report(const char* quantity, const EnsembleSpec& spec, double q) {
  InertiaReport r;
  r.quantity = quantity;
  r.spec = spec;
  r.q = q;
  return r;
}

}  // namespace

double theorem1_limit(double p) {
  return std::exp(1.0 / (2.0 * p) - 0.75) * std::sqrt(p / (std::numbers::pi * (p + 2.0)));
}

Theorem2Coefficient theorem2_coefficient(double p, double q) {
  return {(q - 2.0) * (p - 2.0) * (p - 2.0) / (16.0 * p * p), p > 3.0};
}

double variance_ratio_limit(double p) { return (p - 2.0) * (p - 2.0) / (2.0 * p * p); }

double c_n_limit(int a, double b) { return std::exp(0.75) * std::sqrt(4.0 * std::numbers::pi / (a * b)); }

double volume_limit(int a, double b, double p) {
  return std::pow(2.0 * p * gamma_p(p), 1.0 / p) * std::exp(0.75 - 1.0 / (2.0 * p)) *
         std::sqrt(std::numbers::pi / (a * b));
}

double log_iq_normalized(const EnsembleSpec& spec, double q, double log_moment, double log_z) {
  const double d = dimension(spec);
  const double p = spec.p();
  const double n = spec.n();
  const double lg = std::lgamma(1.0 + d / p);
  return -0.5 * std::log(d) + (lg - std::lgamma(1.0 + (d + q) / p)) / q + lg / d -
         log_weyl_constant(spec) / d - log_z / d + 0.5 * std::log(n) + log_moment / q;
}

InertiaReport iq_normalized(const EnsembleSpec& spec, double q, const SampleBatch& batch,
                            const PartitionEstimate& log_z) {
  const auto start = Clock::now();
  check_batch(spec, batch);
  const Estimate m = trace_moment(batch, kTraceH2, q / 2.0);
  auto r = make_report("iq_normalized", spec, q);
  r.estimate = std::exp(log_iq_normalized(spec, q, std::log(m.value), log_z.log_z));
  const double d = dimension(spec);
  r.stderr_ = r.estimate * std::hypot(m.stderr_ / (q * m.value), log_z.error / d);
  r.paper_constant = theorem1_limit(spec.p());
  r.gap = relative_gap(r.estimate, r.paper_constant);
  r.runtime_seconds = seconds_since(start);
  return r;
}

InertiaReport iq_ratio(const EnsembleSpec& spec, double q, const SampleBatch& batch) {
  const auto start = Clock::now();
  check_batch(spec, batch);
  const double d = dimension(spec);
  auto r = make_report("iq_ratio", spec, q);
  r.paper_constant = 1.0 + theorem2_coefficient(spec.p(), q).value / d;
  r.within_hypothesis = theorem2_coefficient(spec.p(), q).within_hypothesis;
  if (q == 2.0) {
    r.estimate = 1.0;
    r.gap = relative_gap(r.estimate, r.paper_constant);
    r.runtime_seconds = seconds_since(start);
    return r;
  }
  const double factor = std::exp(log_ratio_gamma_factor(d, q, spec.p()));
  const ChainTraces& h2 = batch.trace(kTraceH2);
  const ChainTraces hq = map_traces(h2, [q](double v) { return std::pow(v, q / 2.0); });
  const ChainTraces* series[] = {&h2, &hq};
  const Estimate e = jackknife(series, [&](std::span<const double> m) {
    return factor * std::pow(m[1], 1.0 / q) / std::sqrt(m[0]);
  });
  r.estimate = e.value;
  r.stderr_ = e.stderr_;
  r.gap = relative_gap(r.estimate, r.paper_constant);
  r.runtime_seconds = seconds_since(start);
  return r;
}

InertiaReport theorem2_statistic(const EnsembleSpec& spec, double q, const SampleBatch& batch) {
  const auto start = Clock::now();
  const auto ratio = iq_ratio(spec, q, batch);
  const double d = dimension(spec);
  const auto coef = theorem2_coefficient(spec.p(), q);
  auto r = make_report("theorem2_statistic", spec, q);
  r.estimate = d * (ratio.estimate - 1.0);
  r.stderr_ = d * ratio.stderr_;
  r.paper_constant = coef.value;
  r.gap = relative_gap(r.estimate, r.paper_constant);
  r.within_hypothesis = coef.within_hypothesis;
  r.runtime_seconds = seconds_since(start);
  return r;
}

InertiaReport iq_ratio_plugin(const EnsembleSpec& spec, double q, const SampleBatch& batch, double B) {
  const auto start = Clock::now();
  check_batch(spec, batch);
  const double d = dimension(spec);
  const double p = spec.p();
  const double n = spec.n();
  const double center = p / (2.0 * p + 4.0);
  Estimate var_f;
  if (batch.has_trace(truncated_h2_name(B)) || batch.stored_configurations() > 0) {
    var_f = fluctuation_stats(batch, p, B).variance;
  } else {
    const ChainTraces f = map_traces(batch.trace(kTraceH2), [&](double v) { return n * (v - center); });
    const ChainTraces f2 = map_traces(f, [](double v) { return v * v; });
    const ChainTraces* series[] = {&f, &f2};
    var_f = jackknife(series, [](std::span<const double> m) { return m[1] - m[0] * m[0]; });
  }
  const double factor = std::exp(log_ratio_gamma_factor(d, q, p));
  const double k = q * (q - 2.0) / (8.0 * center * center * n * n);
  auto r = make_report("iq_ratio_plugin", spec, q);
  r.estimate = factor * std::pow(1.0 + k * var_f.value, 1.0 / q);
  r.stderr_ = factor * std::pow(1.0 + k * var_f.value, 1.0 / q - 1.0) * k * var_f.stderr_ / q;
  r.paper_constant = 1.0 + theorem2_coefficient(p, q).value / d;
  r.gap = relative_gap(r.estimate, r.paper_constant);
  r.within_hypothesis = theorem2_coefficient(p, q).within_hypothesis;
  r.runtime_seconds = seconds_since(start);
  return r;
}

InertiaReport variance_ratio(const EnsembleSpec& spec, const SampleBatch& batch) {
  const auto start = Clock::now();
  check_batch(spec, batch);
  const double d = dimension(spec);
  const double p = spec.p();
  // E||T||^q carries exp(q * log_moment_gamma_factor(d, q, p)) times n^{q/2} E<L,h_2>^{q/2}.
  const double factor = std::exp(4.0 * log_moment_gamma_factor(d, 4.0, p) - 4.0 * log_moment_gamma_factor(d, 2.0, p));
  const ChainTraces& h2 = batch.trace(kTraceH2);
  const ChainTraces h4 = map_traces(h2, [](double v) { return v * v; });
  const ChainTraces* series[] = {&h2, &h4};
  const Estimate e = jackknife(series, [&](std::span<const double> m) {
    return d * (factor * m[1] / (m[0] * m[0]) - 1.0);
  });
  auto r = make_report("variance_ratio", spec, 2.0);
  r.estimate = e.value;
  r.stderr_ = e.stderr_;
  r.paper_constant = variance_ratio_limit(p);
  r.gap = relative_gap(r.estimate, r.paper_constant);
  r.runtime_seconds = seconds_since(start);
  return r;
}

VolumeReport volume_report(const EnsembleSpec& spec, const PartitionEstimate& log_z, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("volume_report: radius must be positive");
  const double d = dimension(spec);
  const double p = spec.p();
  const double n = spec.n();
  VolumeReport r;
  r.spec = spec;
  r.log_volume = (d / p) * std::log(spec.a() * spec.b() * n * gamma_p(p)) + log_weyl_constant(spec) -
                 std::lgamma(1.0 + d / p) + log_z.log_z + d * std::log(radius);
  r.log_volume_error = log_z.error;
  r.scaled = std::exp((0.5 + 1.0 / p) * std::log(n) + r.log_volume / d);
  r.scaled_error = r.scaled * r.log_volume_error / d;
  r.paper_constant = radius * volume_limit(spec.a(), spec.b(), p);
  r.gap = relative_gap(r.scaled, r.paper_constant);
  return r;
}

}  // namespace loggas
