#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace loggas {

/// One trace per chain; all chains in a batch have equal length.
using ChainTraces = std::vector<std::vector<double>>;

struct Estimate {
  double value = 0.0;
  double stderr_ = 0.0;
  double ess = 0.0;  // effective sample size; 0 when not meaningful
};

/// Block length used for batch means on a trace of length T: round(sqrt(T)).
std::size_t batch_length(std::size_t trace_length);

/// Non-overlapping batch means of every chain, concatenated in chain order.
/// A partial trailing block is dropped.
std::vector<double> batch_means_of(const ChainTraces& traces);

/// Grand mean with a batch-means standard error and ESS = N s^2 / (L s_b^2),
/// capped at N.
Estimate batch_means(const ChainTraces& traces);

/// g(means of several series) with a jackknife-over-batches standard error.
/// All series must share the chain layout. Used for ratios and variances where
/// numerator and denominator come from the same sweeps.
Estimate jackknife(std::span<const ChainTraces* const> series,
                   const std::function<double(std::span<const double>)>& g);

ChainTraces map_traces(const ChainTraces& traces, const std::function<double(double)>& f);

std::size_t total_length(const ChainTraces& traces);

/// Ordinary least squares fit y = intercept + slope x with R^2.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace loggas
