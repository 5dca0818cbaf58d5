#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "loggas/gibbs.hpp"
#include "loggas/rng.hpp"
#include "loggas/stats.hpp"

namespace loggas {

/// Per-sweep scalar recorded for every retained sweep. Receives the
/// configuration in x coordinates (for a = 2 the nonnegative |x_i|).
struct Observable {
  std::string name;
  std::function<double(std::span<const double>)> evaluate;
};

struct StepPolicy {
  /// Initial proposal scale; 0 means 1/n in the sampled coordinates.
  double initial_step = 0.0;
  double target_low = 0.25;
  double target_high = 0.45;
  /// Sweeps between adaptation updates during burn-in.
  std::size_t adapt_interval = 50;
  /// After each coordinate sweep, redraw the l_p radius from its exact
  /// conditional law (a Gamma variable) and rescale the configuration.
  bool radial_move = true;
  /// Post-burn-in acceptance below this aborts the chain.
  double min_acceptance = 0.05;
};

struct SamplerOptions {
  std::size_t sweeps = 10'000;  // including burn-in
  std::size_t burn_in = 1'000;
  std::size_t chains = 1;
  std::size_t threads = 1;
  /// Keep every thin-th retained configuration; 0 keeps none.
  std::size_t thin = 0;
  std::uint64_t seed = 1;
  /// Chain k uses stream first_stream + k.
  std::uint64_t first_stream = 0;
  StepPolicy policy{};
  std::vector<Observable> observables{};
};

/// Raised when a chain's acceptance rate stays below the policy minimum.
class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Always-recorded trace names.
inline constexpr const char* kTraceH2 = "h2";          // <L, h_2>
inline constexpr const char* kTraceHp = "hp";          // <L, h_p>
inline constexpr const char* kTraceMean = "mean";      // <L, x>
inline constexpr const char* kTraceMaxAbs = "max_abs"; // max |x_i|

struct SampleBatch {
  int a = 1;
  double b = 1.0;
  double c = 0.0;
  int n = 1;
  double p = 2.0;
  double coupling = 1.0;

  std::size_t sweeps = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> stream_ids;

  /// Stored configurations per chain, row-major with n entries per row.
  std::vector<std::vector<double>> configurations;
  std::map<std::string, ChainTraces> traces;
  /// Post-burn-in acceptance per chain.
  std::vector<double> acceptance;
  /// Frozen per-coordinate proposal scales per chain.
  std::vector<std::vector<double>> steps;

  std::size_t retained_sweeps() const { return sweeps - burn_in; }
  std::size_t stored_configurations() const;
  double mean_acceptance() const;
  const ChainTraces& trace(const std::string& name) const;
  bool has_trace(const std::string& name) const { return traces.count(name) > 0; }
  /// Batch-means estimate of a recorded trace.
  Estimate trace_estimate(const std::string& name) const;
  /// Calls f(row) for every stored configuration, chain by chain.
  void for_each_configuration(const std::function<void(std::span<const double>)>& f) const;
  ChainTraces configuration_traces(const std::function<double(std::span<const double>)>& f) const;
};

/// One chain of coordinate-wise random-walk Metropolis on `stream`.
SampleBatch mcmc_sample(const GibbsTarget& target, RngStream& stream, std::size_t sweeps, std::size_t burn_in,
                        const StepPolicy& policy = {}, const std::vector<Observable>& observables = {},
                        std::size_t thin = 0);

/// Independent chains on streams first_stream, first_stream + 1, ..., run on up
/// to `threads` threads and merged in chain order.
SampleBatch run_chains(const GibbsTarget& target, const SamplerOptions& options);

/// E[<L, f>^power] over stored configurations with a batch-means stderr.
Estimate linear_statistic(const SampleBatch& batch, const std::function<double(double)>& f, double power = 1.0);

/// E[trace^power] with a batch-means stderr.
Estimate trace_moment(const SampleBatch& batch, const std::string& name, double power);

/// Smooth cutoff: 1 on [-B, B], 0 outside [-B-1, B+1], quintic smoothstep between.
double truncation_bump(double x, double B);

struct FluctuationEstimate {
  int n = 0;
  double B = 0.0;
  Estimate mean;
  Estimate variance;
};

/// Observable <L, h_2 phi_B>, named "h2phi:<B>".
Observable truncated_h2_observable(double B);
/// Observable fraction of coordinates with |x_i| > B, named "exceed:<B>".
Observable exceedance_observable(double B);
std::string truncated_h2_name(double B);
std::string exceedance_name(double B);

/// F = n(<L, h_2 phi_B> - p/(2p+4)); mean and variance with jackknife errors.
/// Uses the recorded "h2phi:<B>" trace if present, stored configurations otherwise.
FluctuationEstimate fluctuation_stats(const SampleBatch& batch, double p, double B);

/// Fraction of (sweep, coordinate) pairs with |x_i| > B.
Estimate marginal_tail(const SampleBatch& batch, double B);

/// The same marginal exceedance, Rao-Blackwellized: the average over stored
/// configurations and coordinates of P(|x_i| > B | x_j, j != i), each computed
/// by 1-D quadrature of the conditional density. Stays informative where
/// direct counting sees no hits.
Estimate marginal_tail_conditional(const SampleBatch& batch, const GibbsTarget& target, double B);

/// P(|x_i| > B | the other coordinates) under `target`.
double conditional_tail(const GibbsTarget& target, std::span<const double> x, int i, double B);

/// |E g(<L, f>) - E g(<L, f phi_B>)| over stored configurations; the stderr is
/// that of the paired difference.
Estimate truncation_gap(const SampleBatch& batch, const std::function<double(double)>& f,
                        const std::function<double(double)>& g, double B);

}  // namespace loggas
