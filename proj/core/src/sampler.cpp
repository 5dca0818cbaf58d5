#include "loggas/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include "loggas/equilibrium.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {
namespace {

constexpr double kAdaptCenter = 0.35;

// Coordinate-wise Metropolis on z = x (a = 1) or z = x^2 (a = 2). In z the
// density is prod |z_i - z_j|^{sb} prod |z_i|^{c'} exp(-k sum |z_i|^{p'}) with
// (c', p') = (c, p) for a = 1 and ((c-1)/2, p/2) on z > 0 for a = 2.
class Chain {
 public:
  Chain(const GibbsTarget& t, RngStream& rng, const StepPolicy& policy)
      : t_(t),
        rng_(rng),
        policy_(policy),
        half_line_(t.a() == 2),
        sb_(t.coupling() * t.b()),
        cz_(half_line_ ? (t.c() - 1.0) / 2.0 : t.c()),
        pz_(half_line_ ? t.p() / 2.0 : t.p()),
        k_(t.confinement()),
        n_(static_cast<std::size_t>(t.n())),
        z_(n_),
        x_(n_),
        steps_(n_, policy.initial_step > 0.0 ? policy.initial_step : 1.0 / static_cast<double>(t.n())),
        accepted_(n_, 0),
        proposed_(n_, 0) {
    const auto draws = sample_equilibrium(t.p(), rng_, n_);
    for (std::size_t i = 0; i < n_; ++i) z_[i] = half_line_ ? draws[i] * draws[i] : draws[i];
  }

  void sweep() {
    for (std::size_t i = 0; i < n_; ++i) {
      const double proposal = z_[i] + steps_[i] * rng_.normal();
      const double delta = log_ratio(i, proposal);
      ++proposed_[i];
      if (delta >= 0.0 || std::log(rng_.uniform()) < delta) {
        z_[i] = proposal;
        ++accepted_[i];
      }
    }
    if (policy_.radial_move) radial();
  }

  void adapt() {
    for (std::size_t i = 0; i < n_; ++i) {
      if (proposed_[i] == 0) continue;
      const double rate = static_cast<double>(accepted_[i]) / static_cast<double>(proposed_[i]);
      if (rate < policy_.target_low || rate > policy_.target_high) steps_[i] *= std::exp(2.0 * (rate - kAdaptCenter));
    }
    reset_counts();
  }

  void reset_counts() {
    std::fill(accepted_.begin(), accepted_.end(), 0);
    std::fill(proposed_.begin(), proposed_.end(), 0);
  }

  double acceptance() const {
    std::size_t a = 0, p = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      a += accepted_[i];
      p += proposed_[i];
    }
    return p > 0 ? static_cast<double>(a) / static_cast<double>(p) : 0.0;
  }

  std::span<const double> x() {
    for (std::size_t i = 0; i < n_; ++i) x_[i] = half_line_ ? std::sqrt(z_[i]) : z_[i];
    return x_;
  }

  const std::vector<double>& steps() const { return steps_; }

 private:
  double log_ratio(std::size_t i, double proposal) const {
    const double old = z_[i];
    if (half_line_ && !(proposal > 0.0)) return -std::numeric_limits<double>::infinity();
    double delta = -k_ * (std::pow(std::abs(proposal), pz_) - std::pow(std::abs(old), pz_));
    if (cz_ != 0.0) delta += cz_ * std::log(std::abs(proposal / old));
    if (sb_ > 0.0) {
      // Products of distance ratios in chunks of eight keep the log count low
      // without risking overflow.
      double acc = 0.0;
      double prod = 1.0;
      int pending = 0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (j == i) continue;
        prod *= std::abs(proposal - z_[j]) / std::abs(old - z_[j]);
        if (++pending == 8) {
          acc += std::log(prod);
          prod = 1.0;
          pending = 0;
        }
      }
      acc += std::log(prod);
      delta += sb_ * acc;
    }
    return std::isnan(delta) ? -std::numeric_limits<double>::infinity() : delta;
  }

  // The density is homogeneous in x, so sum |x_i|^p is Gamma(d_eff/p, rate k)
  // independently of the direction; redraw it and rescale.
  void radial() {
    double r = 0.0;
    for (double v : z_) r += std::pow(std::abs(v), pz_);
    if (!(r > 0.0)) return;
    const double fresh = rng_.gamma(t_.effective_dimension() / t_.p()) / k_;
    const double scale = std::pow(fresh / r, 1.0 / pz_);
    for (double& v : z_) v *= scale;
  }

  const GibbsTarget& t_;
  RngStream& rng_;
  StepPolicy policy_;
  bool half_line_;
  double sb_;
  double cz_;
  double pz_;
  double k_;
  std::size_t n_;
  std::vector<double> z_;
  std::vector<double> x_;
  std::vector<double> steps_;
  std::vector<std::size_t> accepted_;
  std::vector<std::size_t> proposed_;
};

void fill_metadata(SampleBatch& batch, const GibbsTarget& t, std::size_t sweeps, std::size_t burn_in,
                   std::size_t thin) {
  batch.a = t.a();
  batch.b = t.b();
  batch.c = t.c();
  batch.n = t.n();
  batch.p = t.p();
  batch.coupling = t.coupling();
  batch.sweeps = sweeps;
  batch.burn_in = burn_in;
  batch.thin = thin;
}

std::string format_b(const char* prefix, double B) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%.17g", prefix, B);
  return buf;
}

}  // namespace

std::size_t SampleBatch::stored_configurations() const {
  std::size_t rows = 0;
  for (const auto& c : configurations) rows += c.size() / static_cast<std::size_t>(n);
  return rows;
}

double SampleBatch::mean_acceptance() const {
  if (acceptance.empty()) return 0.0;
  double s = 0.0;
  for (double a : acceptance) s += a;
  return s / static_cast<double>(acceptance.size());
}

const ChainTraces& SampleBatch::trace(const std::string& name) const {
  const auto it = traces.find(name);
  if (it == traces.end()) throw std::out_of_range("SampleBatch: no trace named '" + name + "'");
  return it->second;
}

Estimate SampleBatch::trace_estimate(const std::string& name) const { return batch_means(trace(name)); }

void SampleBatch::for_each_configuration(const std::function<void(std::span<const double>)>& f) const {
  const auto width = static_cast<std::size_t>(n);
  for (const auto& chain : configurations) {
    for (std::size_t r = 0; r + width <= chain.size(); r += width) f(std::span<const double>(chain).subspan(r, width));
  }
}

ChainTraces SampleBatch::configuration_traces(const std::function<double(std::span<const double>)>& f) const {
  if (stored_configurations() == 0) throw std::logic_error("SampleBatch: no stored configurations");
  const auto width = static_cast<std::size_t>(n);
  ChainTraces out(configurations.size());
  for (std::size_t c = 0; c < configurations.size(); ++c) {
    const auto& chain = configurations[c];
    out[c].reserve(chain.size() / width);
    for (std::size_t r = 0; r + width <= chain.size(); r += width) {
      out[c].push_back(f(std::span<const double>(chain).subspan(r, width)));
    }
  }
  return out;
}

SampleBatch mcmc_sample(const GibbsTarget& target, RngStream& stream, std::size_t sweeps, std::size_t burn_in,
                        const StepPolicy& policy, const std::vector<Observable>& observables, std::size_t thin) {
  if (!(sweeps > burn_in)) throw std::invalid_argument("mcmc_sample: sweeps must exceed burn_in");
  Chain chain(target, stream, policy);
  const std::size_t interval = std::max<std::size_t>(1, policy.adapt_interval);
  for (std::size_t s = 0; s < burn_in; ++s) {
    chain.sweep();
    if ((s + 1) % interval == 0) chain.adapt();
  }
  chain.reset_counts();

  SampleBatch batch;
  fill_metadata(batch, target, sweeps, burn_in, thin);
  batch.seed = stream.seed();
  batch.stream_ids = {stream.stream_id()};
  const std::size_t retained = sweeps - burn_in;
  auto& h2 = batch.traces[kTraceH2].emplace_back();
  auto& hp = batch.traces[kTraceHp].emplace_back();
  auto& mean = batch.traces[kTraceMean].emplace_back();
  auto& max_abs = batch.traces[kTraceMaxAbs].emplace_back();
  std::vector<std::vector<double>*> custom;
  for (const auto& o : observables) {
    auto& t = batch.traces[o.name];
    if (!t.empty()) throw std::invalid_argument("mcmc_sample: duplicate observable '" + o.name + "'");
    custom.push_back(&t.emplace_back());
  }
  for (auto* v : {&h2, &hp, &mean, &max_abs}) v->reserve(retained);
  for (auto* v : custom) v->reserve(retained);
  auto& configs = batch.configurations.emplace_back();
  const double p = target.p();
  const double inv_n = 1.0 / target.n();

  for (std::size_t s = 0; s < retained; ++s) {
    chain.sweep();
    const auto x = chain.x();
    double s2 = 0.0, sp = 0.0, s1 = 0.0, mx = 0.0;
    for (double v : x) {
      const double av = std::abs(v);
      s2 += v * v;
      sp += std::pow(av, p);
      s1 += v;
      mx = std::max(mx, av);
    }
    h2.push_back(s2 * inv_n);
    hp.push_back(sp * inv_n);
    mean.push_back(s1 * inv_n);
    max_abs.push_back(mx);
    for (std::size_t o = 0; o < observables.size(); ++o) custom[o]->push_back(observables[o].evaluate(x));
    if (thin > 0 && s % thin == 0) configs.insert(configs.end(), x.begin(), x.end());
  }
  const double acc = chain.acceptance();
  batch.acceptance = {acc};
  batch.steps = {chain.steps()};
  if (acc < policy.min_acceptance) {
    throw SamplerError("mcmc_sample: acceptance " + std::to_string(acc) + " below the policy minimum");
  }
  return batch;
}

SampleBatch run_chains(const GibbsTarget& target, const SamplerOptions& options) {
  if (options.chains == 0) throw std::invalid_argument("run_chains: need at least one chain");
  std::vector<SampleBatch> results(options.chains);
  std::vector<std::exception_ptr> errors(options.chains);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < options.chains; k = next++) {
      try {
        RngStream stream(options.seed, options.first_stream + k);
        results[k] = mcmc_sample(target, stream, options.sweeps, options.burn_in, options.policy,
                                 options.observables, options.thin);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, options.chains);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  SampleBatch merged;
  fill_metadata(merged, target, options.sweeps, options.burn_in, options.thin);
  merged.seed = options.seed;
  for (auto& r : results) {
    merged.stream_ids.push_back(r.stream_ids.front());
    merged.configurations.push_back(std::move(r.configurations.front()));
    for (auto& [name, t] : r.traces) merged.traces[name].push_back(std::move(t.front()));
    merged.acceptance.push_back(r.acceptance.front());
    merged.steps.push_back(std::move(r.steps.front()));
  }
  return merged;
}

Estimate linear_statistic(const SampleBatch& batch, const std::function<double(double)>& f, double power) {
  if (!(power > 0.0)) throw std::invalid_argument("linear_statistic: power must be positive");
  return batch_means(
      batch.configuration_traces([&](std::span<const double> x) { return std::pow(empirical_mean(x, f), power); }));
}

Estimate trace_moment(const SampleBatch& batch, const std::string& name, double power) {
  return batch_means(map_traces(batch.trace(name), [power](double v) { return std::pow(v, power); }));
}

double truncation_bump(double x, double B) {
  const double t = std::abs(x) - B;
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  const double smooth = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  return 1.0 - smooth;
}

std::string truncated_h2_name(double B) { return format_b("h2phi", B); }
std::string exceedance_name(double B) { return format_b("exceed", B); }

Observable truncated_h2_observable(double B) {
  return {truncated_h2_name(B),
          [B](std::span<const double> x) { return empirical_mean(x, [B](double v) { return v * v * truncation_bump(v, B); }); }};
}

Observable exceedance_observable(double B) {
  return {exceedance_name(B), [B](std::span<const double> x) {
            return empirical_mean(x, [B](double v) { return std::abs(v) > B ? 1.0 : 0.0; });
          }};
}

FluctuationEstimate fluctuation_stats(const SampleBatch& batch, double p, double B) {
  if (!(B >= 1.0)) throw std::invalid_argument("fluctuation_stats: B must be at least 1");
  const double center = p / (2.0 * p + 4.0);
  const double n = batch.n;
  const std::string name = truncated_h2_name(B);
  const ChainTraces truncated =
      batch.has_trace(name)
          ? batch.trace(name)
          : batch.configuration_traces([B](std::span<const double> x) {
              return empirical_mean(x, [B](double v) { return v * v * truncation_bump(v, B); });
            });
  const ChainTraces f = map_traces(truncated, [&](double v) { return n * (v - center); });
  const ChainTraces f2 = map_traces(f, [](double v) { return v * v; });
  FluctuationEstimate out;
  out.n = batch.n;
  out.B = B;
  out.mean = batch_means(f);
  const ChainTraces* series[] = {&f, &f2};
  out.variance = jackknife(series, [](std::span<const double> m) { return m[1] - m[0] * m[0]; });
  out.variance.ess = out.mean.ess;
  return out;
}

Estimate marginal_tail(const SampleBatch& batch, double B) {
  const std::string name = exceedance_name(B);
  if (batch.has_trace(name)) return batch_means(batch.trace(name));
  return batch_means(batch.configuration_traces([B](std::span<const double> x) {
    return empirical_mean(x, [B](double v) { return std::abs(v) > B ? 1.0 : 0.0; });
  }));
}

double conditional_tail(const GibbsTarget& target, std::span<const double> x, int i, double B) {
  const int n = target.n();
  if (static_cast<int>(x.size()) != n || i < 0 || i >= n) throw std::invalid_argument("conditional_tail: bad index");
  if (!(B > 0.0)) throw std::invalid_argument("conditional_tail: B must be positive");
  const double sb = target.coupling() * target.b();
  const double k = target.confinement();
  const double p = target.p();
  const int a = target.a();
  auto log_weight = [&](double v) {
    double acc = target.c() > 0.0 ? target.c() * std::log(std::abs(v)) : 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double gap = a == 1 ? v - x[j] : (v - x[j]) * (v + x[j]);
      acc += sb * std::log(std::abs(gap));
    }
    return acc - k * std::pow(std::abs(v), p);
  };

  double edge = B;
  for (int j = 0; j < n; ++j)
    if (j != i) edge = std::max(edge, std::abs(x[j]));
  // Far enough out that the weight has dropped by e^60 relative to the edge.
  double R = edge + 0.1;
  while (k * (std::pow(R, p) - std::pow(edge, p)) - (sb * (n - 1) * a + target.c()) * std::log1p(2.0 * R) < 60.0) R *= 1.25;

  std::vector<double> breaks{R, B};
  if (a == 1) {
    breaks.push_back(-R);
    breaks.push_back(-B);
  } else {
    breaks.push_back(0.0);
  }
  for (int j = 0; j < n; ++j)
    if (j != i) breaks.push_back(a == 1 ? x[j] : std::abs(x[j]));
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  static const GaussLegendreRule unit = gauss_legendre(8, 0.0, 1.0);
  constexpr double kPiece = 0.1;
  std::vector<double> logs, weights;
  std::vector<char> in_tail;
  for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s], hi = breaks[s + 1];
    const bool tail = std::abs(0.5 * (lo + hi)) > B;
    const int pieces = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPiece)));
    const double h = (hi - lo) / pieces;
    for (int m = 0; m < pieces; ++m) {
      for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
        logs.push_back(log_weight(lo + h * (m + unit.nodes[q])));
        weights.push_back(h * unit.weights[q]);
        in_tail.push_back(tail);
      }
    }
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0, outside = 0.0;
  for (std::size_t q = 0; q < logs.size(); ++q) {
    const double w = weights[q] * std::exp(logs[q] - top);
    total += w;
    if (in_tail[q]) outside += w;
  }
  return outside / total;
}

Estimate marginal_tail_conditional(const SampleBatch& batch, const GibbsTarget& target, double B) {
  if (batch.stored_configurations() == 0) throw std::invalid_argument("marginal_tail_conditional: no stored configurations");
  if (batch.n != target.n() || batch.a != target.a() || batch.p != target.p())
    throw std::invalid_argument("marginal_tail_conditional: batch does not match target");
  return batch_means(batch.configuration_traces([&](std::span<const double> x) {
    double acc = 0.0;
    for (int i = 0; i < target.n(); ++i) acc += conditional_tail(target, x, i, B);
    return acc / target.n();
  }));
}

Estimate truncation_gap(const SampleBatch& batch, const std::function<double(double)>& f,
                        const std::function<double(double)>& g, double B) {
  if (!(B >= 1.0)) throw std::invalid_argument("truncation_gap: B must be at least 1");
  const auto diff = batch.configuration_traces([&](std::span<const double> x) {
    const double plain = empirical_mean(x, f);
    const double cut = empirical_mean(x, [&](double v) { return f(v) * truncation_bump(v, B); });
    return g(plain) - g(cut);
  });
  Estimate e = batch_means(diff);
  e.value = std::abs(e.value);
  return e;
}

}  // namespace loggas
