#include "loggas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace loggas {

std::size_t batch_length(std::size_t trace_length) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(trace_length)))));
}

std::size_t total_length(const ChainTraces& traces) {
  std::size_t n = 0;
  for (const auto& t : traces) n += t.size();
  return n;
}

std::vector<double> batch_means_of(const ChainTraces& traces) {
  std::vector<double> out;
  for (const auto& t : traces) {
    const std::size_t len = batch_length(t.size());
    for (std::size_t start = 0; start + len <= t.size(); start += len) {
      double s = 0.0;
      for (std::size_t i = start; i < start + len; ++i) s += t[i];
      out.push_back(s / static_cast<double>(len));
    }
  }
  return out;
}

Estimate batch_means(const ChainTraces& traces) {
  const std::size_t n = total_length(traces);
  if (n == 0) throw std::invalid_argument("batch_means: empty trace");
  double sum = 0.0;
  for (const auto& t : traces)
    for (double v : t) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const auto& t : traces)
    for (double v : t) ss += (v - mean) * (v - mean);
  const double sample_var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;

  const auto bm = batch_means_of(traces);
  Estimate e;
  e.value = mean;
  if (bm.size() < 2) {
    e.stderr_ = std::sqrt(sample_var / static_cast<double>(n));
    e.ess = static_cast<double>(n);
    return e;
  }
  double bmean = 0.0;
  for (double v : bm) bmean += v;
  bmean /= static_cast<double>(bm.size());
  double bss = 0.0;
  for (double v : bm) bss += (v - bmean) * (v - bmean);
  const double bvar = bss / static_cast<double>(bm.size() - 1);
  e.stderr_ = std::sqrt(bvar / static_cast<double>(bm.size()));
  const double len = static_cast<double>(batch_length(traces.front().size()));
  e.ess = bvar > 0.0 ? std::min(static_cast<double>(n), static_cast<double>(n) * sample_var / (len * bvar))
                     : static_cast<double>(n);
  return e;
}

Estimate jackknife(std::span<const ChainTraces* const> series,
                   const std::function<double(std::span<const double>)>& g) {
  if (series.empty()) throw std::invalid_argument("jackknife: no series");
  const std::size_t m = series.size();
  std::vector<std::vector<double>> bm(m);
  for (std::size_t s = 0; s < m; ++s) bm[s] = batch_means_of(*series[s]);
  const std::size_t k = bm.front().size();
  for (const auto& b : bm) {
    if (b.size() != k) throw std::invalid_argument("jackknife: series have different layouts");
  }
  // Equal block lengths make the grand mean the mean of batch means.
  std::vector<double> totals(m, 0.0);
  for (std::size_t s = 0; s < m; ++s)
    for (double v : bm[s]) totals[s] += v;
  std::vector<double> means(m);
  for (std::size_t s = 0; s < m; ++s) means[s] = totals[s] / static_cast<double>(k);
  Estimate e;
  e.value = g(means);
  e.ess = batch_means(*series.front()).ess;
  if (k < 2) return e;
  std::vector<double> loo(k);
  std::vector<double> partial(m);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t s = 0; s < m; ++s) partial[s] = (totals[s] - bm[s][j]) / static_cast<double>(k - 1);
    loo[j] = g(partial);
  }
  double lm = 0.0;
  for (double v : loo) lm += v;
  lm /= static_cast<double>(k);
  double ss = 0.0;
  for (double v : loo) ss += (v - lm) * (v - lm);
  e.stderr_ = std::sqrt(ss * static_cast<double>(k - 1) / static_cast<double>(k));
  return e;
}

ChainTraces map_traces(const ChainTraces& traces, const std::function<double(double)>& f) {
  ChainTraces out(traces.size());
  for (std::size_t c = 0; c < traces.size(); ++c) {
    out[c].resize(traces[c].size());
    std::transform(traces[c].begin(), traces[c].end(), out[c].begin(), f);
  }
  return out;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need two or more paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace loggas
