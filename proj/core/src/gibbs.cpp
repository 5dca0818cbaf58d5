#include "loggas/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace loggas {

GibbsTarget::GibbsTarget(int a, double b, double c, int n, double p, double coupling)
    : a_(a), b_(b), c_(c), n_(n), p_(p), s_(coupling) {
  if (a != 1 && a != 2) throw std::invalid_argument("GibbsTarget: a must be 1 or 2");
  if (!(b > 0.0) || !std::isfinite(b)) throw std::invalid_argument("GibbsTarget: b must be positive");
  if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("GibbsTarget: c must be nonnegative");
  if (n < 1) throw std::invalid_argument("GibbsTarget: n must be positive");
  if (!(coupling >= 0.0 && coupling <= 1.0)) throw std::invalid_argument("GibbsTarget: coupling must lie in [0, 1]");
  gamma_p_ = loggas::gamma_p(p);
  confinement_ = a * b * n * gamma_p_;
}

GibbsTarget::GibbsTarget(const EnsembleSpec& spec, double coupling)
    : GibbsTarget(spec.a(), spec.b(), spec.c(), spec.n(), spec.p(), coupling) {}

double GibbsTarget::dimension() const { return loggas::dimension(a_, b_, c_, n_); }

double GibbsTarget::effective_dimension() const {
  return s_ * a_ * b_ * n_ * (n_ - 1) / 2.0 + (c_ + 1.0) * n_;
}

GibbsTarget GibbsTarget::with_coupling(double s) const { return GibbsTarget(a_, b_, c_, n_, p_, s); }

GibbsTarget GibbsTarget::with_n(int n) const { return GibbsTarget(a_, b_, c_, n, p_, s_); }

double GibbsTarget::interaction(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("GibbsTarget: configuration has wrong size");
  double acc = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      const double gap = a_ == 1 ? x[i] - x[j] : (x[i] - x[j]) * (x[i] + x[j]);
      acc += std::log(std::abs(gap));
    }
  }
  return b_ * acc;
}

double GibbsTarget::log_density(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("GibbsTarget: configuration has wrong size");
  double value = s_ > 0.0 ? s_ * interaction(x) : 0.0;
  double norm = 0.0;
  for (double xi : x) {
    const double ax = std::abs(xi);
    if (c_ > 0.0) value += c_ * std::log(ax);
    norm += std::pow(ax, p_);
  }
  value -= confinement_ * norm;
  return std::isnan(value) ? -std::numeric_limits<double>::infinity() : value;
}

double log_density_unnormalized(const GibbsTarget& target, std::span<const double> x) {
  return target.log_density(x);
}

double empirical_mean(std::span<const double> x, const std::function<double(double)>& f) {
  double s = 0.0;
  for (double v : x) s += f(v);
  return s / static_cast<double>(x.size());
}

namespace {

bool is_integer(double v) { return v == std::floor(v); }

// Integral over the ordered region lower < x_1 < ... < x_n < R of g(x) times
// the unnormalized density, times the symmetry factor of that region.
QuadratureResult ordered_integral(const GibbsTarget& t, const std::function<double(std::span<const double>)>& g,
                                  double radius, double rel_tol) {
  const int n = t.n();
  if (n > 3) throw std::invalid_argument("nested quadrature supports n <= 3");
  const double lower = t.a() == 1 ? -radius : 0.0;
  double symmetry = std::tgamma(n + 1.0);
  if (t.a() == 2) symmetry *= std::ldexp(1.0, n);
  const Endpoint lower_flag = is_integer(t.b() * t.coupling()) && is_integer(t.c()) ? Endpoint::Regular : Endpoint::Log;

  std::vector<double> x(static_cast<std::size_t>(n));
  std::size_t evaluations = 0;
  double top_error = 0.0;

  std::function<double(int, double)> level = [&](int k, double from) -> double {
    QuadratureOptions o;
    o.abs_tol = 1e-300;
    // Inner levels are tighter so the outer rule sees a smooth integrand.
    o.rel_tol = rel_tol * std::pow(0.1, k);
    o.max_evaluations = 2'000'000;
    auto f = [&](double v) {
      x[static_cast<std::size_t>(k)] = v;
      if (k + 1 == n) {
        ++evaluations;
        const double ld = t.log_density(x);
        return std::isfinite(ld) ? g(x) * std::exp(ld) : 0.0;
      }
      return level(k + 1, v);
    };
    std::vector<double> breaks;
    if (from < 0.0 && radius > 0.0) breaks.push_back(0.0);
    const EndpointFlags flags{k > 0 ? lower_flag : Endpoint::Regular, Endpoint::Regular};
    const auto r = integrate(f, from, radius, breaks, o, flags);
    if (k == 0) top_error = r.error_estimate;
    return r.value;
  };
  const double value = level(0, lower);
  return {symmetry * value, symmetry * top_error, evaluations};
}

double initial_radius(const GibbsTarget& t) {
  // exp(-k R^p) below e^{-50} for a single coordinate.
  return std::max(2.0, std::pow(50.0 / t.confinement(), 1.0 / t.p()));
}

struct StableIntegral {
  QuadratureResult z;
  double radius;
};

StableIntegral stable_partition(const GibbsTarget& t, double rel_tol) {
  auto one = [](std::span<const double>) { return 1.0; };
  double radius = initial_radius(t);
  QuadratureResult prev = ordered_integral(t, one, radius, rel_tol);
  for (int attempt = 0; attempt < 6; ++attempt) {
    radius *= 2.0;
    QuadratureResult next = ordered_integral(t, one, radius, rel_tol);
    if (std::abs(next.value - prev.value) <= 10.0 * rel_tol * std::abs(next.value)) return {next, radius};
    prev = next;
  }
  throw QuadratureError("partition function did not stabilize under domain doubling", prev);
}

}  // namespace

QuadratureResult log_partition_quadrature(const GibbsTarget& target, double rel_tol) {
  const auto s = stable_partition(target, rel_tol);
  return {std::log(s.z.value), s.z.error_estimate / s.z.value, s.z.evaluations};
}

QuadratureResult brute_force_expectation(const GibbsTarget& target, const std::function<double(double)>& f,
                                         double power, double rel_tol) {
  const auto s = stable_partition(target, rel_tol);
  auto g = [&](std::span<const double> x) { return std::pow(empirical_mean(x, f), power); };
  const auto num = ordered_integral(target, g, s.radius, rel_tol);
  const double value = num.value / s.z.value;
  const double err = std::abs(value) * (num.error_estimate / std::abs(num.value) + s.z.error_estimate / s.z.value);
  return {value, err, num.evaluations + s.z.evaluations};
}

std::vector<double> marginal_density_quadrature(const GibbsTarget& target, std::span<const double> points) {
  if (target.n() != 2) throw std::invalid_argument("marginal_density_quadrature requires n = 2");
  const double log_z = log_partition_quadrature(target, 1e-10).value;
  const double radius = 2.0 * initial_radius(target);
  std::vector<double> out;
  out.reserve(points.size());
  QuadratureOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-10;
  for (double x1 : points) {
    auto f = [&](double x2) {
      const double pair[2] = {x1, x2};
      const double ld = target.log_density(pair);
      return std::isfinite(ld) ? std::exp(ld - log_z) : 0.0;
    };
    std::vector<double> breaks{0.0};
    if (std::abs(x1) < radius) {
      breaks.push_back(x1);
      if (target.a() == 2) breaks.push_back(-x1);
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    out.push_back(integrate(f, -radius, radius, breaks, o).value);
  }
  return out;
}

double log_partition_mehta(const GibbsTarget& target) {
  if (target.p() != 2.0 || target.a() != 1 || target.c() != 0.0 || target.coupling() != 1.0) {
    throw std::invalid_argument("Mehta closed form requires p = 2, a = 1, c = 0 at full coupling");
  }
  const double b = target.b();
  const int n = target.n();
  const double d = target.dimension();
  double value = -0.5 * d * std::log(2.0 * b * n) + 0.5 * n * std::log(2.0 * std::numbers::pi);
  for (int j = 1; j <= n; ++j) value += std::lgamma(1.0 + j * b / 2.0) - std::lgamma(1.0 + b / 2.0);
  return value;
}

double log_partition_uncoupled(const GibbsTarget& target) {
  const double e = (target.c() + 1.0) / target.p();
  const double one = std::log(2.0) + std::lgamma(e) - std::log(target.p()) - e * std::log(target.confinement());
  return target.n() * one;
}

double mean_h2_gaussian(const GibbsTarget& target) {
  if (target.p() != 2.0 || target.a() != 1 || target.c() != 0.0) {
    throw std::invalid_argument("mean_h2_gaussian requires p = 2, a = 1, c = 0");
  }
  const double n = target.n();
  return target.effective_dimension() / (2.0 * target.b() * n * n);
}

double mean_hp_exact(const GibbsTarget& target) {
  const double n = target.n();
  return target.effective_dimension() / (target.p() * target.confinement() * n);
}

}  // namespace loggas
