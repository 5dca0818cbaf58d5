#include "loggas/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "loggas/params.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kStencil = 8;

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("equilibrium measure requires finite p >= 1");
}

QuadratureOptions point_options() {
  QuadratureOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = EquilibriumMeasure::kPointTol;
  o.max_evaluations = 200'000;
  return o;
}

// int_{lower}^1 v^{-p} / sqrt(1 - v^2) dv for 0 < lower < 1. Near 1 the
// substitution v = 1 - t^2 removes the singularity exactly.
double tail_integral(double p, double lower) {
  auto near_one = [p](double t) {
    const double t2 = t * t;
    return 2.0 * std::pow(1.0 - t2, -p) / std::sqrt(2.0 - t2);
  };
  const auto o = point_options();
  if (lower >= 0.5) return integrate(near_one, 0.0, std::sqrt(1.0 - lower), o).value;
  // Below 1/2 the v^{-p} growth is handled on a log scale, v = e^u.
  auto log_scale = [p](double u) {
    const double v = std::exp(u);
    return std::pow(v, 1.0 - p) / std::sqrt((1.0 - v) * (1.0 + v));
  };
  const double lo = integrate(log_scale, std::log(lower), std::log(0.5), o).value;
  const double hi = integrate(near_one, 0.0, std::sqrt(0.5), o).value;
  return lo + hi;
}

}  // namespace

double equilibrium_density(double p, double x) {
  require_p(p);
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  if (ax == 0.0) return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (kPi * (p - 1.0));
  const double top = std::sqrt((1.0 - ax) * (1.0 + ax));
  const double e = 0.5 * p - 1.0;
  const double x2 = ax * ax;
  const auto o = point_options();
  double total = 0.0;
  // s in [0, min(|x|, top)]: s = |x| t keeps the integrand smooth in t.
  const double split = std::min(ax, top);
  total += integrate([&](double t) { return ax * std::pow(x2 + ax * ax * t * t, e); }, 0.0, split / ax, o).value;
  if (split < top) {
    total += integrate(
                 [&](double u) {
                   const double s = std::exp(u);
                   return s * std::pow(x2 + s * s, e);
                 },
                 std::log(split), std::log(top), o)
                 .value;
  }
  return p / kPi * total;
}

double equilibrium_density_defining_form(double p, double x) {
  require_p(p);
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  if (ax == 0.0) return p == 1.0 ? std::numeric_limits<double>::infinity() : p / (kPi * (p - 1.0));
  return p * std::pow(ax, p - 1.0) / kPi * tail_integral(p, ax);
}

double pushforward_density(double p, double y) {
  require_p(p);
  if (y < 0.0 || y > 1.0) throw std::invalid_argument("pushforward_density: y must lie in [0, 1]");
  if (y == 1.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return p * std::pow(y, 0.5 * p - 1.0) / kPi * tail_integral(p, std::sqrt(y));
}

double equilibrium_moment(double p, int k) {
  require_p(p);
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k % 2 == 1) return 0.0;
  const int m = k / 2;
  // binom(2m, m) / 4^m, accumulated as a product to stay in range.
  double arcsine = 1.0;
  for (int j = 1; j <= m; ++j) arcsine *= (2.0 * j - 1.0) / (2.0 * j);
  return arcsine * p / (p + 2.0 * m);
}

double arcsine_variance_integral(double tol) {
  Quadrature2dOptions o;
  o.abs_tol = tol;
  o.x_flags = kInverseSqrtBoth;
  o.y_flags = kInverseSqrtBoth;
  auto f = [](double x, double y) {
    const double s = x + y;
    return s * s * (1.0 - x * y) /
           (kPi * kPi * std::sqrt((1.0 - x) * (1.0 + x)) * std::sqrt((1.0 - y) * (1.0 + y)));
  };
  return integrate2d(f, {-1.0, 1.0, -1.0, 1.0}, o).value;
}

double sigma2_h2(double b) {
  if (!(b > 0.0)) throw std::invalid_argument("sigma2_h2 requires b > 0");
  return arcsine_variance_integral() / (2.0 * b);
}

EquilibriumMeasure::EquilibriumMeasure(double p, std::size_t grid_nodes) : p_(p) {
  require_p(p);
  if (grid_nodes < 2 * kStencil) throw std::invalid_argument("grid needs at least 16 nodes");
  nodes_.resize(grid_nodes);
  smooth_.resize(grid_nodes);
  const double last = static_cast<double>(grid_nodes - 1);
  for (std::size_t k = 0; k < grid_nodes; ++k) {
    const double x = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(k) / last));
    nodes_[k] = x;
    if (k + 1 == grid_nodes) {
      nodes_[k] = 1.0;
      smooth_[k] = p / kPi;  // f_p(x)/sqrt(1-x^2) -> w_p(0)/(pi sqrt 2) = p/pi
    } else {
      smooth_[k] = equilibrium_density(p, x) / std::sqrt((1.0 - x) * (1.0 + x));
    }
  }
  direct_below_ = p < 2.0 ? 6 : 0;
}

double EquilibriumMeasure::density(double x) const { return equilibrium_density(p_, x); }

double EquilibriumMeasure::density_cached(double x) const {
  const double ax = std::abs(x);
  if (ax >= 1.0) return 0.0;
  if (ax < nodes_[direct_below_]) return equilibrium_density(p_, x);
  return std::max(0.0, reduced_density_cached(ax) * std::sqrt((1.0 - ax) * (1.0 + ax)));
}

double EquilibriumMeasure::reduced_density_cached(double x) const {
  const double ax = std::abs(x);
  if (ax < nodes_[direct_below_]) return equilibrium_density(p_, x) / std::sqrt((1.0 - ax) * (1.0 + ax));
  const std::size_t n = nodes_.size();
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), ax);
  const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  const std::size_t first_allowed = direct_below_ > 0 ? 1 : 0;
  std::size_t start = i >= kStencil / 2 ? i - kStencil / 2 : 0;
  start = std::clamp(start, first_allowed, n - kStencil);
  double value = 0.0;
  for (std::size_t j = start; j < start + kStencil; ++j) {
    double basis = 1.0;
    for (std::size_t m = start; m < start + kStencil; ++m) {
      if (m != j) basis *= (ax - nodes_[m]) / (nodes_[j] - nodes_[m]);
    }
    value += basis * smooth_[j];
  }
  return value;
}

double EquilibriumMeasure::cdf(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x == 0.0) return 0.5;
  QuadratureOptions o;
  o.abs_tol = 1e-13;
  const double ax = std::abs(x);
  const double half =
      integrate([this](double t) { return density(t); }, 0.0, ax, o, {Endpoint::Log, Endpoint::Regular}).value;
  return x > 0.0 ? 0.5 + half : 0.5 - half;
}

double EquilibriumMeasure::moment(int k) const { return equilibrium_moment(p_, k); }

double EquilibriumMeasure::moment_quadrature(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k % 2 == 1) return 0.0;
  QuadratureOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-13;
  const auto r = integrate([this, k](double x) { return std::pow(x, k) * density(x); }, 0.0, 1.0, o,
                           {Endpoint::Log, Endpoint::InverseSqrt});
  return 2.0 * r.value;
}

double EquilibriumMeasure::energy(double tol) const { return equilibrium_energy(p_, tol); }

double equilibrium_energy(double p, double tol) {
  require_p(p);
  QuadratureOptions o;
  o.abs_tol = 0.1 * tol;
  const double confinement =
      2.0 * gamma_p(p) * 2.0 *
      integrate([p](double x) { return std::pow(x, p) * equilibrium_density(p, x); }, 0.0, 1.0, o,
                {Endpoint::Log, Endpoint::InverseSqrt})
          .value;

  // f_p is even: iint over [-1,1]^2 = 2 * iint over [0,1] x [-1,1].
  Quadrature2dOptions o2;
  o2.abs_tol = 0.25 * tol;
  o2.x_flags = {Endpoint::Log, Endpoint::InverseSqrt};
  o2.y_flags = kInverseSqrtBoth;
  o2.y_breaks = {0.0};
  o2.diagonal_singular = true;
  // Density values at the outer node are reused across the inner integral.
  double cached_x = std::numeric_limits<double>::quiet_NaN();
  double cached_fx = 0.0;
  auto f = [&](double x, double y) {
    if (x != cached_x) {
      cached_x = x;
      cached_fx = equilibrium_density(p, x);
    }
    return std::log(std::abs(x - y)) * cached_fx * equilibrium_density(p, y);
  };
  const double interaction = 2.0 * integrate2d(f, {0.0, 1.0, -1.0, 1.0}, o2).value;
  return confinement - interaction;
}

std::vector<double> sample_equilibrium(double p, RngStream& stream, std::size_t count) {
  require_p(p);
  std::vector<double> out(count);
  for (auto& x : out) {
    const double a = std::cos(kPi * stream.uniform());
    x = a * std::pow(stream.uniform(), 1.0 / p);
  }
  return out;
}

std::vector<double> EquilibriumMeasure::sample(RngStream& stream, std::size_t count) const {
  return sample_equilibrium(p_, stream, count);
}

double EquilibriumMeasure::pushforward_density(double y) const { return loggas::pushforward_density(p_, y); }

}  // namespace loggas
