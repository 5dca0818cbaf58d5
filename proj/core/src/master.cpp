#include "loggas/master.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "loggas/params.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {
namespace {

constexpr double kPi = std::numbers::pi;

void require_p_above_one(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("master equation requires finite p > 1");
}

QuadratureOptions tight() {
  QuadratureOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-14;
  o.max_evaluations = 200'000;
  return o;
}

double binomial(int k, int j) {
  double r = 1.0;
  for (int i = 1; i <= j; ++i) r = r * (k - j + i) / i;
  return r;
}

}  // namespace

double w_p(double p, double u) {
  require_p_above_one(p);
  if (u < -1.0) throw std::invalid_argument("w_p requires u >= -1");
  if (u == -1.0) return p / (p - 1.0);
  const double eps = 1.0 + u;
  // 1 + t u = eps + (1 - t)(1 - eps); for u < 0 the integrand peaks at t = 1
  // with width ~ eps, which the log mapping there resolves.
  auto f = [&](double t) {
    const double base = u < 0.0 ? eps + (1.0 - t) * (1.0 - eps) : 1.0 + t * u;
    return std::pow(base, -p) / std::sqrt(1.0 + base) / std::sqrt(t);
  };
  const EndpointFlags flags{Endpoint::InverseSqrt, u < 0.0 ? Endpoint::Log : Endpoint::Regular};
  return p * std::pow(eps, p - 1.0) * integrate(f, 0.0, 1.0, tight(), flags).value;
}

double zeta_prime(double p, double x) {
  require_p_above_one(p);
  const double ax = std::abs(x);
  if (!(ax > 1.0)) throw std::invalid_argument("zeta_prime requires |x| > 1");
  // v = 1 + t^2 on int_1^|x| v^{-p} / sqrt(v^2 - 1) dv.
  auto f = [p](double t) {
    const double t2 = t * t;
    return 2.0 * std::pow(1.0 + t2, -p) / std::sqrt(2.0 + t2);
  };
  const double value = p * std::pow(ax, p - 1.0) * integrate(f, 0.0, std::sqrt(ax - 1.0), tight()).value;
  return x > 0.0 ? value : -value;
}

double psi(double p, double x) {
  require_p_above_one(p);
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  return -x * std::sqrt(1.0 + ax) / (2.0 * w_p(p, ax - 1.0));
}

double psi_piecewise(double p, double x) {
  require_p_above_one(p);
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  if (ax == 1.0) return psi(p, x);  // both branches are 0/0 at the edge
  if (ax < 1.0) return -x * std::sqrt((1.0 - ax) * (1.0 + ax)) / (2.0 * kPi * equilibrium_density(p, x));
  const double mag = ax * std::sqrt((ax - 1.0) * (ax + 1.0)) / (2.0 * zeta_prime(p, ax));
  return x > 0.0 ? -mag : mag;
}

double v_prime(double p, double x) {
  if (!(p >= 1.0)) throw std::invalid_argument("v_prime requires p >= 1");
  if (x == 0.0) return 0.0;
  const double mag = 2.0 * gamma_p(p) * p * std::pow(std::abs(x), p - 1.0);
  return x > 0.0 ? mag : -mag;
}

MasterSolution::MasterSolution(double p, std::size_t grid_nodes) : measure_(p, grid_nodes) {
  require_p_above_one(p);
}

double MasterSolution::psi_cached(double x) const {
  if (x == 0.0) return 0.0;
  if (std::abs(x) > 1.0 + 1e-3) return psi(x);
  // -x sqrt(1-x^2) / (2 pi f_p) with the sqrt cancelled against the grid factor.
  return -x / (2.0 * kPi * measure_.reduced_density_cached(x));
}

double MasterSolution::psi_derivative(double x, double step) const {
  return (psi_cached(x + step) - psi_cached(x - step)) / (2.0 * step);
}

double MasterSolution::xi_apply(const std::function<double(double)>& phi, double x, double tol) const {
  if (!(std::abs(x) < 1.0)) throw std::invalid_argument("xi_apply requires |x| < 1");
  const double h = kDerivativeStep;
  const double fx = phi(x);
  const double d1 = (phi(x + h) - phi(x - h)) / (2.0 * h);
  const double d2 = (phi(x + h) - 2.0 * fx + phi(x - h)) / (h * h);
  const double r = kTaylorRadius;
  auto integrand = [&](double y) {
    const double dy = y - x;
    const double quotient = std::abs(dy) < r ? d1 + 0.5 * d2 * dy : (fx - phi(y)) / (x - y);
    return quotient * measure_.density_cached(y);
  };
  std::vector<double> breaks;
  if (x - r > -1.0) breaks.push_back(x - r);
  if (x + r < 1.0) breaks.push_back(x + r);
  if (0.0 < x - r || 0.0 > x + r) breaks.push_back(0.0);
  std::sort(breaks.begin(), breaks.end());
  QuadratureOptions o;
  o.abs_tol = tol;
  const double integral = integrate(integrand, -1.0, 1.0, breaks, o, kInverseSqrtBoth).value;
  return -0.5 * v_prime(p(), x) * fx + integral;
}

double MasterSolution::master_residual(double x) const {
  const double xi = xi_apply([this](double y) { return psi_cached(y); }, x);
  return xi - (0.5 * x * x - 0.25);
}

double MasterSolution::limiting_mean(double step) const {
  QuadratureOptions o;
  o.abs_tol = 1e-12;
  // psi_p' is even.
  auto f = [&](double x) { return psi_derivative(x, step) * measure_.density_cached(x); };
  return 2.0 * integrate(f, 0.0, 1.0, o, {Endpoint::Log, Endpoint::InverseSqrt}).value;
}

std::vector<RegularityRow> MasterSolution::regularity_probe(int order, const std::vector<double>& points) const {
  const double p = this->p();
  if (order < 0 || order > static_cast<int>(std::ceil(p)) - 1) {
    throw std::invalid_argument("regularity_probe: order must lie in [0, ceil(p) - 1]");
  }
  std::vector<RegularityRow> rows;
  rows.reserve(points.size());
  for (double x : points) {
    if (!(x > 0.0)) throw std::invalid_argument("regularity_probe: points must be positive");
    RegularityRow row{x, {}};
    // Central k-th difference: sum_j (-1)^j C(k, j) psi(x + (k/2 - j) h) / h^k.
    const double h = x / 8.0;
    for (int k = 0; k <= order; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double sign = j % 2 == 0 ? 1.0 : -1.0;
        acc += sign * binomial(k, j) * psi_piecewise(p, x + (0.5 * k - j) * h);
      }
      row.derivatives.push_back(acc / std::pow(h, k));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace loggas
