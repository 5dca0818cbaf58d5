#pragma once

#include <cstddef>
#include <vector>

#include "loggas/rng.hpp"

namespace loggas {

/// Equilibrium measure mu_p of the weighted log-energy with potential
/// 2 gamma_p |x|^p: the law of A*B, A arcsine on [-1, 1], B ~ Beta(p, 1).
/// Supported on [-1, 1] with density
///   f_p(x) = p |x|^{p-1} / pi * int_{|x|}^1 v^{-p} / sqrt(1 - v^2) dv.
///
/// Immutable after construction: the interpolation grid is built eagerly, so
/// concurrent reads are safe.
class EquilibriumMeasure {
 public:
  static constexpr std::size_t kDefaultGridNodes = 4096;

  explicit EquilibriumMeasure(double p, std::size_t grid_nodes = kDefaultGridNodes);

  double p() const { return p_; }
  std::size_t grid_nodes() const { return nodes_.size(); }

  /// f_p(x) by adaptive quadrature. +inf at x = 0 when p = 1.
  double density(double x) const;
  /// f_p(x) from the cached Chebyshev-spaced table (local Lagrange
  /// interpolation of f_p(x) / sqrt(1 - x^2)); falls back to density() in
  /// the first few cells next to 0 when p < 2.
  double density_cached(double x) const;
  /// The interpolated smooth factor f_p(x) / sqrt(1 - x^2), which tends to p/pi
  /// at |x| = 1. Slightly past the edge the last stencil is extrapolated, so
  /// difference quotients straddling +-1 stay meaningful.
  double reduced_density_cached(double x) const;

  double cdf(double x) const;
  /// Closed form E[x^k]: binom(2m, m) 4^{-m} p / (p + 2m) for k = 2m, 0 for odd k.
  double moment(int k) const;
  /// int x^k f_p(x) dx by quadrature.
  double moment_quadrature(int k) const;
  /// 2 gamma_p <mu_p, |x|^p> - iint log|x - y| mu_p(dx) mu_p(dy).
  double energy(double tol = 1e-8) const;
  /// i.i.d. draws cos(pi U) V^{1/p}.
  std::vector<double> sample(RngStream& stream, std::size_t count) const;

  /// Density of the image measure under x -> x^2 on [0, 1].
  double pushforward_density(double y) const;

  /// Quadrature tolerance used for pointwise density values.
  static constexpr double kPointTol = 1e-14;

 private:
  double p_;
  std::vector<double> nodes_;
  std::vector<double> smooth_;  // f_p(x) / sqrt(1 - x^2) at nodes_
  std::size_t direct_below_ = 0;
};

/// f_p(x) by quadrature of the smooth form
///   f_p(x) = p / pi * int_0^{sqrt(1-x^2)} (x^2 + s^2)^{p/2 - 1} ds,
/// obtained from the defining integral by the substitution v = |x| / sqrt(x^2 + s^2).
double equilibrium_density(double p, double x);

/// f_p(x) straight from the defining integral, with the v = 1 inverse-square-root
/// endpoint flagged. Slower; used as an independent route.
double equilibrium_density_defining_form(double p, double x);

double equilibrium_moment(double p, int k);

/// i.i.d. draws cos(pi U) V^{1/p} without building a density grid.
std::vector<double> sample_equilibrium(double p, RngStream& stream, std::size_t count);
double equilibrium_energy(double p, double tol = 1e-8);

/// p y^{p/2-1} / pi * int_{sqrt y}^1 u^{-p} / sqrt(1 - u^2) du.
double pushforward_density(double p, double y);

/// Limit variance of n(<L, h2> - <mu_p, h2>) for Dyson index b:
///   1/(2b pi^2) iint (x+y)^2 (1-xy) / (sqrt(1-x^2) sqrt(1-y^2)) dx dy.
double sigma2_h2(double b);

/// The b-free double integral (1/pi^2) iint ..., equal to 1/2.
double arcsine_variance_integral(double tol = 1e-12);

}  // namespace loggas
