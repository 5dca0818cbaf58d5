#pragma once

#include <functional>
#include <span>
#include <vector>

#include "loggas/params.hpp"
#include "loggas/quadrature.hpp"

namespace loggas {

/// The Gibbs measure on R^n with density proportional to
///   prod_{i<j} |x_i^a - x_j^a|^{s b} prod_i |x_i|^c exp(-ab n gamma_p sum |x_i|^p).
/// The coupling s in [0, 1] scales the repulsion and is 1 for the measure
/// itself; other values serve thermodynamic integration.
class GibbsTarget {
 public:
  GibbsTarget(int a, double b, double c, int n, double p, double coupling = 1.0);
  explicit GibbsTarget(const EnsembleSpec& spec, double coupling = 1.0);

  int a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  int n() const { return n_; }
  double p() const { return p_; }
  double coupling() const { return s_; }
  double gamma_p() const { return gamma_p_; }
  /// ab n gamma_p, the coefficient of ||x||_p^p.
  double confinement() const { return confinement_; }
  /// d_n at full coupling.
  double dimension() const;
  /// Homogeneity degree of the density plus n: s ab n(n-1)/2 + (c+1) n.
  double effective_dimension() const;

  GibbsTarget with_coupling(double s) const;
  GibbsTarget with_n(int n) const;

  /// log of the unnormalized density; -inf on coincident points.
  double log_density(std::span<const double> x) const;
  /// b sum_{i<j} log|x_i^a - x_j^a| (without the coupling factor).
  double interaction(std::span<const double> x) const;

 private:
  int a_;
  double b_;
  double c_;
  int n_;
  double p_;
  double s_;
  double gamma_p_;
  double confinement_;
};

double log_density_unnormalized(const GibbsTarget& target, std::span<const double> x);

/// (1/n) sum f(x_i).
double empirical_mean(std::span<const double> x, const std::function<double(double)>& f);

/// E[<L, f>^power] by nested adaptive quadrature, n <= 3. The domain [-R, R]^n
/// starts from the tail scale of the confinement and is doubled until the
/// normalizing constant is stable to the requested tolerance.
QuadratureResult brute_force_expectation(const GibbsTarget& target, const std::function<double(double)>& f,
                                         double power, double rel_tol = 1e-10);

/// log Z by the same nested quadrature, n <= 3.
QuadratureResult log_partition_quadrature(const GibbsTarget& target, double rel_tol = 1e-11);

/// Marginal density of x_1 at the given points, n = 2 only, normalized.
std::vector<double> marginal_density_quadrature(const GibbsTarget& target, std::span<const double> points);

/// Closed-form log Z for p = 2, a = 1, c = 0:
///   (2bn)^{-d/2} (2 pi)^{n/2} prod_{j=1}^n Gamma(1 + jb/2) / Gamma(1 + b/2).
double log_partition_mehta(const GibbsTarget& target);

/// log Z at coupling 0, where the density factorizes:
///   n log(2 Gamma((c+1)/p) / (p k^{(c+1)/p})), k = ab n gamma_p.
double log_partition_uncoupled(const GibbsTarget& target);

/// E<L, h_2> at p = 2, a = 1, c = 0: d / (2 b n^2).
double mean_h2_gaussian(const GibbsTarget& target);

/// The exact identity E<L, h_p> = d_n / (ab p n^2 gamma_p), at full coupling.
double mean_hp_exact(const GibbsTarget& target);

}  // namespace loggas
