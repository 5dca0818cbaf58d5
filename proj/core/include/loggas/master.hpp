#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "loggas/equilibrium.hpp"

namespace loggas {

/// w_p(u) = p (1+u)^{p-1} int_0^1 (1+tu)^{-p} / sqrt(2+tu) dt / sqrt(t), u >= -1.
/// At u = -1 the limit p/(p-1) is returned.
double w_p(double p, double u);

/// zeta'_p(x) = p x^{p-1} int_1^x v^{-p} / sqrt(v^2 - 1) dv for x > 1, odd in x.
double zeta_prime(double p, double x);

/// psi_p(x) = -x sqrt(1+|x|) / (2 w_p(|x| - 1)).
double psi(double p, double x);

/// Two-branch form: -x sqrt(1-x^2) / (2 pi f_p(x)) inside [-1, 1],
/// -|x| sqrt(x^2-1) / (2 zeta'_p(x)) outside.
double psi_piecewise(double p, double x);

/// V'_p(x) = 2 gamma_p p sign(x) |x|^{p-1}.
double v_prime(double p, double x);

struct RegularityRow {
  double x;
  std::vector<double> derivatives;  // orders 0..order
};

/// psi_p together with the master operator
///   Xi_p phi(x) = -V'_p(x) phi(x) / 2 + int (phi(x) - phi(y)) / (x - y) mu_p(dy).
class MasterSolution {
 public:
  static constexpr double kTaylorRadius = 1e-4;
  static constexpr double kDerivativeStep = 1e-5;

  explicit MasterSolution(double p, std::size_t grid_nodes = EquilibriumMeasure::kDefaultGridNodes);

  double p() const { return measure_.p(); }
  const EquilibriumMeasure& measure() const { return measure_; }

  double psi(double x) const { return loggas::psi(p(), x); }
  /// psi_p from the equilibrium grid inside [-1, 1], unified formula outside.
  double psi_cached(double x) const;
  /// Central difference of psi_cached.
  double psi_derivative(double x, double step = kDerivativeStep) const;

  /// Xi_p phi(x) for |x| < 1. The difference quotient is replaced by its
  /// second-order Taylor polynomial on |y - x| < kTaylorRadius.
  double xi_apply(const std::function<double(double)>& phi, double x, double tol = 1e-10) const;
  /// Xi_p psi_p(x) - (x^2/2 - 1/4).
  double master_residual(double x) const;

  /// m_p = <mu_p, psi_p'>.
  double limiting_mean(double step = kDerivativeStep) const;

  /// Finite-difference derivatives of psi_p of orders 0..order at the given
  /// points (x > 0), with step proportional to x.
  std::vector<RegularityRow> regularity_probe(int order, const std::vector<double>& points) const;

 private:
  EquilibriumMeasure measure_;
};

}  // namespace loggas
