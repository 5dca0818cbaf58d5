#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace loggas {

/// Behavior of the integrand at an endpoint. Flagged endpoints are removed by
/// a change of variables before the adaptive rule sees them:
///   InverseSqrt: x = end +- u^2        (handles (x - end)^{-1/2} and sqrt kinks)
///   Log:         x = end +- h e^{-t}   (handles log|x - end| and weak powers)
enum class Endpoint { Regular, InverseSqrt, Log };

struct EndpointFlags {
  Endpoint left = Endpoint::Regular;
  Endpoint right = Endpoint::Regular;
};

inline constexpr EndpointFlags kRegularEnds{};
inline constexpr EndpointFlags kInverseSqrtBoth{Endpoint::InverseSqrt, Endpoint::InverseSqrt};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Raised when the evaluation budget runs out before the tolerance is met.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, QuadratureResult best)
      : std::runtime_error(what), best_(best) {}
  const QuadratureResult& best_estimate() const { return best_; }

 private:
  QuadratureResult best_;
};

using Integrand = std::function<double(double)>;
using Integrand2d = std::function<double(double, double)>;

/// One piece of a piecewise integration domain.
struct Segment {
  double a;
  double b;
  EndpointFlags flags{};
};

/// Globally adaptive Gauss-Kronrod (10/21) over a set of segments sharing one
/// error budget. Converges when the summed error estimate is at most
/// max(abs_tol, rel_tol |value|). Deterministic.
QuadratureResult integrate_segments(const Integrand& f, std::span<const Segment> segments,
                                    const QuadratureOptions& options);

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& options,
                           EndpointFlags flags = {});

QuadratureResult integrate(const Integrand& f, double a, double b, double tol, EndpointFlags flags = {});

/// Splits [a, b] at the interior `breaks`; `flags` apply to a and b only.
QuadratureResult integrate(const Integrand& f, double a, double b, std::span<const double> breaks,
                           const QuadratureOptions& options, EndpointFlags flags = {});

struct Rectangle {
  double x0, x1, y0, y1;
};

struct Quadrature2dOptions {
  double abs_tol = 1e-9;
  double rel_tol = 0.0;
  EndpointFlags x_flags{};
  EndpointFlags y_flags{};
  std::vector<double> x_breaks{};
  std::vector<double> y_breaks{};
  /// Integrand has an integrable (log-type) singularity on x = y: the inner
  /// integral is split there with Log flags on both sides.
  bool diagonal_singular = false;
  std::size_t max_evaluations = 50'000'000;
};

/// Iterated adaptive quadrature over a rectangle, inner variable y.
QuadratureResult integrate2d(const Integrand2d& f, const Rectangle& domain, const Quadrature2dOptions& options);

QuadratureResult integrate2d(const Integrand2d& f, const Rectangle& domain, double tol);

/// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(int order, double lo, double hi);

}  // namespace loggas
