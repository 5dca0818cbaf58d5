#include "loggas/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace loggas {

int field_dimension(Field field) {
  switch (field) {
    case Field::Real:
      return 1;
    case Field::Complex:
      return 2;
    case Field::Quaternion:
      return 4;
  }
  throw std::invalid_argument("unknown field");
}

std::string to_string(Field field) {
  switch (field) {
    case Field::Real:
      return "real";
    case Field::Complex:
      return "complex";
    case Field::Quaternion:
      return "quaternion";
  }
  return "?";
}

EnsembleSpec::EnsembleSpec(int a, double b, double c, int n, double p, std::optional<Field> field)
    : a_(a), b_(b), c_(c), n_(n), p_(p), field_(field) {
  if (a != 1 && a != 2) throw std::invalid_argument("a must be 1 or 2");
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  if (!(c >= 0.0)) throw std::invalid_argument("c must be nonnegative");
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must be finite and >= 1");
}

EnsembleSpec EnsembleSpec::table(Field field, bool self_adjoint, int n, double p) {
  const double beta = field_dimension(field);
  if (self_adjoint) return EnsembleSpec(1, beta, 0.0, n, p, field);
  return EnsembleSpec(2, beta, beta - 1.0, n, p, field);
}

EnsembleSpec EnsembleSpec::raw(int a, double b, double c, int n, double p) {
  return EnsembleSpec(a, b, c, n, p, std::nullopt);
}

EnsembleSpec EnsembleSpec::with_n(int n) const { return EnsembleSpec(a_, b_, c_, n, p_, field_); }

std::string EnsembleSpec::label() const {
  std::ostringstream os;
  if (field_) {
    os << to_string(*field_) << (self_adjoint() ? "-selfadjoint" : "-full");
  } else {
    os << "raw(" << a_ << "," << b_ << "," << c_ << ")";
  }
  os << " n=" << n_ << " p=" << p_;
  return os.str();
}

double dimension(int a, double b, double c, int n) {
  const double nn = n;
  return a * b * nn * (nn - 1.0) / 2.0 + (c + 1.0) * nn;
}

double dimension(const EnsembleSpec& spec) { return dimension(spec.a(), spec.b(), spec.c(), spec.n()); }

double log_gamma_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("gamma_p requires p >= 1");
  return std::lgamma(0.5 * p) + 0.5 * std::log(std::numbers::pi) - std::log(2.0) -
         std::lgamma(0.5 * (p + 1.0));
}

double gamma_p(double p) { return std::exp(log_gamma_p(p)); }

double log_unitary_volume(double b, int n) {
  const double nn = n;
  double v = b * nn * (nn + 1.0) / 4.0 * std::log(2.0 * std::numbers::pi) +
             nn * (1.0 - b / 2.0) * std::log(2.0);
  for (int k = 1; k <= n; ++k) v -= std::lgamma(b * k / 2.0);
  return v;
}

double log_c_n(int a, double b, int n) {
  const double nn = n;
  const double log_u1 = log_unitary_volume(b, 1);
  const double log_un = log_unitary_volume(b, n);
  if (a == 1) return log_un - nn * log_u1 - std::lgamma(nn + 1.0);
  if (a == 2) {
    return 2.0 * log_un - nn * log_u1 - std::lgamma(nn + 1.0) -
           b * nn * (nn - 1.0) / 2.0 * std::log(2.0);
  }
  throw std::invalid_argument("a must be 1 or 2");
}

double log_c_n(const EnsembleSpec& spec) { return log_c_n(spec.a(), spec.b(), spec.n()); }

double log_weyl_constant(const EnsembleSpec& spec) {
  const double base = log_c_n(spec);
  return spec.a() == 2 ? base - spec.n() * std::log(2.0) : base;
}

double GammaRatioExpansion::expansion_log() const { return log_leading + std::log1p(correction); }

double GammaRatioExpansion::relative_gap() const { return std::expm1(exact_log_ratio - expansion_log()); }

GammaRatioExpansion gamma_ratio(double d, double r, double p) {
  if (r == 0.0) throw std::invalid_argument("gamma_ratio requires r != 0");
  if (!(d > 0.0)) throw std::invalid_argument("gamma_ratio requires d > 0");
  if (!(p > 0.0)) throw std::invalid_argument("gamma_ratio requires p > 0");
  GammaRatioExpansion g;
  g.exact_log_ratio = -(std::lgamma(1.0 + (d + r) / p) - std::lgamma(1.0 + d / p)) / r;
  g.log_leading = -std::log(d / p) / p;
  g.correction = -(p + r) / (2.0 * p * d);
  return g;
}

double log_moment_gamma_factor(double d, double q, double p) {
  return (std::lgamma(1.0 + d / p) - std::lgamma(1.0 + (d + q) / p)) / q;
}

double log_ratio_gamma_factor(double d, double q, double p) {
  return gamma_ratio(d, q, p).exact_log_ratio - gamma_ratio(d, 2.0, p).exact_log_ratio;
}

}  // namespace loggas
