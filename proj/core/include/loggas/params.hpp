#pragma once

#include <optional>
#include <string>

namespace loggas {

/// Scalar field of the matrix entries; its real dimension is the Dyson index.
enum class Field { Real, Complex, Quaternion };

/// Real dimension of the field: 1, 2 or 4.
int field_dimension(Field field);

std::string to_string(Field field);

/// Matrix ensemble and Schatten exponent, together with the parameters
/// (a, b, c) of the induced Gibbs measure on R^n.
///
/// Self-adjoint spaces give (a, b, c) = (1, beta, 0); full matrix spaces give
/// (a, b, c) = (2, beta, beta - 1), acting on singular values. The raw
/// constructor accepts any a in {1, 2}, b > 0, c >= 0 for the lower-level
/// machinery.
class EnsembleSpec {
 public:
  static EnsembleSpec table(Field field, bool self_adjoint, int n, double p);
  static EnsembleSpec raw(int a, double b, double c, int n, double p);

  int a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  int n() const { return n_; }
  double p() const { return p_; }

  /// Empty for raw specs.
  const std::optional<Field>& field() const { return field_; }
  bool self_adjoint() const { return a_ == 1; }
  bool is_table_row() const { return field_.has_value(); }

  /// Same ensemble, different matrix size.
  EnsembleSpec with_n(int n) const;

  std::string label() const;

 private:
  EnsembleSpec(int a, double b, double c, int n, double p, std::optional<Field> field);

  int a_;
  double b_;
  double c_;
  int n_;
  double p_;
  std::optional<Field> field_;
};

/// d_n = ab n(n-1)/2 + (c+1) n, the real dimension of the matrix space.
double dimension(const EnsembleSpec& spec);
double dimension(int a, double b, double c, int n);

/// log of Gamma(p/2) Gamma(1/2) / (2 Gamma((p+1)/2)). Throws for p < 1.
double log_gamma_p(double p);
double gamma_p(double p);

/// log of the Weyl integration constant c_n built from the unitary-group
/// volumes |U_n(F)| = (2 pi)^{bn(n+1)/4} 2^{n(1-b/2)} / prod_k Gamma(bk/2).
///
/// For a = 2 this is the constant for integration over all of R^n; see
/// log_weyl_constant for the version that matches Lebesgue volume.
double log_c_n(const EnsembleSpec& spec);
double log_c_n(int a, double b, int n);

/// log of the Weyl constant such that
///   int_{B} F(s(T)) dT = exp(log_weyl_constant) int_{R^n} F(x) f_{a,b,c}(x) dx.
/// Equals log_c_n for a = 1. For a = 2 the density is even in every
/// coordinate and the integral over R^n counts each singular-value vector
/// 2^n times, so n log 2 is subtracted.
double log_weyl_constant(const EnsembleSpec& spec);

/// log |U_n(F)| for Dyson index b.
double log_unitary_volume(double b, int n);

/// Exact value and two-term large-d expansion of
///   (Gamma(1 + (d+r)/p) / Gamma(1 + d/p))^{-1/r}
///     = (d/p)^{-1/p} (1 - (p + r) / (2 p d) + o(1/d)).
/// All fields are on log scale except the relative correction.
struct GammaRatioExpansion {
  double exact_log_ratio = 0.0;
  double log_leading = 0.0;
  double correction = 0.0;

  double expansion_log() const;
  /// exact / (two-term expansion) - 1.
  double relative_gap() const;
};

GammaRatioExpansion gamma_ratio(double d, double r, double p);

/// log of Gamma(1+d/p)/Gamma(1+(d+q)/p) raised to 1/q, i.e. the exact
/// finite-d factor multiplying (abn gamma_p)^{1/p} sqrt(n) (E<L,h2>^{q/2})^{1/q}
/// in (E ||T||_HS^q)^{1/q}.
double log_moment_gamma_factor(double d, double q, double p);

/// log of the exact factor relating I_q/I_2 to the ratio of empirical moments:
///   (Gamma(1+(d+q)/p)/Gamma(1+d/p))^{-1/q} (Gamma(1+(d+2)/p)/Gamma(1+d/p))^{1/2}.
/// Approximately log(1 - (q-2)/(2 p d)).
double log_ratio_gamma_factor(double d, double q, double p);

}  // namespace loggas
