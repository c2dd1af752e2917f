#pragma once

#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sgls/field.hpp"

namespace sgls {

using Rational = boost::multiprecision::cpp_rational;

/// Policy cap on the smoothness order m; exact arithmetic itself has no limit.
inline constexpr int kMaxCoefficientOrder = 12;

/// Reflection weights c_1..c_{m+1} with sum_k (-k)^l c_k = 1 for l = 0..m,
/// and C(m) = sum_k |c_k| k^m.
struct HestenesCoefficients {
  int m = 0;
  std::vector<Rational> c;
  Rational constant;

  std::vector<double> weights() const;
  double constant_value() const;
};

/// Exact solve of the (m+1)x(m+1) reflection system, cross-checked against
/// c_k = prod_{j != k} (1 + j) / (j - k). Throws E_SIZE for m outside [0, 12].
HestenesCoefficients hestenes_coefficients(int m);

/// Fraction-preserving Gauss-Jordan elimination of the reflection system.
std::vector<Rational> solve_reflection_system(int m);

/// Lagrange closed form of the same weights.
std::vector<Rational> lagrange_reflection_weights(int m);

/// sum_k c_k (-k)^l.
Rational reflection_moment(std::span<const Rational> c, int l);
double reflection_moment(std::span<const double> c, int l);

/// sum_k |c_k| k^(alpha_d - 1/p); p may be +inf.
double extension_constant_sharp(const HestenesCoefficients& coeffs, int alpha_d, double p);

/// 1 + C(m), the guaranteed bound on the extension operator norm.
Rational operator_norm_bound(const HestenesCoefficients& coeffs);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// Lf = f on {x_d >= 0}, Lf(x~, x_d) = sum_k c_k f(x~, -k x_d) for x_d < 0.
///
/// Immutable; evaluation is pure and thread safe. The boundary x_d = 0 is
/// assigned to the upper side.
class ExtendedField {
 public:
  ExtendedField(Field base, const HestenesCoefficients& coeffs);

  /// Extension with arbitrary floating weights (fault injection and experiments).
  static ExtendedField with_weights(Field base, int m, std::vector<double> weights);

  const Field& base() const noexcept { return base_; }
  int dim() const noexcept { return base_.dim(); }
  int order() const noexcept { return m_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double operator()(Point x) const;
  /// D^alpha Lf(x); E_ORDER for |alpha| > m.
  double derivative(const MultiIndex& alpha, Point x) const;
  /// The x_d < 0 formula sum_k c_k (-k)^alpha_d D^alpha f(x~, -k x_d), applied at any x.
  double reflected_derivative(const MultiIndex& alpha, Point x) const;

  /// Lf as a Field of order m. Its decay certificate is the base's.
  Field as_field() const;

 private:
  ExtendedField(Field base, int m, std::vector<double> weights);

  Field base_;
  int m_;
  std::vector<double> weights_;
};

ExtendedField extend(const Field& base, const HestenesCoefficients& coeffs);

double extended_derivative(const ExtendedField& ext, const MultiIndex& alpha, Point x);

}  // namespace sgls
