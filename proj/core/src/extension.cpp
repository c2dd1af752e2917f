#include "sgls/extension.hpp"

#include <array>
#include <cmath>

#include "sgls/errors.hpp"

namespace sgls {

namespace {

Rational power(const Rational& base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::string to_string(const Rational& q) {
  const auto num = boost::multiprecision::numerator(q);
  const auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

std::vector<double> HestenesCoefficients::weights() const {
  std::vector<double> w;
  w.reserve(c.size());
  for (const auto& ck : c) w.push_back(to_double(ck));
  return w;
}

double HestenesCoefficients::constant_value() const { return to_double(constant); }

std::vector<Rational> solve_reflection_system(int m) {
  const auto n = static_cast<std::size_t>(m + 1);
  // Row l: (-1)^l, (-2)^l, ..., (-(m+1))^l | 1
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n + 1));
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k)
      a[l][k] = power(Rational(-static_cast<long long>(k + 1)), static_cast<int>(l));
    a[l][n] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw Error(ErrorCode::inconsistency, "reflection system is singular");
    std::swap(a[pivot], a[col]);
    const Rational inv = 1 / a[col][col];
    for (auto& v : a[col]) v *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col];
      for (std::size_t k = col; k <= n; ++k) a[r][k] -= factor * a[col][k];
    }
  }
  std::vector<Rational> c(n);
  for (std::size_t k = 0; k < n; ++k) c[k] = a[k][n];
  return c;
}

std::vector<Rational> lagrange_reflection_weights(int m) {
  std::vector<Rational> c;
  for (int k = 1; k <= m + 1; ++k) {
    Rational ck = 1;
    for (int j = 1; j <= m + 1; ++j)
      if (j != k) ck *= Rational(1 + j) / Rational(j - k);
    c.push_back(ck);
  }
  return c;
}

Rational reflection_moment(std::span<const Rational> c, int l) {
  Rational s = 0;
  for (std::size_t k = 0; k < c.size(); ++k)
    s += c[k] * power(Rational(-static_cast<long long>(k + 1)), l);
  return s;
}

double reflection_moment(std::span<const double> c, int l) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    s += c[k] * std::pow(-static_cast<double>(k + 1), l);
  return s;
}

HestenesCoefficients hestenes_coefficients(int m) {
  if (m < 0 || m > kMaxCoefficientOrder)
    throw Error(ErrorCode::size, "smoothness order m must be in [0, " +
                                     std::to_string(kMaxCoefficientOrder) + "], got " +
                                     std::to_string(m));
  HestenesCoefficients out;
  out.m = m;
  out.c = solve_reflection_system(m);
  if (out.c != lagrange_reflection_weights(m))
    throw Error(ErrorCode::inconsistency, "elimination and Lagrange weights disagree");
  for (std::size_t k = 0; k < out.c.size(); ++k)
    out.constant += abs(out.c[k]) * power(Rational(static_cast<long long>(k + 1)), m);
  return out;
}

double extension_constant_sharp(const HestenesCoefficients& coeffs, int alpha_d, double p) {
  if (alpha_d < 0 || alpha_d > coeffs.m)
    throw Error(ErrorCode::order, "alpha_d must be in [0, m]");
  if (!(p >= 1.0)) throw Error(ErrorCode::exponent, "p must be >= 1");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.c.size(); ++k)
    s += std::abs(to_double(coeffs.c[k])) * std::pow(static_cast<double>(k + 1), alpha_d - inv_p);
  return s;
}

Rational operator_norm_bound(const HestenesCoefficients& coeffs) { return 1 + coeffs.constant; }

// ---------------------------------------------------------------------------

ExtendedField::ExtendedField(Field base, const HestenesCoefficients& coeffs)
    : ExtendedField(std::move(base), coeffs.m, coeffs.weights()) {}

ExtendedField::ExtendedField(Field base, int m, std::vector<double> weights)
    : base_(std::move(base)), m_(m), weights_(std::move(weights)) {
  if (m_ < 0) throw Error(ErrorCode::order, "extension order must be >= 0");
  if (weights_.size() != static_cast<std::size_t>(m_ + 1))
    throw Error(ErrorCode::dimension, "extension of order m needs m+1 weights");
  if (base_.max_order() < m_)
    throw Error(ErrorCode::order, "base field '" + base_.label() + "' has derivatives only up to order " +
                                      std::to_string(base_.max_order()) + " < m = " +
                                      std::to_string(m_));
}

ExtendedField ExtendedField::with_weights(Field base, int m, std::vector<double> weights) {
  return ExtendedField(std::move(base), m, std::move(weights));
}

double ExtendedField::operator()(Point x) const {
  return derivative(MultiIndex::zero(dim()), x);
}

double ExtendedField::reflected_derivative(const MultiIndex& alpha, Point x) const {
  const auto d = static_cast<std::size_t>(dim());
  if (x.size() != d || alpha.dim() != dim())
    throw Error(ErrorCode::dimension, "point / multi-index dimension differs from the field");
  std::array<double, kMaxDim> y{};
  for (std::size_t j = 0; j + 1 < d; ++j) y[j] = x[j];
  const double xd = x[d - 1];
  const int ad = alpha.normal();
  double s = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double kk = static_cast<double>(k + 1);
    y[d - 1] = -kk * xd;
    const double chain = (ad % 2 ? -1.0 : 1.0) * std::pow(kk, ad);
    s += weights_[k] * chain * base_.derivative(alpha, Point(y.data(), d));
  }
  return s;
}

double ExtendedField::derivative(const MultiIndex& alpha, Point x) const {
  if (alpha.order() > m_)
    throw Error(ErrorCode::order, "extension of order " + std::to_string(m_) +
                                      " has no derivative " + alpha.to_string());
  if (x.size() != static_cast<std::size_t>(dim()))
    throw Error(ErrorCode::dimension, "point dimension differs from the field");
  if (x.back() >= 0.0) return base_.derivative(alpha, x);
  return reflected_derivative(alpha, x);
}

Field ExtendedField::as_field() const {
  std::optional<DecayCertificate> decay;
  if (base_.has_decay_certificate()) {
    Field base = base_;
    decay = DecayCertificate{[base](double tol) { return base.decay_radius(tol); }};
  }
  const ExtendedField self = *this;
  return Field("L[" + base_.label() + "]", dim(), m_,
               [self](const MultiIndex& alpha, Point x) { return self.derivative(alpha, x); },
               decay);
}

ExtendedField extend(const Field& base, const HestenesCoefficients& coeffs) {
  return ExtendedField(base, coeffs);
}

double extended_derivative(const ExtendedField& ext, const MultiIndex& alpha, Point x) {
  return ext.derivative(alpha, x);
}

}  // namespace sgls
