#pragma once
// Independent reference computations for the tests. Nothing here calls into
// the library's numerical code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using BigInt = boost::multiprecision::cpp_int;

/// Fraction num/den, den > 0, not necessarily reduced.
struct Fraction {
  BigInt num;
  BigInt den;
};

inline bool same_value(const Fraction& x, const BigInt& num, const BigInt& den) {
  return x.num * den == num * x.den;
}

/// Fraction-free (Bareiss) determinant over the integers.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> a) {
  const std::size_t n = a.size();
  BigInt sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

/// Reflection weights by Cramer's rule: rows l = 0..m, columns k = 1..m+1,
/// entries (-k)^l, right-hand side all ones.
inline std::vector<Fraction> cramer_reflection_weights(int m) {
  const auto n = static_cast<std::size_t>(m + 1);
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k) a[l][k] = boost::multiprecision::pow(BigInt(-static_cast<long>(k + 1)), static_cast<unsigned>(l));
  const BigInt det = bareiss_determinant(a);
  std::vector<Fraction> out;
  for (std::size_t k = 0; k < n; ++k) {
    auto ak = a;
    for (std::size_t l = 0; l < n; ++l) ak[l][k] = 1;
    BigInt num = bareiss_determinant(ak);
    BigInt den = det;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    out.push_back({num, den});
  }
  return out;
}

// ---- Gaussian integrals ------------------------------------------------------

/// int_0^inf x^q exp(-p x^2 / 2) dx
inline double half_line_moment(double q, double p) {
  return 0.5 * std::tgamma((q + 1.0) / 2.0) * std::pow(2.0 / p, (q + 1.0) / 2.0);
}

/// ||exp(-x^2/2)||_{L_p(R)}
inline double gaussian_lp_full(double p) { return std::pow(2.0 * std::numbers::pi / p, 1.0 / (2.0 * p)); }

/// ||exp(-x^2/2)||_{L_p(0, inf)}
inline double gaussian_lp_half(double p) { return std::pow(half_line_moment(0.0, p), 1.0 / p); }

/// ||x exp(-x^2/2)||_{L_p(0, inf)}, the first derivative on the half line.
inline double gaussian_d1_lp_half(double p) { return std::pow(half_line_moment(p, p), 1.0 / p); }

// ---- finite differences and brute-force quadrature -----------------------------

/// Second-order central difference of order n (0..4) along one axis.
inline double central_difference(const std::function<double(double)>& f, double x, int n, double h) {
  switch (n) {
    case 0: return f(x);
    case 1: return (f(x + h) - f(x - h)) / (2 * h);
    case 2: return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
    case 3: return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
    default:
      return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (h * h * h * h);
  }
}

/// Tensor-product central difference of D^alpha f at x.
inline double tensor_difference(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x, const std::vector<int>& alpha, double h,
                                std::size_t axis = 0) {
  if (axis == alpha.size()) return f(x);
  const double x0 = x[axis];
  return central_difference(
      [&](double t) {
        x[axis] = t;
        const double v = tensor_difference(f, x, alpha, h, axis + 1);
        x[axis] = x0;
        return v;
      },
      x0, alpha[axis], h);
}

/// Composite Simpson on [a, b] in long double.
inline long double simpson(const std::function<long double(long double)>& f, long double a,
                           long double b, std::size_t intervals) {
  if (intervals % 2) ++intervals;
  const long double h = (b - a) / static_cast<long double>(intervals);
  long double s = f(a) + f(b);
  for (std::size_t i = 1; i < intervals; ++i)
    s += (i % 2 ? 4.0L : 2.0L) * f(a + h * static_cast<long double>(i));
  return s * h / 3.0L;
}

/// Observed convergence order between two errors at h1 > h2.
inline double observed_order(double e1, double e2, double h1, double h2) {
  return std::log(e1 / e2) / std::log(h1 / h2);
}

}  // namespace oracle
