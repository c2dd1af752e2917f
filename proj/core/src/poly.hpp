#pragma once

#include <cmath>
#include <vector>

namespace sgls::detail {

/// k-th derivative of sum_i c[i] t^i.
inline double poly_derivative(const std::vector<double>& c, int k, double t) {
  const int n = static_cast<int>(c.size());
  if (k >= n) return 0.0;
  double acc = 0.0;
  for (int i = n - 1; i >= k; --i) {
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= static_cast<double>(i - j);
    acc = acc * t + c[static_cast<std::size_t>(i)] * falling;
  }
  return acc;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

}  // namespace sgls::detail
