#pragma once

#include <vector>

namespace sgls {

/// Axis-aligned box [lower_1, upper_1] x ... x [lower_d, upper_d].
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  Box() = default;
  /// Throws E_DIMENSION / E_DOMAIN unless lower_j < upper_j for every axis.
  Box(std::vector<double> lower_corner, std::vector<double> upper_corner);

  static Box cube(int dim, double lo, double hi);

  int dim() const noexcept { return static_cast<int>(lower.size()); }
  double volume() const noexcept;
  bool contains(const std::vector<double>& x) const noexcept;

  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace sgls
