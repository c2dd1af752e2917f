#pragma once

#include <compare>
#include <string>
#include <vector>

namespace sgls {

/// alpha = (alpha_1, ..., alpha_d), alpha_j >= 0. The last component is the
/// normal (x_d) order.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  MultiIndex(std::initializer_list<int> components);

  static MultiIndex zero(int dim);
  /// order-th derivative along a single axis.
  static MultiIndex axis(int dim, int axis, int order = 1);

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  int order() const noexcept { return order_; }
  int normal() const noexcept { return components_.empty() ? 0 : components_.back(); }
  int operator[](int j) const { return components_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& components() const noexcept { return components_; }
  bool is_zero() const noexcept { return order_ == 0; }

  /// "(1,0,2)"
  std::string to_string() const;

  friend bool operator==(const MultiIndex& x, const MultiIndex& y) noexcept {
    return x.components_ == y.components_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& x, const MultiIndex& y) noexcept {
    return x.components_ <=> y.components_;
  }

 private:
  std::vector<int> components_;
  int order_ = 0;
};

/// Every alpha with |alpha| <= m in graded-lexicographic order: by total
/// order first, then larger leading components first. binomial(d+m, d) entries.
std::vector<MultiIndex> multi_indices_up_to(int dim, int m);

}  // namespace sgls
