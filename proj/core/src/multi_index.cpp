#include "sgls/multi_index.hpp"

#include <numeric>

#include "sgls/box.hpp"
#include "sgls/errors.hpp"

namespace sgls {

MultiIndex::MultiIndex(std::vector<int> components) : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorCode::dimension, "multi-index needs d >= 1");
  for (int c : components_)
    if (c < 0) throw Error(ErrorCode::order, "multi-index components must be >= 0");
  order_ = std::accumulate(components_.begin(), components_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> components)
    : MultiIndex(std::vector<int>(components)) {}

MultiIndex MultiIndex::zero(int dim) {
  if (dim < 1) throw Error(ErrorCode::dimension, "multi-index needs d >= 1");
  return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0));
}

MultiIndex MultiIndex::axis(int dim, int axis, int order) {
  if (axis < 0 || axis >= dim) throw Error(ErrorCode::dimension, "axis out of range");
  std::vector<int> c(static_cast<std::size_t>(dim), 0);
  c[static_cast<std::size_t>(axis)] = order;
  return MultiIndex(std::move(c));
}

std::string MultiIndex::to_string() const {
  std::string s = "(";
  for (std::size_t j = 0; j < components_.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(components_[j]);
  }
  return s + ")";
}

namespace {

// Compositions of `total` into components [j, d) with the leading part fixed,
// emitted with larger leading components first.
void compositions(std::vector<int>& current, std::size_t j, int remaining,
                  std::vector<MultiIndex>& out) {
  if (j + 1 == current.size()) {
    current[j] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int c = remaining; c >= 0; --c) {
    current[j] = c;
    compositions(current, j + 1, remaining - c, out);
  }
  current[j] = 0;
}

}  // namespace

std::vector<MultiIndex> multi_indices_up_to(int dim, int m) {
  if (dim < 1) throw Error(ErrorCode::dimension, "need d >= 1");
  if (m < 0) throw Error(ErrorCode::order, "need m >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> current(static_cast<std::size_t>(dim), 0);
  for (int total = 0; total <= m; ++total) compositions(current, 0, total, out);
  return out;
}

Box::Box(std::vector<double> lower_corner, std::vector<double> upper_corner)
    : lower(std::move(lower_corner)), upper(std::move(upper_corner)) {
  if (lower.empty() || lower.size() != upper.size())
    throw Error(ErrorCode::dimension, "box corners must have equal, nonzero dimension");
  for (std::size_t j = 0; j < lower.size(); ++j)
    if (!(lower[j] < upper[j])) throw Error(ErrorCode::domain, "box needs lower_j < upper_j");
}

Box Box::cube(int dim, double lo, double hi) {
  return Box(std::vector<double>(static_cast<std::size_t>(dim), lo),
             std::vector<double>(static_cast<std::size_t>(dim), hi));
}

double Box::volume() const noexcept {
  double v = 1.0;
  for (std::size_t j = 0; j < lower.size(); ++j) v *= upper[j] - lower[j];
  return v;
}

bool Box::contains(const std::vector<double>& x) const noexcept {
  if (x.size() != lower.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < lower[j] || x[j] > upper[j]) return false;
  return true;
}

}  // namespace sgls
