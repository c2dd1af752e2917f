#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sgls/box.hpp"
#include "sgls/multi_index.hpp"

namespace sgls {

inline constexpr int kMaxDim = 8;

using Point = std::span<const double>;

/// Tail certificate: radius(tol) is a half-width R such that outside
/// [-R, R]^d the field and all its available derivatives contribute less
/// than tol (relative) to any L_p norm the library evaluates.
struct DecayCertificate {
  std::function<double(double)> radius;
};

/// Scalar function on R^d with derivatives up to max_order().
///
/// Value semantics over shared immutable state: copies are cheap and
/// evaluation is safe from concurrent threads. The value is always computed
/// through the zero multi-index, so derivative(0, x) == (*this)(x) exactly.
class Field {
 public:
  using Derivative = std::function<double(const MultiIndex&, Point)>;

  Field(std::string label, int dim, int max_order, Derivative derivative,
        std::optional<DecayCertificate> decay = std::nullopt);

  const std::string& label() const noexcept { return state_->label; }
  int dim() const noexcept { return state_->dim; }
  int max_order() const noexcept { return state_->max_order; }

  double operator()(Point x) const { return derivative(state_->zero, x); }
  double operator()(std::initializer_list<double> x) const {
    return (*this)(Point(x.begin(), x.size()));
  }

  /// D^alpha f(x). Throws E_ORDER for |alpha| > max_order(), E_DIMENSION on shape mismatch.
  double derivative(const MultiIndex& alpha, Point x) const;

  bool has_decay_certificate() const noexcept { return state_->decay.has_value(); }
  /// Throws E_DOMAIN when the field carries no certificate.
  double decay_radius(double tail_tol) const;

  /// lambda * f, sharing the same certificate.
  Field scaled(double lambda) const;
  Field relabeled(std::string label) const;

 private:
  struct State {
    std::string label;
    int dim;
    int max_order;
    Derivative derivative;
    std::optional<DecayCertificate> decay;
    MultiIndex zero;
  };
  std::shared_ptr<const State> state_;
};

/// f(x) = amplitude * exp(-|x - center|^2 / (2 scale^2)); exact derivatives
/// via probabilists' Hermite polynomials. An empty center means the origin.
Field gaussian_field(int dim, double scale, std::vector<double> center = {},
                     double amplitude = 1.0, int max_order = 12);

/// f == value everywhere. No decay certificate: norms need an explicit box.
Field constant_field(int dim, double value);

/// Product of polynomial bumps (1 - s^2)^(smoothness+1), s = (x_j - c_j)/r_j.
/// Compactly supported in the box center +- radii and C^smoothness.
Field bump_field(std::vector<double> center, std::vector<double> radii, int smoothness = 8);

inline constexpr int kMaxPolynomialDegree = 16;

struct PolyBumpOptions {
  int dim = 2;
  /// chi(x_d) == 1 for |x_d| <= flat_extent, tapering to 0 over `taper`.
  double flat_extent = 4.0;
  double taper = 2.0;
  int smoothness = 8;
};

/// f(x~, x_d) = P(x_d) * chi(x_d) * bump(x~), with bump(0~) = 1 and support
/// |x_j| < cutoff_radius tangentially. Near x_d = 0 this is exactly P(x_d) bump(x~).
/// coeffs[i] multiplies t^i. Throws E_ORDER for degree > kMaxPolynomialDegree.
Field poly_times_bump_field(std::vector<double> coeffs, double cutoff_radius,
                            const PolyBumpOptions& options = {});

// ---------------------------------------------------------------------------
// Grid-sampled fields

/// Uniform grid samples; the last axis varies fastest in `values`.
struct GridData {
  std::vector<std::size_t> counts;
  double spacing = 1.0;
  std::vector<double> origin;
  std::vector<double> values;

  int dim() const noexcept { return static_cast<int>(counts.size()); }
  /// Throws E_CONFIG unless shapes agree, spacing > 0 and counts >= 5 per axis.
  void validate() const;
  Box bounds() const;
};

/// Multilinear interpolation for values, second-order finite differences
/// (interpolated from the nodes) for derivatives of order <= 2.
Field grid_field(GridData grid, std::string label = "grid");

GridData read_grid_csv(std::istream& in);
void write_grid_csv(std::ostream& out, const GridData& grid);
GridData read_grid_binary(std::istream& in);
void write_grid_binary(std::ostream& out, const GridData& grid);
/// Dispatches on the leading magic bytes.
GridData read_grid_file(const std::string& path);

// ---------------------------------------------------------------------------

enum class Side { upper, lower, whole };

/// Upper half-space {x_d >= 0} (or its mirror / the whole space) truncated to
/// finite boxes for quadrature.
struct HalfSpaceDomain {
  int dim = 1;
  Side side = Side::upper;
  /// Explicit truncation of the upper half-space. Required for fields without
  /// a decay certificate; intersected with {x_d >= 0}.
  std::optional<Box> truncation_box;
  /// Depth of the lower slab [-depth, 0] for Side::lower / Side::whole when an
  /// explicit box is given. Defaults to the box's upper x_d extent.
  std::optional<double> lower_depth;

  /// Boxes to integrate over for `field`, tail chosen below tail_tol.
  std::vector<Box> regions(const Field& field, double tail_tol) const;
};

}  // namespace sgls
