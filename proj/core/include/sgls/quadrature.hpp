#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "sgls/box.hpp"
#include "sgls/field.hpp"

namespace sgls {

/// Composite tensor Gauss-Legendre rule with panel doubling.
struct QuadratureSpec {
  int panels_per_axis = 4;
  int nodes_per_panel = 8;
  /// Two successive refinements must agree to this relative tolerance.
  double rel_tol = 1e-10;
  int max_refinements = 6;

  void validate() const;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int n);

struct LpEstimate {
  double value = 0.0;
  /// Estimate after each refinement level that was consulted.
  std::vector<double> history;
  /// Relative tail tolerance behind the truncation (0 for explicit boxes).
  double tail_bound = 0.0;
};

/// Samples |g| once per refinement level over a union of disjoint boxes and
/// evaluates the L_p norm for any p from the cached samples, rescaled by the
/// largest sampled magnitude M:  M * (sum w (|g|/M)^p)^(1/p).
///
/// Levels are built lazily and kept, so a sup-over-p search pays for the
/// integrand evaluations once. Not safe for concurrent norm() calls.
class LpSampler {
 public:
  using Integrand = std::function<double(Point)>;

  LpSampler(Integrand g, std::vector<Box> region, QuadratureSpec spec);

  /// Throws E_EXPONENT for p < 1 or non-finite p, ConvergenceError when
  /// refinements never agree.
  LpEstimate norm(double p) const;

  const std::vector<Box>& region() const noexcept { return region_; }
  std::size_t levels_built() const noexcept { return levels_.size(); }

 private:
  struct Level {
    double max_abs = 0.0;
    std::vector<double> weights;    // quadrature weight of each nonzero sample
    std::vector<double> log_ratio;  // log(|g| / max_abs)
    /// Samples are ordered by floor(-log_ratio); bucket b ends at bucket_end[b].
    std::vector<std::size_t> bucket_end;
  };

  const Level& level(int r) const;
  double level_norm(const Level& lv, double p) const;
  std::size_t level_samples(int r) const;

  Integrand g_;
  std::vector<Box> region_;
  QuadratureSpec spec_;
  GaussLegendreRule rule_;
  mutable std::vector<Level> levels_;
};

/// ||f||_{L_p(box)} of a magnitude function.
LpEstimate lp_norm(const std::function<double(Point)>& f_abs, double p, const Box& box,
                   const QuadratureSpec& spec);

/// ||D^alpha f||_{L_p} over the domain's truncated region(s). The truncation
/// comes from the field's decay certificate (tail below rel_tol / 10) unless
/// the domain carries an explicit box.
LpEstimate lp_norm_halfspace(const Field& field, const MultiIndex& alpha, double p,
                             const HalfSpaceDomain& domain, const QuadratureSpec& spec);

/// Sampler for |D^alpha f| over the domain's region(s); shared by the norm routines.
LpSampler make_derivative_sampler(const Field& field, const MultiIndex& alpha,
                                  const HalfSpaceDomain& domain, const QuadratureSpec& spec);

/// Relative tail tolerance used when truncating via a decay certificate.
double tail_tolerance(const QuadratureSpec& spec) noexcept;

}  // namespace sgls
