#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sgls/extension.hpp"
#include "sgls/field.hpp"
#include "sgls/norms.hpp"
#include "sgls/psi.hpp"
#include "sgls/quadrature.hpp"

namespace sgls {

/// A field of the verification suite with its truncation. Fields carrying a
/// decay certificate need no box.
struct SuiteEntry {
  Field field;
  std::optional<Box> box;
  std::optional<double> lower_depth;

  SuiteEntry(Field f) : field(std::move(f)) {}  // NOLINT(google-explicit-constructor)
  SuiteEntry(Field f, Box b, std::optional<double> depth = std::nullopt)
      : field(std::move(f)), box(std::move(b)), lower_depth(depth) {}

  HalfSpaceDomain domain(Side side) const;
};

// --- scaling identity -------------------------------------------------------

struct ScalingCheck {
  int k = 1;
  MultiIndex alpha;
  double p = 1.0;
  /// ||D^alpha g_k||_{L_p(lower half)}, g_k(x~, y) = f(x~, -k y).
  double reflected_norm = 0.0;
  /// k^(alpha_d - 1/p) ||D^alpha f||_{L_p(upper half)}.
  double scaled_norm = 0.0;
  double rel_error = 0.0;
};

ScalingCheck check_scaling_identity(const Field& field, int k, const MultiIndex& alpha, double p,
                                    const QuadratureSpec& quad);

// --- boundary matching ------------------------------------------------------

struct BoundaryRow {
  int order = 0;
  double h = 0.0;
  /// sum over tangential samples of |one-sided FD from above - from below|.
  double mismatch = 0.0;
  /// Rounding level of the stencils at this h; mismatches below it carry no signal.
  double rounding_floor = 0.0;
  /// log(mismatch ratio) / log(h ratio) against the previous h; NaN for the first.
  double observed_order = 0.0;
};

struct BoundaryOrderSummary {
  int order = 0;
  /// order <= m: the mismatch must vanish.
  bool matched_order = true;
  double min_observed_order = 0.0;
  bool at_rounding = false;
  /// order == m+1: mismatch / sum |d^(m+1) f / dx_d^(m+1)| at the smallest h, and
  /// its analytic limit |sum_k c_k (-k)^(m+1) - 1|.
  double normalized_jump = 0.0;
  double analytic_jump = 0.0;
  bool passed = false;
};

struct BoundaryMatchReport {
  int m = 0;
  std::vector<BoundaryRow> rows;
  std::vector<BoundaryOrderSummary> orders;

  bool passed() const;
};

struct BoundaryMatchOptions {
  double min_order = 1.8;
  /// Relative tolerance on the order m+1 jump.
  double jump_rel_tol = 0.05;
};

/// One-sided second-order normal-derivative differences of order 0..m+1 at
/// x_d = 0 from both sides, on decreasing h. The lower side uses the
/// reflection formula itself, so a wrong weight shows up at order 0.
BoundaryMatchReport check_boundary_matching(const ExtendedField& ext,
                                            std::span<const double> h_values,
                                            std::span<const std::vector<double>> tangential_points,
                                            const BoundaryMatchOptions& options = {});

BoundaryMatchReport check_boundary_matching(const Field& field, int m,
                                            std::span<const double> h_values,
                                            std::span<const std::vector<double>> tangential_points,
                                            const BoundaryMatchOptions& options = {});

/// Weights of the (nodes.size())-point finite difference for the order-th
/// derivative at z (Fornberg's recursion).
std::vector<double> finite_difference_weights(double z, std::span<const double> nodes, int order);

// --- polynomial reproduction -------------------------------------------------

struct ReproductionCheck {
  int m = 0;
  int degree = 0;
  std::size_t points = 0;
  double max_abs_error = 0.0;
};

/// Extends t^degree * bump(x~) and compares against x_d^degree * bump(x~) at
/// random points with x_d in (-1, 0).
ReproductionCheck check_polynomial_reproduction(int m, int degree, int dim, std::size_t points,
                                                std::uint64_t seed,
                                                std::optional<std::vector<double>> weights = std::nullopt);

// --- sampled extension ----------------------------------------------------------

/// Cached samplers of |D^alpha f| on G and of |D^alpha Lf| on the lower slab
/// for every |alpha| <= m. Since Lf == f on G, norms of Lf over the whole
/// truncated space combine the two pieces: ||g||_p^p = ||g||_p^p(G) + ||g||_p^p(lower).
/// Not safe for concurrent use.
class ExtensionProfile {
 public:
  ExtensionProfile(const SuiteEntry& entry, const ExtendedField& ext, const QuadratureSpec& quad);

  const std::string& label() const noexcept { return label_; }
  int order() const noexcept { return m_; }
  std::span<const double> weights() const noexcept { return weights_; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }
  double tolerance_basis() const noexcept { return rel_tol_; }

  /// ||D^alpha_i f||_{L_p(G)} and ||D^alpha_i Lf||_{L_p(lower)}.
  LpEstimate upper(std::size_t i, double p) const { return upper_[i].norm(p); }
  LpEstimate lower(std::size_t i, double p) const { return lower_[i].norm(p); }

  struct Value {
    double norm = 0.0;
    MultiIndex argmax;
    int quadrature_levels = 0;
  };
  /// ||f||_{W^m_p(G)}.
  Value denominator(double p) const;
  /// ||Lf||_{W^m_p} over the truncated whole space.
  Value numerator(double p) const;

 private:
  std::string label_;
  int m_;
  std::vector<double> weights_;
  double rel_tol_;
  std::vector<MultiIndex> indices_;
  std::vector<LpSampler> upper_;
  std::vector<LpSampler> lower_;
};

// --- per-p bound --------------------------------------------------------------

struct PerPBoundRow {
  std::string field;
  double p = 1.0;
  MultiIndex alpha;
  double lower_norm = 0.0;  // ||D^alpha Lf||_{L_p(lower)}
  double upper_norm = 0.0;  // ||D^alpha f||_{L_p(G)}
  double constant = 0.0;    // sum_k |c_k| k^(alpha_d - 1/p)
  bool ok = true;
};

/// One-sided check lower_norm <= constant * upper_norm + tol for every
/// |alpha| <= m and every p given.
std::vector<PerPBoundRow> check_per_p_bound(const SuiteEntry& entry, const ExtendedField& ext,
                                            std::span<const double> p_values,
                                            const QuadratureSpec& quad, double tol);
std::vector<PerPBoundRow> check_per_p_bound(const ExtensionProfile& profile,
                                            std::span<const double> p_values, double tol);

// --- operator norm -----------------------------------------------------------

struct FieldRatio {
  std::string label;
  NormReport numerator;    // ||Lf||_{S[m, R^d, psi]}
  NormReport denominator;  // ||f||_{S[m, G, psi]}
  double ratio = 0.0;
};

struct OperatorNormEstimate {
  int m = 0;
  double max_ratio = 0.0;
  std::string witness;
  double theoretical_bound = 0.0;
  std::string theoretical_bound_exact;
  double tolerance = 0.0;
  std::vector<FieldRatio> per_field_table;

  bool within_bound() const;
};

struct OperatorNormOptions {
  /// Tolerance = factor * quad.rel_tol.
  double tolerance_factor = 10.0;
  /// Replaces the exact weights (fault injection).
  std::optional<std::vector<double>> weights;
  /// Throw E_VERIFY naming the witness on a bound violation.
  bool throw_on_violation = true;
};

/// Empirical ||Lf||_S / ||f||_S over the suite against 1 + C(m).
OperatorNormEstimate estimate_operator_norm(std::span<const SuiteEntry> suite, int m,
                                            const PsiSpec& psi, const PGridSpec& pgrid,
                                            const QuadratureSpec& quad,
                                            const OperatorNormOptions& options = {});

/// Same estimate for several generating functions; quadrature samples are
/// shared across them. One result per psi, in order.
std::vector<OperatorNormEstimate> estimate_operator_norms(std::span<const SuiteEntry> suite, int m,
                                                          std::span<const PsiSpec> psis,
                                                          const PGridSpec& pgrid,
                                                          const QuadratureSpec& quad,
                                                          const OperatorNormOptions& options = {});

/// Estimates over prepared profiles (one per field); the tolerance is
/// factor * rel_tol of the profiles' quadrature. options.weights is ignored:
/// the profiles carry their own.
std::vector<OperatorNormEstimate> estimate_operator_norms(std::span<const ExtensionProfile> profiles,
                                                          std::span<const PsiSpec> psis,
                                                          const PGridSpec& pgrid,
                                                          const OperatorNormOptions& options = {});

// --- curated suite and full run -----------------------------------------------

/// Names accepted by builtin_suite_entry().
std::vector<std::string> builtin_field_names();
SuiteEntry builtin_suite_entry(const std::string& name, int dim);
std::vector<SuiteEntry> curated_suite(int dim);

struct SuiteConfig {
  int m = 1;
  int dim = 1;
  PsiSpec psi = make_power_psi(0.5, 1.5, 8.0);
  PGridSpec pgrid{};
  QuadratureSpec quad{4, 8, 1e-6, 8};
  std::vector<std::string> fields = builtin_field_names();
  std::uint64_t seed = 20240601;
  /// Adds 0.01 to c_1 in every extension the suite builds.
  bool sabotage = false;
  double tolerance_factor = 10.0;
  std::vector<double> h_values{1e-2, 5e-3, 2.5e-3};
  std::size_t reproduction_points = 1000;
  std::vector<double> scaling_p{1.0, 2.0, 5.0};
};

struct Metric {
  std::string name;
  double value = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string message;
  std::vector<Metric> metrics;
};

struct VerificationReport {
  int m = 0;
  int dim = 1;
  PsiSpec psi;
  double bound = 0.0;
  std::string bound_exact;
  double max_ratio = 0.0;
  std::string witness;
  std::vector<CheckResult> checks;
  std::optional<OperatorNormEstimate> estimate;

  bool passed() const;
};

/// Coefficient exactness, polynomial reproduction, boundary matching,
/// scaling identity, per-p bounds and the operator-norm estimate.
/// Individual failures are recorded, not thrown. E_CONFIG for an empty suite.
VerificationReport run_full_suite(const SuiteConfig& config);

}  // namespace sgls
