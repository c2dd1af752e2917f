#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sgls/field.hpp"
#include "sgls/psi.hpp"
#include "sgls/quadrature.hpp"

namespace sgls {

/// Discretization of sup over p in (a, b).
struct PGridSpec {
  /// Gap kept from each finite endpoint of (a, b). Non-positive means 1e-3 * a.
  double p_min_offset = 0.0;
  /// Upper end of the search when b is infinite (or larger than the cap).
  double p_cap = 64.0;
  int grid_points = 16;
  /// Golden-section iterations around the best grid point.
  int refine_iters = 16;

  double offset_for(double a) const noexcept { return p_min_offset > 0.0 ? p_min_offset : 1e-3 * a; }
  /// Throws E_CONFIG unless grid_points >= 3, refine_iters >= 0, p_cap > a.
  void validate(const PsiSpec& psi) const;
  /// Geometric grid over [a + offset, min(b - offset, p_cap)].
  std::vector<double> grid(const PsiSpec& psi) const;
};

struct PRow {
  double p = 0.0;
  double raw_norm = 0.0;
  double psi = 0.0;
  double ratio = 0.0;
  /// Refinement levels consulted by the quadrature (diagnostics).
  int quadrature_levels = 0;
  bool ok = true;
  std::string note;
};

struct NormReport {
  double value = 0.0;
  double argmax_p = 0.0;
  /// Sorted by p; failed rows have ok == false and do not enter the sup.
  std::vector<PRow> per_p_table;
  /// The maximizer sits at the first or last searched p.
  bool boundary_flag = false;
  /// b == inf and the maximizer is p_cap: value is a lower bound only.
  bool lower_bound_only = false;
  /// Some p failed to converge; the sup is over the remaining points.
  bool degraded_coverage = false;
  double search_lo = 0.0;
  double search_hi = 0.0;
};

/// p -> max_{|alpha| <= m} ||D^alpha g||_{L_p(region)}, with one cached
/// sampler per multi-index so a p-search evaluates the integrands once.
class SobolevProfile {
 public:
  struct Value {
    double norm = 0.0;
    MultiIndex argmax;
    std::vector<double> per_alpha;
    int quadrature_levels = 0;
  };

  /// Sobolev profile of `field` over `domain`.
  SobolevProfile(const Field& field, int m, const HalfSpaceDomain& domain,
                 const QuadratureSpec& spec);

  Value evaluate(double p) const;
  double operator()(double p) const { return evaluate(p).norm; }

  int order() const noexcept { return m_; }
  const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

 private:
  int m_;
  std::vector<MultiIndex> indices_;
  std::vector<LpSampler> samplers_;
};

/// ||f||_{W^m_p(G)} = MAX over |alpha| <= m of ||D^alpha f||_{L_p(G)}.
double sobolev_norm(const Field& field, int m, double p, const HalfSpaceDomain& domain,
                    const QuadratureSpec& quad);

/// sup_p numerator(p) / psi(p) over the discretized support. `numerator`
/// returns the raw norm and the number of quadrature levels it consulted.
struct NumeratorValue {
  double norm = 0.0;
  int quadrature_levels = 0;
};
NormReport sup_over_p(const std::function<NumeratorValue(double)>& numerator, const PsiSpec& psi,
                      const PGridSpec& pgrid);

/// Same search over a prepared profile.
NormReport sup_over_p(const SobolevProfile& profile, const PsiSpec& psi, const PGridSpec& pgrid);

/// ||f||_{G psi} = sup_p ||f||_{L_p(G)} / psi(p).
NormReport gls_norm(const Field& field, const PsiSpec& psi, const HalfSpaceDomain& domain,
                    const PGridSpec& pgrid, const QuadratureSpec& quad);

/// ||f||_{S[m, G, psi]} = sup_p ||f||_{W^m_p(G)} / psi(p). m = 0 is gls_norm.
NormReport sgls_norm(const Field& field, int m, const PsiSpec& psi, const HalfSpaceDomain& domain,
                     const PGridSpec& pgrid, const QuadratureSpec& quad);

}  // namespace sgls
