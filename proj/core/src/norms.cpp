#include "sgls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sgls/errors.hpp"

namespace sgls {

void PGridSpec::validate(const PsiSpec& psi) const {
  if (grid_points < 3) throw Error(ErrorCode::config, "p-grid needs at least 3 points");
  if (refine_iters < 0) throw Error(ErrorCode::config, "refine_iters must be >= 0");
  if (!(p_cap > psi.a())) throw Error(ErrorCode::config, "p_cap must exceed a");
  const auto g = grid(psi);
  if (!(g.back() > g.front()))
    throw Error(ErrorCode::support_interval, "p search interval is empty after endpoint offsets");
}

std::vector<double> PGridSpec::grid(const PsiSpec& psi) const {
  const double off = offset_for(psi.a());
  const double lo = psi.a() + off;
  const double hi = (psi.b() - off <= p_cap) ? psi.b() - off : p_cap;
  const int n = std::max(grid_points, 2);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------------------

SobolevProfile::SobolevProfile(const Field& field, int m, const HalfSpaceDomain& domain,
                               const QuadratureSpec& spec)
    : m_(m) {
  if (m < 0) throw Error(ErrorCode::order, "Sobolev order must be >= 0");
  if (m > field.max_order())
    throw Error(ErrorCode::order, "field '" + field.label() + "' has derivatives only up to order " +
                                      std::to_string(field.max_order()));
  indices_ = multi_indices_up_to(field.dim(), m);
  samplers_.reserve(indices_.size());
  for (const auto& alpha : indices_)
    samplers_.push_back(make_derivative_sampler(field, alpha, domain, spec));
}

SobolevProfile::Value SobolevProfile::evaluate(double p) const {
  Value v;
  v.per_alpha.reserve(samplers_.size());
  v.norm = -1.0;
  for (std::size_t i = 0; i < samplers_.size(); ++i) {
    const auto est = samplers_[i].norm(p);
    v.per_alpha.push_back(est.value);
    v.quadrature_levels = std::max(v.quadrature_levels, static_cast<int>(est.history.size()));
    if (est.value > v.norm) {
      v.norm = est.value;
      v.argmax = indices_[i];
    }
  }
  return v;
}

double sobolev_norm(const Field& field, int m, double p, const HalfSpaceDomain& domain,
                    const QuadratureSpec& quad) {
  return SobolevProfile(field, m, domain, quad).evaluate(p).norm;
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kGolden = 0.6180339887498949;

class RatioTable {
 public:
  RatioTable(const std::function<NumeratorValue(double)>& numerator, const PsiSpec& psi)
      : numerator_(numerator), psi_(psi) {}

  /// Ratio at p, or -inf when the quadrature failed there.
  double at(double p) {
    PRow row;
    row.p = p;
    row.psi = psi_(p);
    try {
      const auto v = numerator_(p);
      row.raw_norm = v.norm;
      row.quadrature_levels = v.quadrature_levels;
      row.ratio = v.norm / row.psi;
    } catch (const ConvergenceError& e) {
      row.ok = false;
      row.ratio = std::numeric_limits<double>::quiet_NaN();
      row.raw_norm = std::numeric_limits<double>::quiet_NaN();
      row.note = e.what();
    }
    rows_.push_back(row);
    return row.ok ? row.ratio : -std::numeric_limits<double>::infinity();
  }

  std::vector<PRow> take() { return std::move(rows_); }

 private:
  const std::function<NumeratorValue(double)>& numerator_;
  const PsiSpec& psi_;
  std::vector<PRow> rows_;
};

}  // namespace

NormReport sup_over_p(const std::function<NumeratorValue(double)>& numerator, const PsiSpec& psi,
                      const PGridSpec& pgrid) {
  pgrid.validate(psi);
  const auto grid = pgrid.grid(psi);
  RatioTable table(numerator, psi);

  std::vector<double> ratios;
  ratios.reserve(grid.size());
  for (double p : grid) ratios.push_back(table.at(p));
  const auto best = static_cast<std::size_t>(
      std::max_element(ratios.begin(), ratios.end()) - ratios.begin());
  if (ratios[best] == -std::numeric_limits<double>::infinity())
    throw Error(ErrorCode::convergence, "quadrature failed at every p of the search grid");

  // Golden-section refinement in log p on the bracket around the best grid point.
  if (pgrid.refine_iters > 0) {
    double lo = std::log(grid[best == 0 ? 0 : best - 1]);
    double hi = std::log(grid[std::min(best + 1, grid.size() - 1)]);
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = table.at(std::exp(x1));
    double f2 = table.at(std::exp(x2));
    for (int it = 2; it < pgrid.refine_iters; it += 1) {
      if (f1 >= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - kGolden * (hi - lo);
        f1 = table.at(std::exp(x1));
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + kGolden * (hi - lo);
        f2 = table.at(std::exp(x2));
      }
    }
  }

  NormReport report;
  report.per_p_table = table.take();
  std::stable_sort(report.per_p_table.begin(), report.per_p_table.end(),
                   [](const PRow& x, const PRow& y) { return x.p < y.p; });
  report.search_lo = grid.front();
  report.search_hi = grid.back();
  report.value = -1.0;
  for (const auto& row : report.per_p_table) {
    if (!row.ok) {
      report.degraded_coverage = true;
      continue;
    }
    if (row.ratio > report.value) {
      report.value = row.ratio;
      report.argmax_p = row.p;
    }
  }
  report.boundary_flag = report.argmax_p == report.search_lo || report.argmax_p == report.search_hi;
  const bool capped = !(psi.b() - pgrid.offset_for(psi.a()) <= pgrid.p_cap);
  report.lower_bound_only = capped && report.argmax_p == report.search_hi;
  return report;
}

NormReport sup_over_p(const SobolevProfile& profile, const PsiSpec& psi, const PGridSpec& pgrid) {
  return sup_over_p(
      [&profile](double p) {
        const auto v = profile.evaluate(p);
        return NumeratorValue{v.norm, v.quadrature_levels};
      },
      psi, pgrid);
}

namespace {

void require_valid_psi(const PsiSpec& psi, const PGridSpec& pgrid) {
  const auto check = psi_validate(psi, 64, pgrid.p_cap);
  if (!check.valid)
    throw Error(ErrorCode::positivity, "generating function '" + psi.label() +
                                           "' is not strictly positive on its support (min " +
                                           std::to_string(check.min_value) + " at p=" +
                                           std::to_string(check.argmin_p) + ")");
}

// A report of exactly zero is only consistent with a field that vanishes on the region.
void check_zero_report(const NormReport& report, const Field& field, const HalfSpaceDomain& domain,
                       const QuadratureSpec& quad) {
  if (report.value != 0.0) return;
  constexpr int kProbe = 7;
  const auto d = static_cast<std::size_t>(field.dim());
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= kProbe;
  std::vector<double> x(d);
  for (const Box& box : domain.regions(field, tail_tolerance(quad))) {
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (std::size_t j = 0; j < d; ++j) {
        const auto i = rem % kProbe;
        rem /= kProbe;
        const double t = (static_cast<double>(i) + 0.5) / kProbe;
        x[j] = box.lower[j] + t * (box.upper[j] - box.lower[j]);
      }
      if (field(Point(x)) != 0.0)
        throw Error(ErrorCode::inconsistency,
                    "every ratio is zero but field '" + field.label() + "' is nonzero on the domain");
    }
  }
}

}  // namespace

NormReport sgls_norm(const Field& field, int m, const PsiSpec& psi, const HalfSpaceDomain& domain,
                     const PGridSpec& pgrid, const QuadratureSpec& quad) {
  require_valid_psi(psi, pgrid);
  const SobolevProfile profile(field, m, domain, quad);
  auto report = sup_over_p(profile, psi, pgrid);
  check_zero_report(report, field, domain, quad);
  return report;
}

NormReport gls_norm(const Field& field, const PsiSpec& psi, const HalfSpaceDomain& domain,
                    const PGridSpec& pgrid, const QuadratureSpec& quad) {
  return sgls_norm(field, 0, psi, domain, pgrid, quad);
}

}  // namespace sgls
