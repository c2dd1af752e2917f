#include "sgls/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "sgls/errors.hpp"

namespace sgls {

HalfSpaceDomain SuiteEntry::domain(Side side) const {
  HalfSpaceDomain d;
  d.dim = field.dim();
  d.side = side;
  d.truncation_box = box;
  d.lower_depth = lower_depth;
  return d;
}

namespace {

// Reflections reach x_d = (m+1) * depth; without a certificate the field is
// only trusted inside its box.
void check_reflection_reach(const SuiteEntry& entry, int m) {
  if (entry.field.has_decay_certificate() || !entry.box) return;
  const auto d = static_cast<std::size_t>(entry.field.dim());
  const double top = entry.box->upper[d - 1];
  const double depth = entry.lower_depth.value_or(top);
  if ((m + 1) * depth > top * (1.0 + 1e-12))
    throw Error(ErrorCode::domain, "field '" + entry.field.label() + "': lower depth " +
                                       std::to_string(depth) + " needs the box to reach x_d = " +
                                       std::to_string((m + 1) * depth));
}

}  // namespace

// ---------------------------------------------------------------------------

ScalingCheck check_scaling_identity(const Field& field, int k, const MultiIndex& alpha, double p,
                                    const QuadratureSpec& quad) {
  if (k < 1) throw Error(ErrorCode::config, "dilation k must be >= 1");
  const int d = field.dim();
  const double r = field.decay_radius(tail_tolerance(quad));
  std::vector<double> lo(static_cast<std::size_t>(d), -r);
  std::vector<double> hi(static_cast<std::size_t>(d), r);
  hi.back() = 0.0;
  const Box lower(lo, hi);

  const double kk = static_cast<double>(k);
  const double chain = (alpha.normal() % 2 ? -1.0 : 1.0) * std::pow(kk, alpha.normal());
  LpSampler reflected(
      [field, alpha, kk, chain](Point x) {
        std::array<double, kMaxDim> y{};
        std::copy(x.begin(), x.end(), y.begin());
        y[x.size() - 1] = -kk * x.back();
        return chain * field.derivative(alpha, Point(y.data(), x.size()));
      },
      {lower}, quad);

  ScalingCheck out;
  out.k = k;
  out.alpha = alpha;
  out.p = p;
  out.reflected_norm = reflected.norm(p).value;
  const HalfSpaceDomain upper{d, Side::upper, std::nullopt, std::nullopt};
  out.scaled_norm = std::pow(kk, alpha.normal() - 1.0 / p) *
                    lp_norm_halfspace(field, alpha, p, upper, quad).value;
  const double scale = std::max(std::abs(out.scaled_norm), std::abs(out.reflected_norm));
  out.rel_error = scale == 0.0 ? 0.0 : std::abs(out.reflected_norm - out.scaled_norm) / scale;
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> finite_difference_weights(double z, std::span<const double> nodes, int order) {
  const std::size_t n = nodes.size();
  if (order < 0 || n < static_cast<std::size_t>(order) + 1)
    throw Error(ErrorCode::config, "finite difference needs at least order+1 nodes");
  const auto mo = static_cast<std::size_t>(order);
  std::vector<std::vector<double>> c(n, std::vector<double>(mo + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - z;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, mo);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - z;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][mo];
  return w;
}

bool BoundaryMatchReport::passed() const {
  return std::all_of(orders.begin(), orders.end(), [](const auto& o) { return o.passed; });
}

BoundaryMatchReport check_boundary_matching(const ExtendedField& ext,
                                            std::span<const double> h_values,
                                            std::span<const std::vector<double>> tangential_points,
                                            const BoundaryMatchOptions& options) {
  if (h_values.size() < 2) throw Error(ErrorCode::config, "boundary check needs at least two h values");
  for (std::size_t i = 1; i < h_values.size(); ++i)
    if (!(h_values[i] < h_values[i - 1]) || !(h_values[i] > 0.0))
      throw Error(ErrorCode::config, "h values must be positive and strictly decreasing");
  const int d = ext.dim();
  const auto du = static_cast<std::size_t>(d);
  std::vector<std::vector<double>> tangents(tangential_points.begin(), tangential_points.end());
  if (tangents.empty()) tangents.emplace_back(du - 1, 0.0);
  for (const auto& t : tangents)
    if (t.size() + 1 != du) throw Error(ErrorCode::dimension, "tangential point needs d-1 coordinates");

  const int m = ext.order();
  const Field& base = ext.base();
  const auto weights = ext.weights();
  double weight_mass = 0.0;
  for (double w : weights) weight_mass += std::abs(w);
  const bool can_normalize = base.max_order() >= m + 1;
  const int top = can_normalize ? m + 1 : m;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const MultiIndex zero = MultiIndex::zero(d);

  BoundaryMatchReport report;
  report.m = m;
  std::vector<double> x(du);
  for (int l = 0; l <= top; ++l) {
    const std::size_t npts = static_cast<std::size_t>(l) + 2;
    std::vector<BoundaryRow> rows;
    for (double h : h_values) {
      std::vector<double> up_nodes(npts);
      std::vector<double> low_nodes(npts);
      for (std::size_t j = 0; j < npts; ++j) {
        up_nodes[j] = static_cast<double>(j) * h;
        low_nodes[j] = -static_cast<double>(j) * h;
      }
      const auto wu = finite_difference_weights(0.0, up_nodes, l);
      const auto wl = finite_difference_weights(0.0, low_nodes, l);
      double wu_mass = 0.0;
      double wl_mass = 0.0;
      for (std::size_t j = 0; j < npts; ++j) {
        wu_mass += std::abs(wu[j]);
        wl_mass += std::abs(wl[j]);
      }
      BoundaryRow row;
      row.order = l;
      row.h = h;
      for (const auto& t : tangents) {
        std::copy(t.begin(), t.end(), x.begin());
        double fd_up = 0.0;
        double fd_low = 0.0;
        double vmax = 0.0;
        for (std::size_t j = 0; j < npts; ++j) {
          x[du - 1] = up_nodes[j];
          const double vu = base(Point(x));
          x[du - 1] = low_nodes[j];
          const double vl = ext.reflected_derivative(zero, Point(x));
          fd_up += wu[j] * vu;
          fd_low += wl[j] * vl;
          vmax = std::max({vmax, std::abs(vu), std::abs(vl)});
        }
        row.mismatch += std::abs(fd_up - fd_low);
        row.rounding_floor += 64.0 * kEps * vmax * (wu_mass + wl_mass * std::max(1.0, weight_mass));
      }
      row.observed_order = std::numeric_limits<double>::quiet_NaN();
      if (!rows.empty()) {
        const auto& prev = rows.back();
        if (prev.mismatch > prev.rounding_floor && row.mismatch > row.rounding_floor)
          row.observed_order = std::log(prev.mismatch / row.mismatch) / std::log(prev.h / row.h);
      }
      rows.push_back(row);
    }

    BoundaryOrderSummary s;
    s.order = l;
    s.matched_order = l <= m;
    s.at_rounding = std::all_of(rows.begin(), rows.end(),
                                [](const BoundaryRow& r) { return r.mismatch <= r.rounding_floor; });
    s.min_observed_order = std::numeric_limits<double>::infinity();
    bool any_order = false;
    for (const auto& r : rows)
      if (!std::isnan(r.observed_order)) {
        s.min_observed_order = std::min(s.min_observed_order, r.observed_order);
        any_order = true;
      }
    if (s.matched_order) {
      if (s.at_rounding)
        s.passed = true;
      else if (any_order)
        s.passed = s.min_observed_order >= options.min_order;
      else
        s.passed = rows.back().mismatch <= rows.back().rounding_floor;
    } else {
      double derivative_mass = 0.0;
      const MultiIndex normal = MultiIndex::axis(d, d - 1, l);
      for (const auto& t : tangents) {
        std::copy(t.begin(), t.end(), x.begin());
        x[du - 1] = 0.0;
        derivative_mass += std::abs(base.derivative(normal, Point(x)));
      }
      s.analytic_jump = std::abs(reflection_moment(weights, l) - 1.0);
      s.normalized_jump = derivative_mass > 0.0 ? rows.back().mismatch / derivative_mass
                                                : std::numeric_limits<double>::quiet_NaN();
      s.passed = derivative_mass > 0.0 &&
                 std::abs(s.normalized_jump - s.analytic_jump) <= options.jump_rel_tol * s.analytic_jump;
    }
    if (!any_order) s.min_observed_order = std::numeric_limits<double>::quiet_NaN();
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    report.orders.push_back(s);
  }
  return report;
}

BoundaryMatchReport check_boundary_matching(const Field& field, int m,
                                            std::span<const double> h_values,
                                            std::span<const std::vector<double>> tangential_points,
                                            const BoundaryMatchOptions& options) {
  return check_boundary_matching(extend(field, hestenes_coefficients(m)), h_values,
                                 tangential_points, options);
}

// ---------------------------------------------------------------------------

ReproductionCheck check_polynomial_reproduction(int m, int degree, int dim, std::size_t points,
                                                std::uint64_t seed,
                                                std::optional<std::vector<double>> weights) {
  if (degree < 0 || degree > m) throw Error(ErrorCode::order, "reproduction needs 0 <= degree <= m");
  PolyBumpOptions opts;
  opts.dim = dim;
  opts.flat_extent = m + 2.0;  // chi == 1 wherever the reflections of x_d in (-1, 0) land
  opts.taper = 1.0;
  opts.smoothness = std::max(8, m);
  std::vector<double> monomial(static_cast<std::size_t>(degree) + 1, 0.0);
  monomial.back() = 1.0;
  const double cutoff = 1.0;
  const Field base = poly_times_bump_field(monomial, cutoff, opts);
  const Field bump = poly_times_bump_field({1.0}, cutoff, opts);
  const ExtendedField ext = weights ? ExtendedField::with_weights(base, m, *weights)
                                    : extend(base, hestenes_coefficients(m));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> tangential(-0.9 * cutoff, 0.9 * cutoff);
  std::uniform_real_distribution<double> normal(-1.0, 0.0);
  const auto du = static_cast<std::size_t>(dim);
  std::vector<double> x(du);
  ReproductionCheck out;
  out.m = m;
  out.degree = degree;
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j + 1 < du; ++j) x[j] = tangential(rng);
    double xd = normal(rng);
    if (xd == 0.0) xd = -0.5;
    x[du - 1] = 0.0;
    const double profile = bump(Point(x));
    x[du - 1] = xd;
    const double expected = std::pow(xd, degree) * profile;
    out.max_abs_error = std::max(out.max_abs_error, std::abs(ext(Point(x)) - expected));
    ++out.points;
  }
  return out;
}

// ---------------------------------------------------------------------------

ExtensionProfile::ExtensionProfile(const SuiteEntry& entry, const ExtendedField& ext,
                                   const QuadratureSpec& quad)
    : label_(entry.field.label()),
      m_(ext.order()),
      weights_(ext.weights().begin(), ext.weights().end()),
      rel_tol_(quad.rel_tol) {
  if (ext.dim() != entry.field.dim())
    throw Error(ErrorCode::dimension, "extension and suite field dimensions differ");
  check_reflection_reach(entry, m_);
  const Field lf = ext.as_field();
  const auto upper_domain = entry.domain(Side::upper);
  const auto lower_domain = entry.domain(Side::lower);
  indices_ = multi_indices_up_to(entry.field.dim(), m_);
  for (const auto& alpha : indices_) {
    upper_.push_back(make_derivative_sampler(entry.field, alpha, upper_domain, quad));
    lower_.push_back(make_derivative_sampler(lf, alpha, lower_domain, quad));
  }
}

ExtensionProfile::Value ExtensionProfile::denominator(double p) const {
  Value v;
  v.norm = -1.0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const auto up = upper_[i].norm(p);
    v.quadrature_levels = std::max(v.quadrature_levels, static_cast<int>(up.history.size()));
    if (up.value > v.norm) {
      v.norm = up.value;
      v.argmax = indices_[i];
    }
  }
  return v;
}

ExtensionProfile::Value ExtensionProfile::numerator(double p) const {
  Value v;
  v.norm = -1.0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const auto up = upper_[i].norm(p);
    const auto lo = lower_[i].norm(p);
    v.quadrature_levels = std::max({v.quadrature_levels, static_cast<int>(up.history.size()),
                                    static_cast<int>(lo.history.size())});
    const double top = std::max(up.value, lo.value);
    const double whole =
        top == 0.0 ? 0.0
                   : top * std::pow(std::pow(up.value / top, p) + std::pow(lo.value / top, p), 1.0 / p);
    if (whole > v.norm) {
      v.norm = whole;
      v.argmax = indices_[i];
    }
  }
  return v;
}

std::vector<PerPBoundRow> check_per_p_bound(const ExtensionProfile& profile,
                                            std::span<const double> p_values, double tol) {
  std::vector<PerPBoundRow> rows;
  const auto w = profile.weights();
  for (std::size_t i = 0; i < profile.indices().size(); ++i) {
    const auto& alpha = profile.indices()[i];
    for (double p : p_values) {
      PerPBoundRow row;
      row.field = profile.label();
      row.p = p;
      row.alpha = alpha;
      row.lower_norm = profile.lower(i, p).value;
      row.upper_norm = profile.upper(i, p).value;
      for (std::size_t k = 0; k < w.size(); ++k)
        row.constant += std::abs(w[k]) * std::pow(static_cast<double>(k + 1), alpha.normal() - 1.0 / p);
      row.ok = row.lower_norm <= row.constant * row.upper_norm + tol;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<PerPBoundRow> check_per_p_bound(const SuiteEntry& entry, const ExtendedField& ext,
                                            std::span<const double> p_values,
                                            const QuadratureSpec& quad, double tol) {
  return check_per_p_bound(ExtensionProfile(entry, ext, quad), p_values, tol);
}

// ---------------------------------------------------------------------------

bool OperatorNormEstimate::within_bound() const {
  return std::all_of(per_field_table.begin(), per_field_table.end(), [this](const FieldRatio& r) {
    return r.ratio <= theoretical_bound + tolerance;
  });
}

std::vector<OperatorNormEstimate> estimate_operator_norms(std::span<const ExtensionProfile> profiles,
                                                          std::span<const PsiSpec> psis,
                                                          const PGridSpec& pgrid,
                                                          const OperatorNormOptions& options) {
  if (profiles.empty()) throw Error(ErrorCode::config, "nothing to verify: the field suite is empty");
  for (const auto& psi : psis)
    if (!psi_validate(psi, 64, pgrid.p_cap).valid)
      throw Error(ErrorCode::positivity, "generating function '" + psi.label() + "' is not strictly positive");
  const int m = profiles.front().order();
  const auto coeffs = hestenes_coefficients(m);
  const Rational bound = operator_norm_bound(coeffs);

  std::vector<OperatorNormEstimate> out(psis.size());
  for (auto& est : out) {
    est.m = m;
    est.theoretical_bound = to_double(bound);
    est.theoretical_bound_exact = to_string(bound);
    est.tolerance = options.tolerance_factor * profiles.front().tolerance_basis();
    est.max_ratio = -1.0;
  }

  for (const auto& profile : profiles) {
    if (profile.order() != m) throw Error(ErrorCode::config, "profiles disagree on the order m");
    const auto numerator = [&profile](double p) {
      const auto v = profile.numerator(p);
      return NumeratorValue{v.norm, v.quadrature_levels};
    };
    const auto denominator = [&profile](double p) {
      const auto v = profile.denominator(p);
      return NumeratorValue{v.norm, v.quadrature_levels};
    };
    for (std::size_t i = 0; i < psis.size(); ++i) {
      auto& est = out[i];
      FieldRatio row;
      row.label = profile.label();
      row.numerator = sup_over_p(numerator, psis[i], pgrid);
      row.denominator = sup_over_p(denominator, psis[i], pgrid);
      if (!(row.denominator.value > 0.0))
        throw Error(ErrorCode::inconsistency,
                    "field '" + row.label + "' vanishes on the half-space; ratio undefined");
      row.ratio = row.numerator.value / row.denominator.value;

      if (row.ratio > est.theoretical_bound + est.tolerance && options.throw_on_violation) {
        const auto at = profile.numerator(row.numerator.argmax_p);
        char buf[320];
        std::snprintf(buf, sizeof buf,
                      "extension bound violated by field '%s' (psi %s): ratio %.17g > 1 + C(%d) = %s "
                      "at p=%.17g, alpha=%s",
                      row.label.c_str(), psis[i].label().c_str(), row.ratio, m,
                      est.theoretical_bound_exact.c_str(), row.numerator.argmax_p,
                      at.argmax.to_string().c_str());
        throw Error(ErrorCode::verification, buf);
      }
      if (row.ratio > est.max_ratio) {
        est.max_ratio = row.ratio;
        est.witness = row.label;
      }
      est.per_field_table.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<OperatorNormEstimate> estimate_operator_norms(std::span<const SuiteEntry> suite, int m,
                                                          std::span<const PsiSpec> psis,
                                                          const PGridSpec& pgrid,
                                                          const QuadratureSpec& quad,
                                                          const OperatorNormOptions& options) {
  if (suite.empty()) throw Error(ErrorCode::config, "nothing to verify: the field suite is empty");
  const auto coeffs = hestenes_coefficients(m);
  std::vector<ExtensionProfile> profiles;
  profiles.reserve(suite.size());
  for (const auto& entry : suite) {
    const ExtendedField ext = options.weights
                                  ? ExtendedField::with_weights(entry.field, m, *options.weights)
                                  : extend(entry.field, coeffs);
    profiles.emplace_back(entry, ext, quad);
  }
  return estimate_operator_norms(profiles, psis, pgrid, options);
}

OperatorNormEstimate estimate_operator_norm(std::span<const SuiteEntry> suite, int m,
                                            const PsiSpec& psi, const PGridSpec& pgrid,
                                            const QuadratureSpec& quad,
                                            const OperatorNormOptions& options) {
  return std::move(estimate_operator_norms(suite, m, std::span<const PsiSpec>(&psi, 1), pgrid, quad,
                                           options)
                       .front());
}

}  // namespace sgls
