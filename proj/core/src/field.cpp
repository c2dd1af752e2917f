#include "sgls/field.hpp"

#include <algorithm>
#include <cmath>

#include "poly.hpp"
#include "sgls/errors.hpp"

namespace sgls {

using detail::binomial;
using detail::poly_derivative;

Field::Field(std::string label, int dim, int max_order, Derivative derivative,
             std::optional<DecayCertificate> decay) {
  if (dim < 1 || dim > kMaxDim)
    throw Error(ErrorCode::dimension, "field dimension must be in [1, " + std::to_string(kMaxDim) + "]");
  if (max_order < 0) throw Error(ErrorCode::order, "field max order must be >= 0");
  if (!derivative) throw Error(ErrorCode::config, "field has no evaluator");
  state_ = std::make_shared<const State>(State{std::move(label), dim, max_order,
                                               std::move(derivative), std::move(decay),
                                               MultiIndex::zero(dim)});
}

double Field::derivative(const MultiIndex& alpha, Point x) const {
  const State& s = *state_;
  if (alpha.dim() != s.dim || static_cast<int>(x.size()) != s.dim)
    throw Error(ErrorCode::dimension, "field '" + s.label + "' is " + std::to_string(s.dim) +
                                          "-dimensional");
  if (alpha.order() > s.max_order)
    throw Error(ErrorCode::order, "field '" + s.label + "' provides derivatives up to order " +
                                      std::to_string(s.max_order) + ", requested " +
                                      alpha.to_string());
  return s.derivative(alpha, x);
}

double Field::decay_radius(double tail_tol) const {
  if (!state_->decay)
    throw Error(ErrorCode::domain,
                "field '" + state_->label + "' has no decay certificate; supply a truncation box");
  return state_->decay->radius(tail_tol);
}

Field Field::scaled(double lambda) const {
  auto inner = state_;
  return Field(state_->label, state_->dim, state_->max_order,
               [inner, lambda](const MultiIndex& a, Point x) {
                 return lambda * inner->derivative(a, x);
               },
               state_->decay);
}

Field Field::relabeled(std::string label) const {
  Field copy = *this;
  auto s = std::make_shared<State>(*state_);
  s->label = std::move(label);
  copy.state_ = std::move(s);
  return copy;
}

// ---------------------------------------------------------------------------

namespace {

// n-th derivative of exp(-u^2/2) divided by exp(-u^2/2).
double hermite_factor(int n, double u) {
  double prev = 1.0;
  if (n == 0) return 1.0;
  double cur = u;
  for (int k = 1; k < n; ++k) {
    const double next = u * cur - static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return (n % 2 == 0) ? cur : -cur;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// (1 - s^2)^(K+1) as a polynomial in s.
std::vector<double> bump_polynomial(int smoothness) {
  const int e = smoothness + 1;
  std::vector<double> c(static_cast<std::size_t>(2 * e + 1), 0.0);
  for (int j = 0; j <= e; ++j)
    c[static_cast<std::size_t>(2 * j)] = ((j % 2) ? -1.0 : 1.0) * binomial(e, j);
  return c;
}

double bump_derivative(const std::vector<double>& poly, int n, double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return poly_derivative(poly, n, s);
}

// Smoothstep S_K: 0 at u=0, 1 at u=1, first K derivatives vanish at both ends.
std::vector<double> smoothstep_polynomial(int smoothness) {
  const int k = smoothness;
  std::vector<double> c(static_cast<std::size_t>(2 * k + 2), 0.0);
  for (int j = 0; j <= k; ++j)
    c[static_cast<std::size_t>(k + 1 + j)] =
        ((j % 2) ? -1.0 : 1.0) * binomial(k + j, j) * binomial(2 * k + 1, k - j);
  return c;
}

}  // namespace

Field gaussian_field(int dim, double scale, std::vector<double> center, double amplitude,
                     int max_order) {
  if (!(scale > 0.0)) throw Error(ErrorCode::config, "gaussian scale must be > 0");
  if (center.empty()) center.assign(static_cast<std::size_t>(std::max(dim, 0)), 0.0);
  if (static_cast<int>(center.size()) != dim)
    throw Error(ErrorCode::dimension, "gaussian center has wrong dimension");
  const double reach = max_abs(center);
  DecayCertificate decay{[reach, scale](double tol) {
    tol = std::clamp(tol, 1e-300, 0.5);
    return reach + scale * (std::sqrt(2.0 * std::log(1.0 / tol)) + 2.0);
  }};
  auto deriv = [center, scale, amplitude](const MultiIndex& alpha, Point x) {
    double r2 = 0.0;
    double factor = amplitude;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double u = (x[j] - center[j]) / scale;
      r2 += u * u;
      const int n = alpha.components()[j];
      if (n > 0) factor *= hermite_factor(n, u) / std::pow(scale, n);
    }
    return factor * std::exp(-0.5 * r2);
  };
  return Field("gaussian", dim, max_order, std::move(deriv), decay);
}

Field constant_field(int dim, double value) {
  return Field("constant", dim, 64, [value](const MultiIndex& alpha, Point) {
    return alpha.is_zero() ? value : 0.0;
  });
}

Field bump_field(std::vector<double> center, std::vector<double> radii, int smoothness) {
  if (center.empty() || center.size() != radii.size())
    throw Error(ErrorCode::dimension, "bump center and radii must have equal dimension");
  if (smoothness < 0) throw Error(ErrorCode::order, "bump smoothness must be >= 0");
  double reach = 0.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0)) throw Error(ErrorCode::config, "bump radii must be > 0");
    reach = std::max(reach, std::abs(center[j]) + radii[j]);
  }
  auto poly = bump_polynomial(smoothness);
  DecayCertificate decay{[reach](double) { return reach; }};
  const int dim = static_cast<int>(center.size());
  return Field("bump", dim, smoothness,
               [center, radii, poly](const MultiIndex& alpha, Point x) {
                 double v = 1.0;
                 for (std::size_t j = 0; j < x.size() && v != 0.0; ++j) {
                   const int n = alpha.components()[j];
                   v *= bump_derivative(poly, n, (x[j] - center[j]) / radii[j]) /
                        std::pow(radii[j], n);
                 }
                 return v;
               },
               decay);
}

Field poly_times_bump_field(std::vector<double> coeffs, double cutoff_radius,
                            const PolyBumpOptions& options) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  if (static_cast<int>(coeffs.size()) - 1 > kMaxPolynomialDegree)
    throw Error(ErrorCode::order, "polynomial degree exceeds " +
                                      std::to_string(kMaxPolynomialDegree));
  if (!(cutoff_radius > 0.0)) throw Error(ErrorCode::config, "cutoff radius must be > 0");
  if (!(options.flat_extent > 0.0) || !(options.taper > 0.0))
    throw Error(ErrorCode::config, "normal cutoff needs flat_extent > 0 and taper > 0");
  const int k = options.smoothness;
  if (k < 0) throw Error(ErrorCode::order, "smoothness must be >= 0");

  auto bump = bump_polynomial(k);
  auto step = smoothstep_polynomial(k);
  const double flat = options.flat_extent;
  const double taper = options.taper;

  // n-th derivative of the even cutoff chi at t.
  auto chi = [step, flat, taper](int n, double t) {
    const double sign = (t < 0.0 && (n % 2)) ? -1.0 : 1.0;
    const double r = std::abs(t);
    if (r <= flat) return n == 0 ? 1.0 : 0.0;
    if (r >= flat + taper) return 0.0;
    const double u = (r - flat) / taper;
    if (n == 0) return 1.0 - poly_derivative(step, 0, u);
    return -sign * poly_derivative(step, n, u) / std::pow(taper, n);
  };

  const double reach = std::max(cutoff_radius, flat + taper);
  DecayCertificate decay{[reach](double) { return reach; }};
  return Field("poly_bump", options.dim, k,
               [coeffs, bump, chi, cutoff_radius](const MultiIndex& alpha, Point x) {
                 const std::size_t d = x.size();
                 double v = 1.0;
                 for (std::size_t j = 0; j + 1 < d && v != 0.0; ++j) {
                   const int n = alpha.components()[j];
                   v *= bump_derivative(bump, n, x[j] / cutoff_radius) /
                        std::pow(cutoff_radius, n);
                 }
                 if (v == 0.0) return 0.0;
                 const double t = x[d - 1];
                 const int n = alpha.normal();
                 double normal = 0.0;
                 for (int i = 0; i <= n; ++i)
                   normal += binomial(n, i) * poly_derivative(coeffs, i, t) * chi(n - i, t);
                 return v * normal;
               },
               decay);
}

// ---------------------------------------------------------------------------

std::vector<Box> HalfSpaceDomain::regions(const Field& field, double tail_tol) const {
  if (field.dim() != dim)
    throw Error(ErrorCode::dimension, "domain and field dimensions differ");
  const auto d = static_cast<std::size_t>(dim);
  Box upper;
  Box lower;
  if (truncation_box) {
    if (truncation_box->dim() != dim)
      throw Error(ErrorCode::dimension, "truncation box has wrong dimension");
    std::vector<double> lo = truncation_box->lower;
    std::vector<double> hi = truncation_box->upper;
    lo[d - 1] = std::max(lo[d - 1], 0.0);
    if (!(hi[d - 1] > lo[d - 1]))
      throw Error(ErrorCode::domain, "truncation box does not meet the upper half-space");
    upper = Box(lo, hi);
    const double depth = lower_depth.value_or(hi[d - 1]);
    if (!(depth > 0.0)) throw Error(ErrorCode::domain, "lower depth must be > 0");
    std::vector<double> llo = lo;
    std::vector<double> lhi = hi;
    llo[d - 1] = -depth;
    lhi[d - 1] = 0.0;
    lower = Box(llo, lhi);
  } else {
    const double r = field.decay_radius(tail_tol);
    std::vector<double> lo(d, -r);
    std::vector<double> hi(d, r);
    lo[d - 1] = 0.0;
    upper = Box(lo, hi);
    lo[d - 1] = -(lower_depth ? *lower_depth : r);
    hi[d - 1] = 0.0;
    lower = Box(lo, hi);
  }
  switch (side) {
    case Side::upper: return {upper};
    case Side::lower: return {lower};
    case Side::whole: return {upper, lower};
  }
  return {upper};
}

}  // namespace sgls
