#include <algorithm>
#include <cmath>
#include <random>

#include "sgls/errors.hpp"
#include "sgls/verify.hpp"

namespace sgls {

namespace {

std::vector<double> at_height(int dim, double tangential, double normal) {
  std::vector<double> c(static_cast<std::size_t>(dim), tangential);
  c.back() = normal;
  return c;
}

}  // namespace

std::vector<std::string> builtin_field_names() {
  return {"gaussian",        "shifted_gaussian", "narrow_gaussian",
          "sunken_gaussian", "poly_bump",        "interior_bump"};
}

SuiteEntry builtin_suite_entry(const std::string& name, int dim) {
  if (dim < 1 || dim > 3) throw Error(ErrorCode::dimension, "builtin suite fields support d in [1, 3]");
  if (name == "gaussian") return gaussian_field(dim, 1.0).relabeled(name);
  if (name == "shifted_gaussian")
    return gaussian_field(dim, 0.8, at_height(dim, 0.1, 0.5)).relabeled(name);
  if (name == "narrow_gaussian")
    return gaussian_field(dim, 0.4, at_height(dim, 0.0, 0.3)).relabeled(name);
  if (name == "sunken_gaussian")
    return gaussian_field(dim, 1.0, at_height(dim, 0.0, -0.6)).relabeled(name);
  if (name == "poly_bump") {
    PolyBumpOptions opts;
    opts.dim = dim;
    opts.flat_extent = 1.0;
    opts.taper = 2.0;
    return poly_times_bump_field({1.0, 1.0, -0.5}, 1.5, opts).relabeled(name);
  }
  if (name == "interior_bump") {
    auto radii = std::vector<double>(static_cast<std::size_t>(dim), 1.0);
    radii.back() = 0.5;
    return bump_field(at_height(dim, 0.0, 1.5), radii).relabeled(name);
  }
  throw Error(ErrorCode::config, "unknown builtin field '" + name + "'");
}

std::vector<SuiteEntry> curated_suite(int dim) {
  std::vector<SuiteEntry> out;
  for (const auto& name : builtin_field_names()) out.push_back(builtin_suite_entry(name, dim));
  return out;
}

bool VerificationReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

CheckResult coefficient_check(const HestenesCoefficients& coeffs) {
  CheckResult r{"coefficient_exactness", true, "", {}};
  for (int l = 0; l <= coeffs.m; ++l)
    if (reflection_moment(coeffs.c, l) != 1) r.passed = false;
  if (coeffs.c != lagrange_reflection_weights(coeffs.m)) r.passed = false;
  r.message = r.passed ? "exact solve satisfies every moment equation and matches the Lagrange form"
                       : "coefficient system residual is nonzero";
  r.metrics.push_back({"C", coeffs.constant_value()});
  r.metrics.push_back({"bound", to_double(operator_norm_bound(coeffs))});
  return r;
}

template <class Fn>
CheckResult guarded(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return CheckResult{name, false, std::string(error_code_name(e.code())) + ": " + e.what(), {}};
  }
}

}  // namespace

VerificationReport run_full_suite(const SuiteConfig& config) {
  if (config.fields.empty()) throw Error(ErrorCode::config, "nothing to verify: the field suite is empty");
  config.quad.validate();
  config.pgrid.validate(config.psi);
  const auto coeffs = hestenes_coefficients(config.m);
  auto weights = coeffs.weights();
  if (config.sabotage) weights[0] += 0.01;
  const int m = config.m;
  const int d = config.dim;
  const double tol = config.tolerance_factor * config.quad.rel_tol;

  std::vector<SuiteEntry> suite;
  for (const auto& name : config.fields) suite.push_back(builtin_suite_entry(name, d));
  // Samples shared by the per-p and operator-norm checks; built on first use.
  std::vector<ExtensionProfile> profiles;
  const auto ensure_profiles = [&] {
    if (!profiles.empty()) return;
    std::vector<ExtensionProfile> built;
    built.reserve(suite.size());
    for (const auto& entry : suite)
      built.emplace_back(entry, ExtendedField::with_weights(entry.field, m, weights), config.quad);
    profiles = std::move(built);
  };

  VerificationReport report{m, d, config.psi, to_double(operator_norm_bound(coeffs)),
                            to_string(operator_norm_bound(coeffs)), 0.0, "", {}, std::nullopt};
  report.checks.push_back(coefficient_check(coeffs));

  report.checks.push_back(guarded("polynomial_reproduction", [&] {
    CheckResult r{"polynomial_reproduction", true, "", {}};
    for (int l = 0; l <= m; ++l) {
      const auto c = check_polynomial_reproduction(m, l, d, config.reproduction_points,
                                                   config.seed + static_cast<std::uint64_t>(l), weights);
      r.metrics.push_back({"max_abs_error_degree_" + std::to_string(l), c.max_abs_error});
      if (!(c.max_abs_error <= 1e-12)) r.passed = false;
    }
    r.message = r.passed ? "x_d^l bump(x~) reproduced below the boundary for every l <= m"
                         : "extension does not reproduce polynomials of degree <= m";
    return r;
  }));

  report.checks.push_back(guarded("boundary_matching", [&] {
    CheckResult r{"boundary_matching", true, "", {}};
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<std::vector<double>> tangents(d > 1 ? 3 : 1);
    for (auto& t : tangents) {
      t.resize(static_cast<std::size_t>(d - 1));
      for (auto& v : t) v = u(rng);
    }
    const Field base = builtin_suite_entry("shifted_gaussian", d).field;
    const auto ext = ExtendedField::with_weights(base, m, weights);
    const auto b = check_boundary_matching(ext, config.h_values, tangents);
    for (const auto& o : b.orders) {
      const std::string tag = "order_" + std::to_string(o.order);
      if (o.matched_order)
        r.metrics.push_back({tag + "_min_observed_order", o.at_rounding ? kInfinity : o.min_observed_order});
      else {
        r.metrics.push_back({tag + "_normalized_jump", o.normalized_jump});
        r.metrics.push_back({tag + "_analytic_jump", o.analytic_jump});
      }
      if (!o.passed) {
        r.passed = false;
        r.message += (r.message.empty() ? "" : "; ") +
                     (o.matched_order ? "normal derivative of order " + std::to_string(o.order) +
                                            " does not match across x_d = 0"
                                      : "order " + std::to_string(o.order) +
                                            " jump differs from its analytic value");
      }
    }
    if (r.passed) r.message = "one-sided normal derivatives agree up to order m; order m+1 jump as predicted";
    return r;
  }));

  report.checks.push_back(guarded("scaling_identity", [&] {
    CheckResult r{"scaling_identity", true, "", {}};
    const Field g = gaussian_field(d, 1.0);
    double worst = 0.0;
    for (int k = 1; k <= std::max(3, m + 1); ++k)
      for (int ad = 0; ad <= 1; ++ad)
        for (double p : config.scaling_p) {
          const auto alpha = MultiIndex::axis(d, d - 1, ad);
          worst = std::max(worst, check_scaling_identity(g, k, alpha, p, config.quad).rel_error);
        }
    r.passed = worst <= tol;
    r.metrics.push_back({"max_rel_error", worst});
    r.metrics.push_back({"tolerance", tol});
    r.message = r.passed ? "||D^a g_k||_p == k^(a_d - 1/p) ||D^a f||_p" : "scaling identity discrepancy above tolerance";
    return r;
  }));

  report.checks.push_back(guarded("per_p_bound", [&] {
    CheckResult r{"per_p_bound", true, "", {}};
    const auto ps = config.pgrid.grid(config.psi);
    std::size_t rows = 0;
    std::size_t violations = 0;
    double worst_slack = -kInfinity;
    ensure_profiles();
    for (const auto& profile : profiles) {
      for (const auto& row : check_per_p_bound(profile, ps, tol)) {
        ++rows;
        worst_slack = std::max(worst_slack, row.lower_norm - row.constant * row.upper_norm);
        if (!row.ok) {
          ++violations;
          if (r.message.empty())
            r.message = "field '" + row.field + "' violates the per-p bound at p=" +
                        std::to_string(row.p) + ", alpha=" + row.alpha.to_string();
        }
      }
    }
    r.passed = violations == 0;
    r.metrics.push_back({"rows", static_cast<double>(rows)});
    r.metrics.push_back({"violations", static_cast<double>(violations)});
    r.metrics.push_back({"max_excess", worst_slack});
    if (r.passed) r.message = "||D^a Lf||_p(lower) <= sum |c_k| k^(a_d - 1/p) ||D^a f||_p(G) everywhere";
    return r;
  }));

  report.checks.push_back(guarded("operator_norm", [&] {
    CheckResult r{"operator_norm", true, "", {}};
    OperatorNormOptions opts;
    opts.tolerance_factor = config.tolerance_factor;
    opts.throw_on_violation = false;
    ensure_profiles();
    auto est = std::move(estimate_operator_norms(profiles, std::span(&config.psi, 1), config.pgrid, opts).front());
    double min_ratio = kInfinity;
    for (const auto& row : est.per_field_table) min_ratio = std::min(min_ratio, row.ratio);
    r.passed = est.within_bound() && min_ratio >= 1.0 - est.tolerance;
    r.metrics.push_back({"max_ratio", est.max_ratio});
    r.metrics.push_back({"min_ratio", min_ratio});
    r.metrics.push_back({"bound", est.theoretical_bound});
    r.message = r.passed ? "1 <= ||Lf||_S / ||f||_S <= 1 + C(m) for every suite field"
                         : (est.within_bound() ? "a ratio fell below 1" : "extension bound violated by '" + est.witness + "'");
    report.max_ratio = est.max_ratio;
    report.witness = est.witness;
    report.estimate = std::move(est);
    return r;
  }));

  return report;
}

}  // namespace sgls
