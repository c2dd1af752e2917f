#include "sgls/psi.hpp"

#include <cmath>
#include <cstdio>

#include "sgls/errors.hpp"

namespace sgls {

namespace {

void check_support(double a, double b) {
  if (!(a >= 1.0) || std::isnan(b) || !(b > a) || a == kInfinity) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "invalid support interval (a=%g, b=%g): need 1 <= a < b", a, b);
    throw Error(ErrorCode::support_interval, buf);
  }
}

std::string format_label(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

}  // namespace

std::string to_string(PsiFamily family) {
  switch (family) {
    case PsiFamily::power: return "power";
    case PsiFamily::constant: return "constant";
    case PsiFamily::grand: return "grand";
    case PsiFamily::custom: return "custom";
  }
  return "custom";
}

PsiSpec::PsiSpec(double a, double b, Function fn, std::string label)
    : PsiSpec(a, b, std::move(fn), PsiFamily::custom, std::nan(""), std::move(label)) {}

PsiSpec::PsiSpec(double a, double b, Function fn, PsiFamily family, double parameter,
                 std::string label)
    : a_(a), b_(b), fn_(std::move(fn)), family_(family), parameter_(parameter),
      label_(std::move(label)) {
  check_support(a_, b_);
  if (!fn_) throw Error(ErrorCode::config, "generating function is empty");
}

PsiSpec make_power_psi(double alpha, double a, double b) {
  check_support(a, b);
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::positivity, "power family needs alpha > 0");
  return PsiSpec(a, b, [alpha](double p) { return std::pow(p, alpha); }, PsiFamily::power,
                 alpha, format_label("p^%g", alpha));
}

PsiSpec make_constant_psi(double c, double a, double b) {
  check_support(a, b);
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorCode::positivity, "constant generating function must be > 0");
  return PsiSpec(a, b, [c](double) { return c; }, PsiFamily::constant, c,
                 format_label("%g", c));
}

PsiSpec make_grand_psi(double gamma, double a, double b) {
  check_support(a, b);
  if (b == kInfinity)
    throw Error(ErrorCode::unsupported_family, "grand family (b-p)^(-gamma) needs finite b");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw Error(ErrorCode::positivity, "grand family needs gamma > 0");
  return PsiSpec(a, b, [b, gamma](double p) { return std::pow(b - p, -gamma); },
                 PsiFamily::grand, gamma, format_label("(b-p)^-%g", gamma));
}

PsiValidation psi_validate(const PsiSpec& psi, std::size_t samples, double p_cap) {
  PsiValidation out;
  if (samples < 2) samples = 2;
  // Stay strictly inside the open interval; a cap below b is itself a valid sample.
  const double lo = psi.a() * (1.0 + 1e-9);
  const double hi = (p_cap < psi.b()) ? p_cap : psi.b() - 1e-9 * psi.b();
  out.valid = hi > lo;
  out.min_value = kInfinity;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(samples - 1);
    const double p = lo * std::pow(hi / lo, t);
    const double v = psi(p);
    ++out.samples;
    if (std::isnan(v) || v < out.min_value) {
      out.min_value = v;
      out.argmin_p = p;
    }
    if (!(v > 0.0)) out.valid = false;
  }
  return out;
}

}  // namespace sgls
