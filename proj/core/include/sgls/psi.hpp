#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>

namespace sgls {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class PsiFamily { power, constant, grand, custom };

std::string to_string(PsiFamily family);

/// Generating function psi > 0 supported on the open interval (a, b), 1 <= a < b <= inf.
///
/// Immutable once built; evaluation is safe from any number of threads.
class PsiSpec {
 public:
  using Function = std::function<double(double)>;

  /// Custom generating function. Positivity is not checked here; see psi_validate().
  PsiSpec(double a, double b, Function fn, std::string label = "custom");

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  bool unbounded_support() const noexcept { return b_ == kInfinity; }
  PsiFamily family() const noexcept { return family_; }
  /// alpha, c or gamma for the builtin families; NaN for custom.
  double parameter() const noexcept { return parameter_; }
  const std::string& label() const noexcept { return label_; }

  double operator()(double p) const { return fn_(p); }

 private:
  friend PsiSpec make_power_psi(double, double, double);
  friend PsiSpec make_constant_psi(double, double, double);
  friend PsiSpec make_grand_psi(double, double, double);

  PsiSpec(double a, double b, Function fn, PsiFamily family, double parameter,
          std::string label);

  double a_;
  double b_;
  Function fn_;
  PsiFamily family_;
  double parameter_;
  std::string label_;
};

/// psi(p) = p^alpha on (a, b). b may be kInfinity.
PsiSpec make_power_psi(double alpha, double a, double b);

/// psi(p) = c on (a, b).
PsiSpec make_constant_psi(double c, double a, double b);

/// psi(p) = (b - p)^(-gamma) on (a, b); requires finite b.
PsiSpec make_grand_psi(double gamma, double a, double b);

struct PsiValidation {
  double min_value = 0.0;
  double argmin_p = 0.0;
  std::size_t samples = 0;
  bool valid = false;
};

/// Samples psi on a geometric grid over (a, min(b, p_cap)) and flags any
/// non-positive (or non-finite-and-negative) sample. Never throws for a bad psi.
PsiValidation psi_validate(const PsiSpec& psi, std::size_t samples, double p_cap);

}  // namespace sgls
