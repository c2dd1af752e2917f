#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sgls {

enum class ErrorCode {
  support_interval,
  positivity,
  unsupported_family,
  order,
  out_of_domain,
  convergence,
  exponent,
  domain,
  inconsistency,
  size,
  dimension,
  config,
  io,
  usage,
  verification,
};

/// Stable machine-readable tag, e.g. "E_CONVERGENCE".
std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when two successive quadrature refinements never agree.
class ConvergenceError : public Error {
 public:
  ConvergenceError(double coarse, double fine, int refinements);

  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }
  int refinements() const noexcept { return refinements_; }

 private:
  double coarse_;
  double fine_;
  int refinements_;
};

}  // namespace sgls
