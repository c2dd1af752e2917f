#include "sgls/errors.hpp"

#include <cstdio>

namespace sgls {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::support_interval: return "E_SUPPORT";
    case ErrorCode::positivity: return "E_POSITIVITY";
    case ErrorCode::unsupported_family: return "E_FAMILY";
    case ErrorCode::order: return "E_ORDER";
    case ErrorCode::out_of_domain: return "E_OUT_OF_DOMAIN";
    case ErrorCode::convergence: return "E_CONVERGENCE";
    case ErrorCode::exponent: return "E_EXPONENT";
    case ErrorCode::domain: return "E_DOMAIN";
    case ErrorCode::inconsistency: return "E_INCONSISTENT";
    case ErrorCode::size: return "E_SIZE";
    case ErrorCode::dimension: return "E_DIMENSION";
    case ErrorCode::config: return "E_CONFIG";
    case ErrorCode::io: return "E_IO";
    case ErrorCode::usage: return "E_USAGE";
    case ErrorCode::verification: return "E_VERIFY";
  }
  return "E_UNKNOWN";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

namespace {
std::string convergence_message(double coarse, double fine, int refinements) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "quadrature did not converge after %d refinements "
                "(last estimates %.17g and %.17g)",
                refinements, coarse, fine);
  return buf;
}
}  // namespace

ConvergenceError::ConvergenceError(double coarse, double fine, int refinements)
    : Error(ErrorCode::convergence, convergence_message(coarse, fine, refinements)),
      coarse_(coarse),
      fine_(fine),
      refinements_(refinements) {}

}  // namespace sgls
