#pragma once

#include <iosfwd>

namespace sgls::cli {

/// Exit status: 0 success, 1 a verification check failed, 2 any other error.
/// Errors go to `err` as one line `error[E_CODE]: message`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sgls::cli
