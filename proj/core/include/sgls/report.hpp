#pragma once

#include <string>

#include "sgls/extension.hpp"
#include "sgls/norms.hpp"
#include "sgls/psi.hpp"
#include "sgls/verify.hpp"

namespace sgls {

// JSON output is deterministic: fixed key order, doubles at 17 significant
// digits, non-finite values as the strings "inf", "-inf", "nan".

/// A norm report labelled with what was measured.
struct NormRun {
  std::string field;
  int m = 0;
  int dim = 1;
  PsiSpec psi;
  NormReport report;
};

/// %.17g, or inf / -inf / nan.
std::string format_double(double v);

std::string to_json(const PsiSpec& psi);
std::string to_json(const NormReport& report);
/// {field, m, d, psi, report}
std::string to_json(const NormRun& run);
/// {m, c:[...], C, bound} with fractions as strings, plus decimal mirrors.
std::string to_json(const HestenesCoefficients& coeffs);
/// {m, psi, bound, max_ratio, witness, checks:[{name, status, details}]}
std::string to_json(const VerificationReport& report);

/// Header `p,raw_norm,psi,ratio`.
std::string per_p_csv(const NormReport& report);
/// Header `field,ratio,argmax_p,bound`.
std::string field_table_csv(const OperatorNormEstimate& estimate);

}  // namespace sgls
