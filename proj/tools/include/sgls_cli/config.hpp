#pragma once

#include <cstdint>
#include <optional>
#include <sgls/field.hpp>
#include <sgls/norms.hpp>
#include <sgls/psi.hpp>
#include <sgls/quadrature.hpp>
#include <sgls/verify.hpp>
#include <string>
#include <vector>

namespace sgls::cli {

inline constexpr int kSchemaVersion = 1;

struct PsiConfig {
  std::string family = "power";  // power | constant | grand
  double parameter = 0.5;        // alpha, c or gamma
  double a = 1.5;
  double b = 8.0;  // kInfinity for "inf"
};

/// What `norm` and `extend-eval` act on.
struct FieldConfig {
  std::string kind = "builtin";   // builtin | gaussian | constant | bump | grid
  std::string name = "gaussian";  // builtin
  double scale = 1.0;             // gaussian
  double amplitude = 1.0;         // gaussian
  double value = 1.0;             // constant
  std::vector<double> center;     // gaussian, bump; empty means the origin
  std::vector<double> radii;      // bump
  int smoothness = 8;             // bump
  std::string path;               // grid
};

struct BoxConfig {
  std::vector<double> lower;
  std::vector<double> upper;
};

struct RunConfig {
  int m = 1;
  int dim = 1;
  unsigned threads = 0;
  std::uint64_t seed = 20240601;
  PsiConfig psi;
  FieldConfig field;
  std::optional<BoxConfig> box;
  std::optional<double> lower_depth;
  PGridSpec pgrid{};
  QuadratureSpec quad{4, 8, 1e-6, 8};
  // verify
  std::vector<std::string> fields = builtin_field_names();
  double tolerance_factor = 10.0;
  bool sabotage = false;
  // extend-eval
  std::string points;
  std::size_t random_points = 0;
  double radius = 2.0;
  // output
  std::string output_dir;
  bool csv = false;
};

/// Parses the key = value format; E_CONFIG on syntax errors, unknown keys,
/// wrong types or a missing / unsupported schema_version.
RunConfig parse_config(const std::string& text);
/// E_IO when the file cannot be read.
RunConfig load_config(const std::string& path);
/// Fixed key order, doubles at 17 significant digits; parse_config(to_canonical(c)) == c.
std::string to_canonical(const RunConfig& config);

/// Checks every module precondition; E_CONFIG naming the offending key.
void validate(const RunConfig& config);

PsiSpec make_psi(const PsiConfig& psi);
/// Field plus the truncation the config asks for (builtins bring their own).
SuiteEntry make_field(const RunConfig& config);

}  // namespace sgls::cli
