#include "sgls_cli/app.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sgls/errors.hpp>
#include <sgls/extension.hpp>
#include <sgls/parallel.hpp>
#include <sgls/report.hpp>
#include <sstream>

#include "CLI11.hpp"
#include "sgls_cli/config.hpp"

namespace sgls::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirEnv = "SGLS_OUTPUT_DIR";

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

// Command-line values; each applies only when the flag was given.
struct Flags {
  std::string config;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string out;
  bool csv = false;
  bool json = false;
  int m = 0;
  int dim = 1;
  std::string field;
  std::string grid;
  std::string psi_family;
  double psi_param = 0.0;
  double psi_a = 0.0;
  std::string psi_b;
  double rel_tol = 0.0;
  double p_cap = 0.0;
  int grid_points = 0;
  std::vector<std::string> fields;
  bool sabotage = false;
  std::string points;
  std::size_t random = 0;
  double radius = 0.0;

  // Every subcommand registers its own copy of a flag.
  std::map<std::string, std::vector<CLI::Option*>> given;

  bool has(const std::string& name) const {
    auto it = given.find(name);
    if (it == given.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [](const CLI::Option* o) { return o->count() > 0; });
  }
};

void common_options(CLI::App& cmd, Flags& f) {
  f.given["config"].push_back(
      cmd.add_option("--config", f.config, "Config file (key = value format)"));
  f.given["threads"].push_back(
      cmd.add_option("--threads", f.threads, "Worker cap, 0 = hardware concurrency"));
  f.given["seed"].push_back(cmd.add_option("--seed", f.seed, "Seed for randomized sample points"));
  f.given["out"].push_back(
      cmd.add_option("--out", f.out, "Output directory (default $SGLS_OUTPUT_DIR)"));
  f.given["csv"].push_back(cmd.add_flag("--csv", f.csv, "Also emit the CSV table"));
  f.given["json"].push_back(cmd.add_flag("--json", f.json, "Print the JSON document on stdout"));
}

void order_option(CLI::App& cmd, Flags& f) {
  f.given["m"].push_back(
      cmd.add_option("--m", f.m, "Smoothness order m")->check(CLI::Range(0, kMaxCoefficientOrder)));
}

void problem_options(CLI::App& cmd, Flags& f) {
  order_option(cmd, f);
  f.given["d"].push_back(
      cmd.add_option("--d", f.dim, "Dimension d")->check(CLI::Range(1, kMaxDim)));
  f.given["psi-family"].push_back(
      cmd.add_option("--psi-family", f.psi_family, "power | constant | grand")
          ->check(CLI::IsMember({"power", "constant", "grand"})));
  f.given["psi-param"].push_back(cmd.add_option("--psi-param", f.psi_param, "alpha, c or gamma"));
  f.given["psi-a"].push_back(cmd.add_option("--psi-a", f.psi_a, "Left end of the psi support"));
  f.given["psi-b"].push_back(
      cmd.add_option("--psi-b", f.psi_b, "Right end of the psi support, or inf"));
  f.given["rel-tol"].push_back(
      cmd.add_option("--rel-tol", f.rel_tol, "Quadrature relative tolerance"));
  f.given["p-cap"].push_back(cmd.add_option("--p-cap", f.p_cap, "Largest p searched when b = inf"));
  f.given["grid-points"].push_back(cmd.add_option("--grid-points", f.grid_points, "p-grid size"));
}

void field_options(CLI::App& cmd, Flags& f) {
  f.given["field"].push_back(cmd.add_option("--field", f.field, "Builtin field name"));
  f.given["grid"].push_back(
      cmd.add_option("--grid", f.grid, "Grid-sampled field file (CSV or binary)"));
}

RunConfig resolve(const Flags& f) {
  RunConfig c = f.has("config") ? load_config(f.config) : RunConfig{};
  if (f.has("threads")) c.threads = f.threads;
  if (f.has("seed")) c.seed = f.seed;
  if (f.has("out")) c.output_dir = f.out;
  if (f.has("csv")) c.csv = f.csv;
  if (f.has("m")) c.m = f.m;
  if (f.has("d")) c.dim = f.dim;
  if (f.has("field")) {
    c.field = FieldConfig{};
    c.field.name = f.field;
  }
  if (f.has("grid")) {
    c.field = FieldConfig{};
    c.field.kind = "grid";
    c.field.path = f.grid;
  }
  if (f.has("psi-family")) c.psi.family = f.psi_family;
  if (f.has("psi-param")) c.psi.parameter = f.psi_param;
  if (f.has("psi-a")) c.psi.a = f.psi_a;
  if (f.has("psi-b")) {
    if (f.psi_b == "inf") {
      c.psi.b = kInfinity;
    } else {
      try {
        std::size_t used = 0;
        c.psi.b = std::stod(f.psi_b, &used);
        if (used != f.psi_b.size()) throw std::invalid_argument(f.psi_b);
      } catch (const std::exception&) {
        throw Error(ErrorCode::usage, "--psi-b expects a number or inf, got '" + f.psi_b + "'");
      }
    }
  }
  if (f.has("rel-tol")) c.quad.rel_tol = f.rel_tol;
  if (f.has("p-cap")) c.pgrid.p_cap = f.p_cap;
  if (f.has("grid-points")) c.pgrid.grid_points = f.grid_points;
  if (f.has("fields")) c.fields = f.fields;
  if (f.has("sabotage")) c.sabotage = f.sabotage;
  if (f.has("points")) c.points = f.points;
  if (f.has("random")) c.random_points = f.random;
  if (f.has("radius")) c.radius = f.radius;
  validate(c);
  set_thread_limit(c.threads);
  return c;
}

// Empty when no directory was asked for.
std::string output_dir(const RunConfig& c) {
  std::string dir = c.output_dir;
  if (dir.empty())
    if (const char* env = std::getenv(kOutputDirEnv)) dir = env;
  if (!dir.empty()) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
      throw Error(ErrorCode::io, "cannot create output directory '" + dir + "': " + ec.message());
  }
  return dir;
}

std::string write_file(const std::string& dir, const std::string& name, const std::string& text) {
  const std::string path = (fs::path(dir) / name).string();
  std::ofstream o(path, std::ios::binary);
  if (!o || !(o << text) || !o.flush()) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  return path;
}

// One document for stdout plus the files a command leaves behind.
struct Outputs {
  std::string human;
  std::string json_name;
  std::string json;
  std::string csv_name;
  std::string csv;
};

void emit(const RunConfig& c, const Flags& f, const Outputs& o, std::ostream& out) {
  const std::string dir = output_dir(c);
  if (!dir.empty()) {
    std::vector<std::string> written{write_file(dir, o.json_name, o.json)};
    if (c.csv && !o.csv.empty()) written.push_back(write_file(dir, o.csv_name, o.csv));
    if (f.json) {
      out << o.json;
      return;
    }
    out << o.human;
    for (const auto& path : written) out << "wrote " << path << "\n";
    return;
  }
  if (f.json)
    out << o.json;
  else if (c.csv && !o.csv.empty())
    out << o.csv;
  else
    out << o.human;
}

// --- subcommands --------------------------------------------------------------

int cmd_coeffs(const Flags& f, std::ostream& out) {
  RunConfig c = resolve(f);
  const auto coeffs = hestenes_coefficients(c.m);
  std::ostringstream h;
  h << "m = " << coeffs.m << "\n";
  h << "k,c_k,decimal\n";
  std::ostringstream csv;
  csv << "k,c_k,decimal\n";
  for (std::size_t k = 0; k < coeffs.c.size(); ++k) {
    const auto& ck = coeffs.c[k];
    h << k + 1 << "," << to_string(ck) << "," << fmt6(to_double(ck)) << "\n";
    csv << k + 1 << "," << to_string(ck) << "," << format_double(to_double(ck)) << "\n";
  }
  const auto bound = operator_norm_bound(coeffs);
  h << "C(m) = " << to_string(coeffs.constant) << " (" << fmt6(coeffs.constant_value()) << ")\n";
  h << "bound 1 + C(m) = " << to_string(bound) << " (" << fmt6(to_double(bound)) << ")\n";
  emit(c, f, {h.str(), "coeffs.json", to_json(coeffs), "coeffs.csv", csv.str()}, out);
  return 0;
}

int cmd_norm(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = resolve(f);
  const PsiSpec psi = make_psi(c.psi);
  const SuiteEntry entry = make_field(c);
  const HalfSpaceDomain domain = entry.domain(Side::upper);
  const NormReport report = c.m == 0 ? gls_norm(entry.field, psi, domain, c.pgrid, c.quad)
                                     : sgls_norm(entry.field, c.m, psi, domain, c.pgrid, c.quad);
  std::ostringstream h;
  h << "field " << entry.field.label() << ", d = " << c.dim << ", m = " << c.m
    << ", psi = " << psi.label() << " on (" << fmt6(psi.a()) << ", " << fmt6(psi.b()) << ")\n";
  h << "value " << fmt6(report.value) << " at p = " << fmt6(report.argmax_p) << "\n";
  if (report.boundary_flag) h << "note: maximizer at the end of the searched range\n";
  if (report.lower_bound_only)
    h << "note: b = inf and maximizer at p_cap, value is a lower bound\n";
  h << "p,raw_norm,psi,ratio\n";
  for (const auto& row : report.per_p_table) {
    if (!row.ok) {
      h << fmt6(row.p) << ",failed,," << row.note << "\n";
      continue;
    }
    h << fmt6(row.p) << "," << fmt6(row.raw_norm) << "," << fmt6(row.psi) << "," << fmt6(row.ratio)
      << "\n";
  }
  const NormRun run{entry.field.label(), c.m, c.dim, psi, report};
  emit(c, f, {h.str(), "norm.json", to_json(run), "norm_per_p.csv", per_p_csv(report)}, out);
  if (report.degraded_coverage) {
    std::string failed;
    for (const auto& row : report.per_p_table)
      if (!row.ok) failed += (failed.empty() ? "" : " ") + fmt6(row.p);
    err << "error[" << error_code_name(ErrorCode::convergence)
        << "]: quadrature did not converge at p = " << failed
        << "; the reported sup covers the remaining p only\n";
    return 2;
  }
  return 0;
}

std::vector<std::vector<double>> read_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot read points file '" + path + "'");
  std::vector<std::vector<double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (pts.empty() && lineno == 1) continue;  // header
      throw Error(ErrorCode::io, path + " line " + std::to_string(lineno) + ": not a number");
    }
    if (static_cast<int>(row.size()) != dim)
      throw Error(ErrorCode::dimension, path + " line " + std::to_string(lineno) + ": expected " +
                                            std::to_string(dim) + " coordinates");
    pts.push_back(std::move(row));
  }
  return pts;
}

int cmd_extend_eval(const Flags& f, std::ostream& out) {
  RunConfig c = resolve(f);
  if (c.points.empty() && c.random_points == 0)
    throw Error(ErrorCode::usage, "extend-eval needs --points FILE or --random N");
  const SuiteEntry entry = make_field(c);
  const ExtendedField ext = extend(entry.field, hestenes_coefficients(c.m));
  const auto indices = multi_indices_up_to(c.dim, c.m);

  std::vector<std::vector<double>> pts;
  if (!c.points.empty()) {
    pts = read_points(c.points, c.dim);
  } else {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-c.radius, c.radius);
    pts.resize(c.random_points);
    for (auto& p : pts) {
      p.resize(static_cast<std::size_t>(c.dim));
      for (double& x : p) x = u(rng);
    }
  }

  std::ostringstream csv;
  for (int j = 0; j < c.dim; ++j) csv << (j ? "," : "") << "x" << j + 1;
  for (const auto& a : indices) {
    csv << ",";
    if (a.is_zero()) {
      csv << "Lf";
      continue;
    }
    csv << "D";
    for (int v : a.components()) csv << "_" << v;
  }
  csv << "\n";
  for (const auto& p : pts) {
    for (std::size_t j = 0; j < p.size(); ++j) csv << (j ? "," : "") << format_double(p[j]);
    for (const auto& a : indices) csv << "," << format_double(ext.derivative(a, p));
    csv << "\n";
  }
  const std::string dir = output_dir(c);
  if (dir.empty()) {
    out << csv.str();
  } else {
    out << "wrote " << write_file(dir, "extend_eval.csv", csv.str()) << "\n";
  }
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig c = resolve(f);
  SuiteConfig sc;
  sc.m = c.m;
  sc.dim = c.dim;
  sc.psi = make_psi(c.psi);
  sc.pgrid = c.pgrid;
  sc.quad = c.quad;
  sc.fields = c.fields;
  sc.seed = c.seed;
  sc.sabotage = c.sabotage;
  sc.tolerance_factor = c.tolerance_factor;
  const VerificationReport report = run_full_suite(sc);

  std::ostringstream h;
  for (const auto& check : report.checks)
    h << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.message << "\n";
  h << "max_ratio " << fmt6(report.max_ratio);
  if (!report.witness.empty()) h << " (" << report.witness << ")";
  h << ", bound 1 + C(m) = " << report.bound_exact << "\n";
  const std::string csv = report.estimate ? field_table_csv(*report.estimate) : std::string();
  emit(c, f, {h.str(), "verification.json", to_json(report), "field_table.csv", csv}, out);
  if (!report.passed()) {
    std::string failed;
    for (const auto& check : report.checks)
      if (!check.passed) failed += (failed.empty() ? "" : ", ") + check.name;
    err << "error[" << error_code_name(ErrorCode::verification) << "]: failed checks: " << failed
        << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Sobolev and grand Lebesgue norms on half-spaces, and the reflection extension operator",
      "sgls"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sgls 0.1.0");

  Flags f;
  auto* coeffs =
      app.add_subcommand("coeffs", "Reflection weights c_k, C(m) and the bound 1 + C(m)");
  common_options(*coeffs, f);
  order_option(*coeffs, f);

  auto* norm = app.add_subcommand("norm", "Grand Lebesgue (m = 0) or Sobolev grand Lebesgue norm");
  common_options(*norm, f);
  problem_options(*norm, f);
  field_options(*norm, f);

  auto* eval = app.add_subcommand("extend-eval", "Evaluate Lf and its derivatives up to order m");
  common_options(*eval, f);
  problem_options(*eval, f);
  field_options(*eval, f);
  f.given["points"].push_back(eval->add_option("--points", f.points, "CSV file of coordinates"));
  f.given["random"].push_back(eval->add_option("--random", f.random, "Number of random points"));
  f.given["radius"].push_back(
      eval->add_option("--radius", f.radius, "Random points lie in [-r, r]^d"));

  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  common_options(*verify, f);
  problem_options(*verify, f);
  f.given["fields"].push_back(
      verify->add_option("--fields", f.fields, "Builtin suite fields")->delimiter(','));
  f.given["sabotage"].push_back(verify->add_flag(
      "--sabotage", f.sabotage, "Test mode: perturb c_1 by 0.01 to show the checks catch it"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error[" << error_code_name(ErrorCode::usage) << "]: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (coeffs->parsed()) return cmd_coeffs(f, out);
    if (norm->parsed()) return cmd_norm(f, out, err);
    if (eval->parsed()) return cmd_extend_eval(f, out);
    return cmd_verify(f, out, err);
  } catch (const Error& e) {
    err << "error[" << error_code_name(e.code()) << "]: " << one_line(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "error[E_INTERNAL]: " << one_line(e.what()) << "\n";
  }
  return 2;
}

}  // namespace sgls::cli
