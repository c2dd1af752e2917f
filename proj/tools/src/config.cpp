#include "sgls_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sgls/errors.hpp>
#include <sstream>

#include "json.hpp"

namespace sgls::cli {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorCode::config, message); }

// --- text to tree -------------------------------------------------------------
//
// Grammar (a small TOML subset):
//   document  := { blank | comment | section | assignment }
//   section   := '[' ident ']'
//   assignment:= ident '=' value
//   value     := string | number | true | false | array | table
//   array     := '[' [value {',' value}] [','] ']'     (may span lines)
//   table     := '{' [ident '=' value {',' ident '=' value}] '}'

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  Json document() {
    Json root = Json::object();
    Json* target = &root;
    std::string section;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        skip_spaces();
        section = ident();
        skip_spaces();
        expect(']');
        end_of_statement();
        if (root.contains(section)) error("duplicate section [" + section + "]");
        root[section] = Json::object();
        target = &root[section];
        continue;
      }
      const std::string key = ident();
      skip_spaces();
      expect('=');
      skip_spaces();
      Json v = value();
      if (target->contains(key))
        error("duplicate key '" + (section.empty() ? key : section + "." + key) + "'");
      (*target)[key] = std::move(v);
      end_of_statement();
    }
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail("config line " + std::to_string(line_) + ": " + what);
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return at_end() ? '\0' : s_[pos_]; }

  void expect(char c) {
    if (peek() != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#')
      while (!at_end() && peek() != '\n') ++pos_;
  }

  // Whitespace, comments and newlines (inside arrays and between statements).
  void skip_blank_lines() {
    while (true) {
      skip_spaces();
      skip_comment();
      if (peek() != '\n') return;
      ++pos_;
      ++line_;
    }
  }

  void end_of_statement() {
    skip_spaces();
    skip_comment();
    if (at_end()) return;
    if (peek() != '\n') error("unexpected text after value");
    ++pos_;
    ++line_;
  }

  std::string ident() {
    const std::size_t start = pos_;
    while (!at_end() &&
           (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '-'))
      ++pos_;
    if (pos_ == start) error("expected a key");
    return s_.substr(start, pos_ - start);
  }

  Json value() {
    const char c = peek();
    if (c == '"') return string();
    if (c == '[') return array();
    if (c == '{') return table();
    if (s_.compare(pos_, 4, "true") == 0) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  Json string() {
    expect('"');
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') error("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (at_end()) error("unterminated string");
      switch (s_[pos_++]) {
        case '"':
          out += '"';
          break;
        case '\\':
          out += '\\';
          break;
        case 'n':
          out += '\n';
          break;
        case 't':
          out += '\t';
          break;
        default:
          error("unknown escape in string");
      }
    }
    return out;
  }

  Json number() {
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                         peek() == '-' || peek() == '.'))
      ++pos_;
    const std::string tok = s_.substr(start, pos_ - start);
    if (tok.empty()) error("expected a value");
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    if (tok.find_first_of(".eE") == std::string::npos) {
      std::int64_t i = 0;
      auto [ptr, ec] = std::from_chars(first, last, i);
      if (ec == std::errc() && ptr == last) return i;
    }
    double d = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, d);
    if (ec != std::errc() || ptr != last || !std::isfinite(d))
      error("'" + tok + "' is not a number (use the string \"inf\" for infinity)");
    return d;
  }

  Json array() {
    expect('[');
    Json out = Json::array();
    while (true) {
      skip_blank_lines();
      if (peek() == ']') break;
      out.push_back(value());
      skip_blank_lines();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != ']') error("expected ',' or ']' in array");
    }
    ++pos_;
    return out;
  }

  Json table() {
    expect('{');
    Json out = Json::object();
    skip_spaces();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      skip_spaces();
      const std::string key = ident();
      skip_spaces();
      expect('=');
      skip_spaces();
      if (out.contains(key)) error("duplicate key '" + key + "' in inline table");
      out[key] = value();
      skip_spaces();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      if (peek() != '}') error("expected ',' or '}' in inline table");
      ++pos_;
      return out;
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

// --- tree to RunConfig --------------------------------------------------------

class Reader {
 public:
  Reader(const Json& table, std::string scope) : t_(table), scope_(std::move(scope)) {
    if (!t_.is_object()) fail(scope_ + " must be a table");
  }

  /// E_CONFIG for any key nobody asked for.
  void done() const {
    for (const auto& [key, _] : t_.items())
      if (!used_.count(key)) fail("unknown key '" + name(key) + "'");
  }

  bool has(const std::string& key) const { return t_.contains(key); }

  const Json* get(const std::string& key) {
    used_.insert(key);
    auto it = t_.find(key);
    return it == t_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = get(key)) out = as_number(*v, key);
  }

  void bound(const std::string& key, double& out) {
    if (const Json* v = get(key)) {
      if (v->is_string() && v->get<std::string>() == "inf") {
        out = kInfinity;
        return;
      }
      out = as_number(*v, key);
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Json* v = get(key)) {
      if (!v->is_number_integer()) fail(name(key) + " must be an integer");
      const auto i = v->get<std::int64_t>();
      if constexpr (std::is_unsigned_v<Int>) {
        if (i < 0) fail(name(key) + " must be >= 0");
      }
      out = static_cast<Int>(i);
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = get(key)) {
      if (!v->is_boolean()) fail(name(key) + " must be true or false");
      out = v->get<bool>();
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const Json* v = get(key)) {
      if (!v->is_string()) fail(name(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const Json* v = get(key)) {
      if (!v->is_array()) fail(name(key) + " must be an array of numbers");
      out.clear();
      for (const auto& e : *v) out.push_back(as_number(e, key));
    }
  }

  void texts(const std::string& key, std::vector<std::string>& out) {
    if (const Json* v = get(key)) {
      if (!v->is_array()) fail(name(key) + " must be an array of strings");
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_string()) fail(name(key) + " must be an array of strings");
        out.push_back(e.get<std::string>());
      }
    }
  }

  std::string name(const std::string& key) const {
    return scope_.empty() ? key : scope_ + "." + key;
  }

 private:
  double as_number(const Json& v, const std::string& key) const {
    if (!v.is_number()) fail(name(key) + " must be a number");
    return v.get<double>();
  }

  const Json& t_;
  std::string scope_;
  std::set<std::string> used_;
};

const char* psi_parameter_key(const std::string& family) {
  if (family == "power") return "alpha";
  if (family == "constant") return "c";
  if (family == "grand") return "gamma";
  fail("psi.family must be \"power\", \"constant\" or \"grand\", got \"" + family + "\"");
}

void read_psi(const Json& j, PsiConfig& psi) {
  Reader r(j, "psi");
  r.text("family", psi.family);
  r.number(psi_parameter_key(psi.family), psi.parameter);
  r.number("a", psi.a);
  r.bound("b", psi.b);
  r.done();
}

void read_field(const Json& j, FieldConfig& f) {
  Reader r(j, "field");
  r.text("kind", f.kind);
  if (f.kind == "builtin") {
    r.text("name", f.name);
  } else if (f.kind == "gaussian") {
    r.number("scale", f.scale);
    r.number("amplitude", f.amplitude);
    r.numbers("center", f.center);
  } else if (f.kind == "constant") {
    r.number("value", f.value);
  } else if (f.kind == "bump") {
    r.numbers("center", f.center);
    r.numbers("radii", f.radii);
    r.integer("smoothness", f.smoothness);
  } else if (f.kind == "grid") {
    r.text("path", f.path);
  } else {
    fail("field.kind must be builtin, gaussian, constant, bump or grid, got \"" + f.kind + "\"");
  }
  r.done();
}

// --- RunConfig to text --------------------------------------------------------

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + num(v[i]);
  return out + "]";
}

std::string list(const std::vector<std::string>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + quoted(v[i]);
  return out + "]";
}

template <class Fn>
void wrap(const std::string& key, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::config) fail(key + ": " + e.what());
    fail(key + ": " + e.what() + " [" + std::string(error_code_name(e.code())) + "]");
  }
}

void need_dim(const std::vector<double>& v, int dim, const std::string& key) {
  if (static_cast<int>(v.size()) != dim)
    fail(key + " needs " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  const Json root = Parser(text).document();
  if (!root.contains("schema_version")) fail("missing schema_version");
  RunConfig c;
  Reader r(root, "");
  int version = 0;
  r.integer("schema_version", version);
  if (version != kSchemaVersion)
    fail("unsupported schema_version " + std::to_string(version) + " (expected " +
         std::to_string(kSchemaVersion) + ")");
  r.integer("m", c.m);
  r.integer("d", c.dim);
  r.integer("threads", c.threads);
  r.integer("seed", c.seed);
  if (const Json* j = r.get("psi")) read_psi(*j, c.psi);
  if (const Json* j = r.get("field")) read_field(*j, c.field);
  if (const Json* j = r.get("box")) {
    Reader b(*j, "box");
    c.box.emplace();
    b.numbers("lower", c.box->lower);
    b.numbers("upper", c.box->upper);
    b.done();
  }
  if (r.has("lower_depth")) {
    double depth = 0.0;
    r.number("lower_depth", depth);
    c.lower_depth = depth;
  }
  r.texts("fields", c.fields);
  r.number("tolerance_factor", c.tolerance_factor);
  r.boolean("sabotage", c.sabotage);
  if (const Json* j = r.get("pgrid")) {
    Reader p(*j, "pgrid");
    p.number("p_min_offset", c.pgrid.p_min_offset);
    p.number("p_cap", c.pgrid.p_cap);
    p.integer("grid_points", c.pgrid.grid_points);
    p.integer("refine_iters", c.pgrid.refine_iters);
    p.done();
  }
  if (const Json* j = r.get("quadrature")) {
    Reader q(*j, "quadrature");
    q.integer("panels_per_axis", c.quad.panels_per_axis);
    q.integer("nodes_per_panel", c.quad.nodes_per_panel);
    q.number("rel_tol", c.quad.rel_tol);
    q.integer("max_refinements", c.quad.max_refinements);
    q.done();
  }
  if (const Json* j = r.get("extend_eval")) {
    Reader e(*j, "extend_eval");
    e.text("points", c.points);
    e.integer("random", c.random_points);
    e.number("radius", c.radius);
    e.done();
  }
  if (const Json* j = r.get("output")) {
    Reader o(*j, "output");
    o.text("dir", c.output_dir);
    o.boolean("csv", c.csv);
    o.done();
  }
  r.done();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_canonical(const RunConfig& c) {
  std::ostringstream o;
  o << "schema_version = " << kSchemaVersion << "\n";
  o << "m = " << c.m << "\n";
  o << "d = " << c.dim << "\n";
  o << "threads = " << c.threads << "\n";
  o << "seed = " << c.seed << "\n";
  o << "psi = { family = " << quoted(c.psi.family) << ", " << psi_parameter_key(c.psi.family)
    << " = " << num(c.psi.parameter) << ", a = " << num(c.psi.a) << ", b = " << num(c.psi.b)
    << " }\n";
  const FieldConfig& f = c.field;
  o << "field = { kind = " << quoted(f.kind);
  if (f.kind == "builtin") {
    o << ", name = " << quoted(f.name);
  } else if (f.kind == "gaussian") {
    o << ", scale = " << num(f.scale) << ", amplitude = " << num(f.amplitude)
      << ", center = " << list(f.center);
  } else if (f.kind == "constant") {
    o << ", value = " << num(f.value);
  } else if (f.kind == "bump") {
    o << ", center = " << list(f.center) << ", radii = " << list(f.radii)
      << ", smoothness = " << f.smoothness;
  } else if (f.kind == "grid") {
    o << ", path = " << quoted(f.path);
  }
  o << " }\n";
  if (c.box)
    o << "box = { lower = " << list(c.box->lower) << ", upper = " << list(c.box->upper) << " }\n";
  if (c.lower_depth) o << "lower_depth = " << num(*c.lower_depth) << "\n";
  o << "fields = " << list(c.fields) << "\n";
  o << "tolerance_factor = " << num(c.tolerance_factor) << "\n";
  o << "sabotage = " << (c.sabotage ? "true" : "false") << "\n";
  o << "\n[pgrid]\n";
  o << "p_min_offset = " << num(c.pgrid.p_min_offset) << "\n";
  o << "p_cap = " << num(c.pgrid.p_cap) << "\n";
  o << "grid_points = " << c.pgrid.grid_points << "\n";
  o << "refine_iters = " << c.pgrid.refine_iters << "\n";
  o << "\n[quadrature]\n";
  o << "panels_per_axis = " << c.quad.panels_per_axis << "\n";
  o << "nodes_per_panel = " << c.quad.nodes_per_panel << "\n";
  o << "rel_tol = " << num(c.quad.rel_tol) << "\n";
  o << "max_refinements = " << c.quad.max_refinements << "\n";
  o << "\n[extend_eval]\n";
  o << "points = " << quoted(c.points) << "\n";
  o << "random = " << c.random_points << "\n";
  o << "radius = " << num(c.radius) << "\n";
  o << "\n[output]\n";
  o << "dir = " << quoted(c.output_dir) << "\n";
  o << "csv = " << (c.csv ? "true" : "false") << "\n";
  return o.str();
}

PsiSpec make_psi(const PsiConfig& psi) {
  if (psi.family == "power") return make_power_psi(psi.parameter, psi.a, psi.b);
  if (psi.family == "constant") return make_constant_psi(psi.parameter, psi.a, psi.b);
  if (psi.family == "grand") return make_grand_psi(psi.parameter, psi.a, psi.b);
  fail("psi.family must be \"power\", \"constant\" or \"grand\", got \"" + psi.family + "\"");
}

void validate(const RunConfig& c) {
  if (c.m < 0 || c.m > kMaxCoefficientOrder)
    fail("m must be in [0, " + std::to_string(kMaxCoefficientOrder) + "], got " +
         std::to_string(c.m));
  if (c.dim < 1 || c.dim > kMaxDim)
    fail("d must be in [1, " + std::to_string(kMaxDim) + "], got " + std::to_string(c.dim));
  std::optional<PsiSpec> psi;
  wrap("psi", [&] { psi.emplace(make_psi(c.psi)); });
  wrap("pgrid", [&] { c.pgrid.validate(*psi); });
  wrap("quadrature", [&] { c.quad.validate(); });
  if (!(c.tolerance_factor > 0.0)) fail("tolerance_factor must be > 0");
  if (c.fields.empty()) fail("fields: nothing to verify");
  const auto known = builtin_field_names();
  for (const auto& name : c.fields)
    if (std::find(known.begin(), known.end(), name) == known.end())
      fail("fields: unknown builtin field '" + name + "'");
  const FieldConfig& f = c.field;
  if (f.kind == "builtin" && std::find(known.begin(), known.end(), f.name) == known.end())
    fail("field.name: unknown builtin field '" + f.name + "'");
  if (f.kind == "gaussian") {
    if (!(f.scale > 0.0)) fail("field.scale must be > 0");
    if (!f.center.empty()) need_dim(f.center, c.dim, "field.center");
  }
  if (f.kind == "bump") {
    if (!f.center.empty()) need_dim(f.center, c.dim, "field.center");
    need_dim(f.radii, c.dim, "field.radii");
    for (double r : f.radii)
      if (!(r > 0.0)) fail("field.radii must be > 0");
    if (f.smoothness < 0) fail("field.smoothness must be >= 0");
  }
  if (f.kind == "grid" && f.path.empty()) fail("field.path must name a grid file");
  if (c.box) {
    need_dim(c.box->lower, c.dim, "box.lower");
    need_dim(c.box->upper, c.dim, "box.upper");
    for (int j = 0; j < c.dim; ++j)
      if (!(c.box->lower[static_cast<std::size_t>(j)] < c.box->upper[static_cast<std::size_t>(j)]))
        fail("box: lower must be < upper on every axis");
  }
  if (c.lower_depth && !(*c.lower_depth > 0.0)) fail("lower_depth must be > 0");
  if (!(c.radius > 0.0)) fail("extend_eval.radius must be > 0");
}

SuiteEntry make_field(const RunConfig& c) {
  const FieldConfig& f = c.field;
  auto entry = [&]() -> SuiteEntry {
    if (f.kind == "builtin") return builtin_suite_entry(f.name, c.dim);
    if (f.kind == "gaussian") return gaussian_field(c.dim, f.scale, f.center, f.amplitude);
    if (f.kind == "constant") return constant_field(c.dim, f.value);
    if (f.kind == "bump") {
      auto center =
          f.center.empty() ? std::vector<double>(static_cast<std::size_t>(c.dim), 0.0) : f.center;
      return bump_field(center, f.radii, f.smoothness);
    }
    GridData grid = read_grid_file(f.path);
    if (grid.dim() != c.dim)
      throw Error(ErrorCode::dimension, "grid file '" + f.path + "' is " +
                                            std::to_string(grid.dim()) +
                                            "-dimensional, d = " + std::to_string(c.dim));
    const Box bounds = grid.bounds();
    return SuiteEntry(grid_field(std::move(grid), std::filesystem::path(f.path).stem().string()),
                      bounds);
  }();
  if (c.box) entry.box = Box(c.box->lower, c.box->upper);
  if (c.lower_depth) entry.lower_depth = c.lower_depth;
  return entry;
}

}  // namespace sgls::cli
