#include "sgls/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace sgls {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

void write_string(std::string& out, const std::string& s) { out += Json(s).dump(); }

void dump(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        write_string(out, key);
        out += ": ";
        dump(value, indent + 2, out);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], indent + 2, out);
      }
      out += "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string render(const Json& j) {
  std::string out;
  dump(j, 0, out);
  out += "\n";
  return out;
}

Json psi_json(const PsiSpec& psi) {
  Json j;
  j["family"] = to_string(psi.family());
  j["parameter"] = number(psi.parameter());
  j["a"] = number(psi.a());
  j["b"] = number(psi.b());
  j["label"] = psi.label();
  return j;
}

Json norm_json(const NormReport& r) {
  Json j;
  j["value"] = number(r.value);
  j["argmax_p"] = number(r.argmax_p);
  j["boundary_flag"] = r.boundary_flag;
  j["lower_bound_only"] = r.lower_bound_only;
  j["degraded_coverage"] = r.degraded_coverage;
  j["search_interval"] = Json::array({number(r.search_lo), number(r.search_hi)});
  Json table = Json::array();
  for (const auto& row : r.per_p_table) {
    Json e;
    e["p"] = number(row.p);
    e["raw_norm"] = number(row.raw_norm);
    e["psi"] = number(row.psi);
    e["ratio"] = number(row.ratio);
    e["quadrature_levels"] = row.quadrature_levels;
    e["ok"] = row.ok;
    if (!row.note.empty()) e["note"] = row.note;
    table.push_back(std::move(e));
  }
  j["per_p_table"] = std::move(table);
  return j;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_json(const PsiSpec& psi) { return render(psi_json(psi)); }

std::string to_json(const NormReport& report) { return render(norm_json(report)); }

std::string to_json(const NormRun& run) {
  Json j;
  j["field"] = run.field;
  j["m"] = run.m;
  j["d"] = run.dim;
  j["psi"] = psi_json(run.psi);
  j["report"] = norm_json(run.report);
  return render(j);
}

std::string to_json(const HestenesCoefficients& coeffs) {
  Json j;
  j["m"] = coeffs.m;
  Json c = Json::array();
  Json cd = Json::array();
  for (const auto& ck : coeffs.c) {
    c.push_back(to_string(ck));
    cd.push_back(number(to_double(ck)));
  }
  j["c"] = std::move(c);
  j["C"] = to_string(coeffs.constant);
  j["bound"] = to_string(operator_norm_bound(coeffs));
  j["c_decimal"] = std::move(cd);
  j["C_decimal"] = number(coeffs.constant_value());
  j["bound_decimal"] = number(to_double(operator_norm_bound(coeffs)));
  return render(j);
}

std::string to_json(const VerificationReport& report) {
  Json j;
  j["m"] = report.m;
  j["d"] = report.dim;
  j["psi"] = psi_json(report.psi);
  j["bound"] = number(report.bound);
  j["bound_exact"] = report.bound_exact;
  j["max_ratio"] = number(report.max_ratio);
  j["witness"] = report.witness;
  j["passed"] = report.passed();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e;
    e["name"] = c.name;
    e["status"] = c.passed ? "pass" : "fail";
    Json details;
    details["message"] = c.message;
    for (const auto& m : c.metrics) details[m.name] = number(m.value);
    e["details"] = std::move(details);
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  if (report.estimate) {
    Json fields = Json::array();
    for (const auto& row : report.estimate->per_field_table) {
      Json e;
      e["field"] = row.label;
      e["ratio"] = number(row.ratio);
      e["numerator"] = norm_json(row.numerator);
      e["denominator"] = norm_json(row.denominator);
      fields.push_back(std::move(e));
    }
    j["fields"] = std::move(fields);
  }
  return render(j);
}

std::string per_p_csv(const NormReport& report) {
  std::string out = "p,raw_norm,psi,ratio\n";
  for (const auto& row : report.per_p_table)
    out += format_double(row.p) + "," + format_double(row.raw_norm) + "," + format_double(row.psi) +
           "," + format_double(row.ratio) + "\n";
  return out;
}

std::string field_table_csv(const OperatorNormEstimate& estimate) {
  std::string out = "field,ratio,argmax_p,bound\n";
  for (const auto& row : estimate.per_field_table)
    out += row.label + "," + format_double(row.ratio) + "," + format_double(row.numerator.argmax_p) +
           "," + format_double(estimate.theoretical_bound) + "\n";
  return out;
}

}  // namespace sgls
