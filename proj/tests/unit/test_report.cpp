#include <doctest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"

#include <sgls/parallel.hpp>
#include <sgls/report.hpp>
#include <sgls/verify.hpp>

using namespace sgls;

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(-kInfinity) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
  for (double v : {1.0 / 3.0, 6.02214076e23, -2.5e-300})
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("coefficient JSON") {
  const auto j = nlohmann::json::parse(to_json(hestenes_coefficients(2)));
  CHECK(j["m"] == 2);
  CHECK(j["c"] == nlohmann::json::array({"6", "-8", "3"}));
  CHECK(j["C"] == "65");
  CHECK(j["bound"] == "66");
}

TEST_CASE("norm report JSON and CSV") {
  const HalfSpaceDomain upper{1, Side::upper, std::nullopt, std::nullopt};
  const auto r = gls_norm(gaussian_field(1, 1.0), make_power_psi(0.5, 1.5, kInfinity), upper,
                          PGridSpec{}, QuadratureSpec{4, 8, 1e-10, 6});
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["value"].get<double>() == r.value);
  CHECK(j["argmax_p"].get<double>() == r.argmax_p);
  CHECK(j.contains("boundary_flag"));
  CHECK(j["per_p_table"].size() == r.per_p_table.size());

  std::istringstream csv(per_p_csv(r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "p,raw_norm,psi,ratio");
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == r.per_p_table.size());
}

TEST_CASE("verification report schema") {
  SuiteConfig cfg;
  cfg.fields = {"gaussian", "poly_bump"};
  const auto report = run_full_suite(cfg);
  const auto j = nlohmann::json::parse(to_json(report));
  for (const char* key : {"m", "psi", "bound", "max_ratio", "witness", "checks"}) CHECK(j.contains(key));
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK((c["status"] == "pass" || c["status"] == "fail"));
    CHECK(c.contains("details"));
  }
  std::istringstream csv(field_table_csv(*report.estimate));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "field,ratio,argmax_p,bound");
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  SuiteConfig cfg;
  cfg.m = 2;
  cfg.fields = {"shifted_gaussian", "interior_bump"};
  set_thread_limit(1);
  const auto a = to_json(run_full_suite(cfg));
  set_thread_limit(4);
  const auto b = to_json(run_full_suite(cfg));
  set_thread_limit(0);
  const auto c = to_json(run_full_suite(cfg));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  set_thread_limit(3);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 10, [&](std::size_t b, std::size_t e) {
    for (auto i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(100, 1, [](std::size_t b, std::size_t) {
                    if (b > 50) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
  set_thread_limit(0);
}
