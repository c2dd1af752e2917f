#include <doctest.h>

#include <cmath>

#include <sgls/errors.hpp>
#include <sgls/psi.hpp>

using namespace sgls;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an sgls::Error");
  return ErrorCode::usage;
}

}  // namespace

TEST_CASE("power family") {
  CHECK(make_power_psi(1.0, 1.0, kInfinity)(2.0) == 2.0);
  CHECK(make_power_psi(0.5, 1.0, 10.0)(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(make_power_psi(2.0, 1.0, 10.0)(3.0) == doctest::Approx(9.0).epsilon(1e-15));

  const auto psi = make_power_psi(0.5, 1.5, 8.0);
  CHECK(psi.family() == PsiFamily::power);
  CHECK(psi.a() == 1.5);
  CHECK(psi.b() == 8.0);
  CHECK_FALSE(psi.unbounded_support());
  CHECK(make_power_psi(1.0, 1.0, kInfinity).unbounded_support());
}

TEST_CASE("power family: log psi is alpha log p") {
  for (double alpha : {0.1, 0.5, 1.0, 2.5, 7.0}) {
    const auto psi = make_power_psi(alpha, 1.0, kInfinity);
    for (double p = 1.01; p < 200.0; p *= 1.37)
      CHECK(std::abs(std::log(psi(p)) - alpha * std::log(p)) <= 1e-12 * std::max(1.0, alpha * std::log(p)));
  }
}

TEST_CASE("constant family") {
  CHECK(make_constant_psi(1.0, 1.0, 10.0)(7.0) == 1.0);
  CHECK(make_constant_psi(2.0, 1.0, 4.0)(1.5) == 2.0);
  CHECK(code_of([] { make_constant_psi(0.0, 1.0, 4.0); }) == ErrorCode::positivity);
  CHECK(code_of([] { make_constant_psi(-1.0, 1.0, 4.0); }) == ErrorCode::positivity);
}

TEST_CASE("grand family") {
  CHECK(make_grand_psi(1.0, 1.0, 10.0)(9.0) == doctest::Approx(1.0));
  CHECK(make_grand_psi(2.0, 1.0, 4.0)(2.0) == doctest::Approx(0.25));
  CHECK(code_of([] { make_grand_psi(1.0, 1.0, kInfinity); }) == ErrorCode::unsupported_family);
  CHECK(code_of([] { make_grand_psi(0.0, 1.0, 4.0); }) == ErrorCode::positivity);
  const auto psi = make_grand_psi(1.0, 1.0, 4.0);
  CHECK(psi(3.999999) > 1e5);
}

TEST_CASE("support interval is checked") {
  CHECK(code_of([] { make_power_psi(1.0, 0.5, 4.0); }) == ErrorCode::support_interval);
  CHECK(code_of([] { make_power_psi(1.0, 4.0, 4.0); }) == ErrorCode::support_interval);
  CHECK(code_of([] { make_power_psi(1.0, 5.0, 4.0); }) == ErrorCode::support_interval);
  CHECK(code_of([] { make_constant_psi(1.0, 2.0, 1.5); }) == ErrorCode::support_interval);
  CHECK(code_of([] { make_power_psi(0.0, 1.0, 4.0); }) == ErrorCode::positivity);
  CHECK(code_of([] { PsiSpec(0.9, 2.0, [](double) { return 1.0; }); }) == ErrorCode::support_interval);
}

TEST_CASE("psi_validate") {
  SUBCASE("constant") {
    const auto v = psi_validate(make_constant_psi(1.0, 1.0, 10.0), 32, 64.0);
    CHECK(v.valid);
    CHECK(v.min_value == 1.0);
  }
  SUBCASE("sign change is flagged") {
    const PsiSpec psi(1.0, 3.0, [](double p) { return p - 2.0; }, "p-2");
    const auto v = psi_validate(psi, 32, 64.0);
    CHECK_FALSE(v.valid);
    CHECK(v.min_value < 0.0);
    CHECK(v.argmin_p < 2.0);
  }
  SUBCASE("power on (1, inf) with a cap") {
    const auto psi = make_power_psi(1.0, 1.0, kInfinity);
    const auto v = psi_validate(psi, 200, 100.0);
    CHECK(v.valid);
    CHECK(v.samples == 200);
    // dense-grid minimum: p^1 is increasing, so the minimum sits at the left end
    double dense_min = kInfinity;
    for (int i = 0; i <= 10000; ++i) dense_min = std::min(dense_min, psi(1.0 + 1e-9 + 99.0 * i / 10000.0));
    CHECK(v.min_value == doctest::Approx(dense_min).epsilon(1e-6));
    CHECK(v.argmin_p < 1.001);
  }
  SUBCASE("builtin families never flag") {
    for (const auto& psi : {make_power_psi(0.3, 1.0, 50.0), make_power_psi(4.0, 2.0, kInfinity),
                            make_constant_psi(0.01, 1.0, 3.0), make_grand_psi(0.5, 1.5, 8.0),
                            make_grand_psi(3.0, 1.0, 2.0)})
      CHECK(psi_validate(psi, 128, 64.0).valid);
  }
  SUBCASE("a NaN sample is a violation") {
    const PsiSpec psi(1.0, 4.0, [](double p) { return p < 2.0 ? 1.0 : std::nan(""); });
    CHECK_FALSE(psi_validate(psi, 32, 64.0).valid);
  }
}

TEST_CASE("labels and family names") {
  CHECK(to_string(PsiFamily::power) == "power");
  CHECK(to_string(PsiFamily::grand) == "grand");
  CHECK(to_string(PsiFamily::constant) == "constant");
  CHECK(to_string(PsiFamily::custom) == "custom");
  CHECK(make_power_psi(0.5, 1.0, 2.0).parameter() == 0.5);
  CHECK(std::isnan(PsiSpec(1.0, 2.0, [](double) { return 1.0; }).parameter()));
}
