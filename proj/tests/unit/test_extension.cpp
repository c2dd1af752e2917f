#include <doctest.h>

#include <cmath>
#include <random>

#include <sgls/errors.hpp>
#include <sgls/extension.hpp>
#include <sgls/field.hpp>
#include <sgls/psi.hpp>

#include "oracles.hpp"

using namespace sgls;

namespace {

oracle::BigInt num(const Rational& q) { return oracle::BigInt(boost::multiprecision::numerator(q)); }
oracle::BigInt den(const Rational& q) { return oracle::BigInt(boost::multiprecision::denominator(q)); }

}  // namespace

TEST_CASE("coefficients match an independent Cramer solve") {
  for (int m = 0; m <= kMaxCoefficientOrder; ++m) {
    const auto coeffs = hestenes_coefficients(m);
    const auto ref = oracle::cramer_reflection_weights(m);
    REQUIRE(coeffs.c.size() == ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) CHECK(oracle::same_value(ref[k], num(coeffs.c[k]), den(coeffs.c[k])));
    for (int l = 0; l <= m; ++l) CHECK(reflection_moment(coeffs.c, l) == 1);
    CHECK(solve_reflection_system(m) == lagrange_reflection_weights(m));
  }
}

TEST_CASE("coefficient examples") {
  CHECK(hestenes_coefficients(0).c == std::vector<Rational>{1});
  CHECK(hestenes_coefficients(0).constant == 1);
  CHECK(hestenes_coefficients(1).c == std::vector<Rational>{3, -2});
  CHECK(hestenes_coefficients(1).constant == 7);
  CHECK(hestenes_coefficients(2).c == std::vector<Rational>{6, -8, 3});
  CHECK(hestenes_coefficients(2).constant == 65);
  CHECK(hestenes_coefficients(3).c == std::vector<Rational>{10, -20, 15, -4});
  CHECK(to_string(Rational(3, 4)) == "3/4");
  CHECK(to_string(Rational(-8)) == "-8");
}

TEST_CASE("order m+1 moment is not 1") {
  for (int m = 0; m <= 6; ++m) CHECK(reflection_moment(hestenes_coefficients(m).c, m + 1) != 1);
  CHECK(reflection_moment(hestenes_coefficients(2).c, 3) == -23);
}

TEST_CASE("m outside the policy range") {
  for (int m : {-1, 13, 40}) {
    try {
      (void)hestenes_coefficients(m);
      FAIL("expected E_SIZE");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::size);
    }
  }
}

TEST_CASE("constants") {
  const auto c0 = hestenes_coefficients(0), c1 = hestenes_coefficients(1), c2 = hestenes_coefficients(2);
  CHECK(operator_norm_bound(c0) == 2);
  CHECK(operator_norm_bound(c1) == 8);
  CHECK(operator_norm_bound(c2) == 66);
  for (double p : {1.0, 2.0, 7.0, kInfinity}) CHECK(extension_constant_sharp(c0, 0, p) == 1.0);
  CHECK(extension_constant_sharp(c1, 1, kInfinity) == 7.0);
  CHECK(extension_constant_sharp(c1, 0, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
  // the sharp constant never exceeds C(m)
  for (int m = 0; m <= 6; ++m) {
    const auto c = hestenes_coefficients(m);
    for (int ad = 0; ad <= m; ++ad)
      for (double p : {1.0, 1.5, 3.0, 50.0, kInfinity})
        CHECK(extension_constant_sharp(c, ad, p) <= c.constant_value() * (1 + 1e-15));
  }
}

TEST_CASE("extension examples") {
  const auto base = gaussian_field(2, 1.0, {0.1, 0.4});
  const auto ext = extend(base, hestenes_coefficients(1));
  const double up[] = {0.3, 0.3};
  CHECK(ext(up) == base(up));

  const auto one = poly_times_bump_field({1.0}, 2.0);
  const auto e3 = extend(one, hestenes_coefficients(3));
  for (double xd : {-0.1, -0.5, -0.9}) {
    const double x[] = {0.0, xd};
    CHECK(e3(x) == doctest::Approx(1.0).epsilon(1e-14));
  }

  const auto t = poly_times_bump_field({0.0, 1.0}, 2.0);
  const auto e1 = extend(t, hestenes_coefficients(1));
  const double below[] = {0.0, -0.2};
  CHECK(e1.derivative(MultiIndex{0, 1}, below) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e1(below) == doctest::Approx(-0.2).epsilon(1e-14));
}

TEST_CASE("identity on the upper half-space is exact") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0), h(0.0, 3.0);
  for (int m = 0; m <= 3; ++m) {
    const auto base = gaussian_field(2, 0.9, {0.2, 0.5});
    const auto ext = extend(base, hestenes_coefficients(m));
    for (int i = 0; i < 100; ++i) {
      const double x[] = {u(rng), h(rng)};
      CHECK(ext(x) == base(x));
      for (const auto& a : multi_indices_up_to(2, m)) CHECK(ext.derivative(a, x) == base.derivative(a, x));
    }
    const double on_boundary[] = {0.3, 0.0};
    CHECK(ext(on_boundary) == base(on_boundary));
  }
}

TEST_CASE("polynomial reproduction at sample points") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> xt(-0.9, 0.9), xd(-1.0, 0.0);
  for (int m = 0; m <= 3; ++m)
    for (int l = 0; l <= m; ++l) {
      std::vector<double> coeffs(static_cast<std::size_t>(l + 1), 0.0);
      coeffs.back() = 1.0;
      const auto base = poly_times_bump_field(coeffs, 1.0, {2, static_cast<double>(m + 2), 1.0, 8});
      const auto ext = extend(base, hestenes_coefficients(m));
      for (int i = 0; i < 200; ++i) {
        const double x[] = {xt(rng), xd(rng)};
        const double bump_only[] = {x[0], 1.0};
        CHECK(std::abs(ext(x) - std::pow(x[1], l) * base(bump_only)) <= 1e-12);
      }
    }
}

TEST_CASE("derivative formula below the boundary matches finite differences") {
  const auto base = gaussian_field(2, 0.8, {0.1, 0.5});
  const auto ext = extend(base, hestenes_coefficients(2));
  const std::vector<double> x{0.2, -0.35};
  for (const auto& a : multi_indices_up_to(2, 2)) {
    if (a.is_zero()) continue;
    const double fd = oracle::tensor_difference([&](const std::vector<double>& y) { return ext(Point(y)); }, x,
                                                a.components(), 2e-4);
    CHECK(ext.derivative(a, Point(x)) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
  }
  try {
    (void)ext.derivative(MultiIndex{0, 3}, Point(x));
    FAIL("expected E_ORDER");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::order);
  }
}

TEST_CASE("one-sided normal derivative limits agree at the boundary") {
  const auto base = gaussian_field(2, 1.0, {0.0, 0.5});
  const auto ext = extend(base, hestenes_coefficients(1));
  const MultiIndex dn{0, 1};
  const double above[] = {0.3, 1e-12};
  const double below[] = {0.3, -1e-12};
  CHECK(std::abs(ext.derivative(dn, above) - ext.derivative(dn, below)) <= 1e-9);
}

TEST_CASE("extension preconditions") {
  const auto shallow = gaussian_field(1, 1.0, {}, 1.0, 1);
  CHECK_THROWS_AS(extend(shallow, hestenes_coefficients(2)), Error);
  CHECK_THROWS_AS(ExtendedField::with_weights(gaussian_field(1, 1.0), 1, {1.0}), Error);
  const auto ext = extend(gaussian_field(1, 1.0), hestenes_coefficients(1));
  const auto as_field = ext.as_field();
  CHECK(as_field.max_order() == 1);
  CHECK(as_field.has_decay_certificate());
  const double x[] = {-0.4};
  CHECK(as_field(x) == ext(x));
}
