#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <sgls/errors.hpp>
#include <sgls/field.hpp>

#include "oracles.hpp"

using namespace sgls;

namespace {

std::vector<Field> analytic_builtins() {
  return {gaussian_field(1, 1.0),
          gaussian_field(2, 0.8, {0.3, -0.2}, 1.5),
          gaussian_field(3, 1.2, {0.0, 0.1, 0.5}),
          bump_field({0.1, 0.2}, {1.5, 1.2}),
          poly_times_bump_field({1.0, -0.5, 0.25}, 2.0, {2, 1.0, 1.5, 8})};
}

std::vector<double> random_point(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (auto& v : x) v = u(rng);
  return x;
}

}  // namespace

TEST_CASE("gaussian examples") {
  const auto f = gaussian_field(1, 1.0);
  CHECK(f({0.0}) == 1.0);
  const double zero[] = {0.0};
  CHECK(f.derivative(MultiIndex{1}, zero) == 0.0);
  CHECK(f.derivative(MultiIndex{2}, zero) == -1.0);
  const auto fd = oracle::central_difference([&](double t) { return f({t}); }, 0.0, 2, 1e-3);
  CHECK(fd == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(f.has_decay_certificate());
  CHECK(std::isfinite(f.decay_radius(1e-12)));
}

TEST_CASE("D^0 f is f exactly") {
  std::mt19937_64 rng(7);
  for (const auto& f : analytic_builtins())
    for (int i = 0; i < 200; ++i) {
      const auto x = random_point(rng, f.dim(), -2.0, 2.0);
      CHECK(f.derivative(MultiIndex::zero(f.dim()), Point(x)) == f(Point(x)));
    }
}

TEST_CASE("analytic derivatives agree with central differences at second order") {
  std::mt19937_64 rng(11);
  const double hs[] = {1e-2, 5e-3, 2.5e-3};
  for (const auto& f : analytic_builtins()) {
    const int d = f.dim();
    for (const auto& alpha : multi_indices_up_to(d, d == 1 ? 3 : 2)) {
      if (alpha.is_zero()) continue;
      for (int trial = 0; trial < 4; ++trial) {
        const auto x = random_point(rng, d, -0.9, 0.9);
        const double exact = f.derivative(alpha, Point(x));
        double err[3];
        for (int i = 0; i < 3; ++i)
          err[i] = std::abs(exact - oracle::tensor_difference(
                                        [&](const std::vector<double>& y) { return f(Point(y)); }, x,
                                        alpha.components(), hs[i]));
        INFO(f.label(), " alpha=", alpha.to_string());
        CHECK(err[2] <= 1e-3 * std::max(1.0, std::abs(exact)));
        if (err[0] < 1e-9) continue;  // truncation error below the rounding level
        CHECK(oracle::observed_order(err[0], err[1], hs[0], hs[1]) >= 1.8);
        CHECK(oracle::observed_order(err[1], err[2], hs[1], hs[2]) >= 1.8);
      }
    }
  }
}

TEST_CASE("gaussian certificate bounds the tail") {
  const auto f = gaussian_field(2, 0.7, {0.2, -0.1});
  for (double tol : {1e-4, 1e-8, 1e-12}) {
    const double r = f.decay_radius(tol);
    const double at_edge[] = {r, 0.0};
    CHECK(std::abs(f(at_edge)) < tol);
  }
  CHECK_THROWS_AS(constant_field(1, 1.0).decay_radius(1e-6), Error);
}

TEST_CASE("gaussian certificate bounds the L_p tail of derivatives") {
  const auto f = gaussian_field(1, 1.0, {}, 1.0, 4);
  for (double tol : {1e-5, 1e-7, 1e-9, 1e-11}) {
    const long double r = f.decay_radius(tol);
    for (int n = 0; n <= 4; ++n) {
      const MultiIndex alpha({n});
      for (double p : {1.0, 2.0, 8.0, 64.0}) {
        auto g = [&](long double x) {
          const double pt[] = {static_cast<double>(x)};
          return std::pow(std::abs(static_cast<long double>(f.derivative(alpha, pt))),
                          static_cast<long double>(p));
        };
        const long double inside = 2 * oracle::simpson(g, 0.0L, r, 200000);
        const long double tail = 2 * oracle::simpson(g, r, 40.0L, 200000);
        const double rel = static_cast<double>(std::pow((inside + tail) / inside, 1.0L / p) - 1);
        CHECK(rel < tol);
      }
    }
  }
}

TEST_CASE("poly_times_bump examples") {
  const auto linear = poly_times_bump_field({0.0, 1.0}, 1.0);
  CHECK(linear({0.0, 0.5}) == doctest::Approx(0.5).epsilon(1e-15));

  const auto one = poly_times_bump_field({1.0}, 1.0);
  CHECK(one({0.0, 0.7}) == 1.0);
  CHECK(one({0.0, -3.0}) == 1.0);

  const auto square = poly_times_bump_field({0.0, 0.0, 1.0}, 1.5, {2, 4.0, 2.0, 8});
  for (double xt : {0.0, 0.3, -0.8}) {
    const double at[] = {xt, 0.0};
    // P(1) = 1 inside the flat region, so f(x~, 1) is bump(x~)
    const double unit_height[] = {xt, 1.0};
    CHECK(square.derivative(MultiIndex{0, 2}, at) ==
          doctest::Approx(2.0 * square(unit_height)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(poly_times_bump_field(std::vector<double>(18, 1.0), 1.0), Error);
  try {
    poly_times_bump_field(std::vector<double>(18, 1.0), 1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::order);
  }
}

TEST_CASE("bump is compactly supported") {
  const auto f = bump_field({0.0, 1.5}, {1.0, 0.5});
  CHECK(f({0.0, 1.5}) == 1.0);
  CHECK(f({0.0, 0.99}) == 0.0);
  CHECK(f({1.01, 1.5}) == 0.0);
  CHECK(f.decay_radius(1e-12) >= 2.0);
}

TEST_CASE("derivative order and dimension are checked") {
  const auto f = gaussian_field(2, 1.0, {}, 1.0, 3);
  const double x[] = {0.1, 0.2};
  CHECK_THROWS_AS(f.derivative(MultiIndex{2, 2}, x), Error);
  CHECK_THROWS_AS(f.derivative(MultiIndex{1}, x), Error);
  CHECK(f.scaled(2.0)(x) == 2.0 * f(x));
  CHECK(f.relabeled("g").label() == "g");
}

TEST_CASE("half-space domain needs a certificate or a box") {
  const auto c = constant_field(2, 1.0);
  HalfSpaceDomain dom{2, Side::upper, std::nullopt, std::nullopt};
  try {
    (void)dom.regions(c, 1e-8);
    FAIL("expected E_DOMAIN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::domain);
  }
  dom.truncation_box = Box({-1.0, -1.0}, {1.0, 1.0});
  const auto regions = dom.regions(c, 1e-8);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0] == Box({-1.0, 0.0}, {1.0, 1.0}));
  dom.side = Side::whole;
  dom.lower_depth = 0.4;
  const auto both = dom.regions(c, 1e-8);
  REQUIRE(both.size() == 2);
  CHECK(both[1] == Box({-1.0, -0.4}, {1.0, 0.0}));
}

// ---- grid fields ----------------------------------------------------------------

namespace {

GridData sample_grid(int dim, std::size_t n, double h, std::vector<double> origin,
                     const std::function<double(const std::vector<double>&)>& f) {
  GridData g;
  g.counts.assign(static_cast<std::size_t>(dim), n);
  g.spacing = h;
  g.origin = std::move(origin);
  std::size_t total = 1;
  for (auto c : g.counts) total *= c;
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (std::size_t j = x.size(); j-- > 0;) {
      x[j] = g.origin[j] + h * static_cast<double>(rem % n);
      rem /= n;
    }
    g.values.push_back(f(x));
  }
  return g;
}

}  // namespace

TEST_CASE("grid field: constant samples") {
  const auto f = grid_field(sample_grid(2, 6, 0.2, {0.0, 0.0}, [](const auto&) { return 1.0; }));
  const double x[] = {0.33, 0.71};
  CHECK(f(x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(f.derivative(MultiIndex{1, 0}, x)) < 1e-12);
  CHECK(std::abs(f.derivative(MultiIndex{0, 1}, x)) < 1e-12);
}

TEST_CASE("grid field: linear ramp") {
  const auto f = grid_field(sample_grid(2, 11, 0.1, {0.0, 0.0}, [](const auto& x) { return x[0]; }));
  for (double a : {0.23, 0.5, 0.77}) {
    const double x[] = {a, 0.41};
    CHECK(f.derivative(MultiIndex{1, 0}, x) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f(x) == doctest::Approx(a).epsilon(1e-12));
  }
}

TEST_CASE("grid field: sin on [0, pi]") {
  const double pi = std::numbers::pi;
  double prev = 0.0;
  for (std::size_t n : {41u, 81u, 161u}) {
    const double h = pi / static_cast<double>(n - 1);
    const auto f = grid_field(sample_grid(1, n, h, {0.0}, [](const auto& x) { return std::sin(x[0]); }));
    const double mid[] = {pi / 2};
    const double err = std::abs(f.derivative(MultiIndex{1}, mid) - std::cos(pi / 2));
    CHECK(err <= h * h);
    // second derivative at an interior node, O(h^2) against -sin
    const double node[] = {h * static_cast<double>((n - 1) / 4)};
    const double err2 = std::abs(f.derivative(MultiIndex{2}, node) + std::sin(node[0]));
    CHECK(err2 <= h * h);
    if (prev > 0.0) CHECK(oracle::observed_order(prev, err2, 2 * h, h) >= 1.8);
    prev = err2;
  }
}

TEST_CASE("grid field errors") {
  const auto g = sample_grid(2, 5, 0.25, {0.0, 0.0}, [](const auto& x) { return x[0] * x[1]; });
  const auto f = grid_field(g);
  const double inside[] = {0.5, 0.5};
  const double outside[] = {1.5, 0.5};
  try {
    (void)f(outside);
    FAIL("expected E_OUT_OF_DOMAIN");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::out_of_domain);
  }
  try {
    (void)f.derivative(MultiIndex{2, 1}, inside);
    FAIL("expected E_ORDER");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::order);
  }
  CHECK(f.derivative(MultiIndex{1, 1}, inside) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(f.has_decay_certificate());

  auto small = g;
  small.counts = {4, 5};
  small.values.resize(20);
  CHECK_THROWS_AS(grid_field(small), Error);
}

TEST_CASE("grid IO round trips") {
  const auto g = sample_grid(2, 6, 0.125, {-0.5, 0.25},
                             [](const auto& x) { return std::exp(-x[0] * x[0]) * std::cos(3 * x[1]); });
  SUBCASE("csv") {
    std::stringstream s;
    write_grid_csv(s, g);
    const auto back = read_grid_csv(s);
    CHECK(back.counts == g.counts);
    CHECK(back.spacing == g.spacing);
    CHECK(back.origin == g.origin);
    CHECK(back.values == g.values);
  }
  SUBCASE("binary") {
    std::stringstream s;
    write_grid_binary(s, g);
    const auto back = read_grid_binary(s);
    CHECK(back.values == g.values);
    CHECK(back.origin == g.origin);
  }
  SUBCASE("file dispatch") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = dir / "sgls_grid_test.csv";
    const auto bin = dir / "sgls_grid_test.bin";
    {
      std::ofstream a(csv);
      write_grid_csv(a, g);
      std::ofstream b(bin, std::ios::binary);
      write_grid_binary(b, g);
    }
    CHECK(read_grid_file(csv.string()).values == g.values);
    CHECK(read_grid_file(bin.string()).values == g.values);
    std::filesystem::remove(csv);
    std::filesystem::remove(bin);
    try {
      (void)read_grid_file((dir / "sgls_no_such_grid.csv").string());
      FAIL("expected E_IO");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::io);
    }
  }
  SUBCASE("malformed csv") {
    std::stringstream s("# sgls grid v1\ndim,2\ncounts,5\n");
    CHECK_THROWS_AS(read_grid_csv(s), Error);
  }
}
