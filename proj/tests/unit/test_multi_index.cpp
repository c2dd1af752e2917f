#include <doctest.h>

#include <algorithm>
#include <set>

#include <sgls/box.hpp>
#include <sgls/errors.hpp>
#include <sgls/multi_index.hpp>

using namespace sgls;

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Brute force: every vector in {0..m}^d with sum <= m.
std::set<std::vector<int>> enumerate(int d, int m) {
  std::set<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(d), 0);
  while (true) {
    int s = 0;
    for (int v : a) s += v;
    if (s <= m) out.insert(a);
    std::size_t j = 0;
    while (j < a.size() && ++a[j] > m) a[j++] = 0;
    if (j == a.size()) break;
  }
  return out;
}

}  // namespace

TEST_CASE("multi_indices_up_to examples") {
  const auto two = multi_indices_up_to(2, 1);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == MultiIndex{0, 0});
  CHECK(two[1] == MultiIndex{1, 0});
  CHECK(two[2] == MultiIndex{0, 1});

  const auto one = multi_indices_up_to(1, 2);
  REQUIRE(one.size() == 3);
  CHECK(one[0] == MultiIndex{0});
  CHECK(one[1] == MultiIndex{1});
  CHECK(one[2] == MultiIndex{2});

  CHECK(multi_indices_up_to(3, 2).size() == 10);
}

TEST_CASE("multi_indices_up_to matches brute-force enumeration") {
  for (int d = 1; d <= 4; ++d)
    for (int m = 0; m <= 5; ++m) {
      const auto list = multi_indices_up_to(d, m);
      CHECK(static_cast<long>(list.size()) == binomial(d + m, d));
      std::set<std::vector<int>> got;
      for (const auto& a : list) got.insert(a.components());
      CHECK(got.size() == list.size());
      CHECK(got == enumerate(d, m));
      CHECK(list.front().is_zero());
      for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].order() <= list[i].order());
    }
}

TEST_CASE("MultiIndex basics") {
  const MultiIndex a{1, 0, 2};
  CHECK(a.dim() == 3);
  CHECK(a.order() == 3);
  CHECK(a.normal() == 2);
  CHECK(a[0] == 1);
  CHECK(a.to_string() == "(1,0,2)");
  CHECK(MultiIndex::zero(2).is_zero());
  CHECK(MultiIndex::axis(3, 2, 4) == MultiIndex{0, 0, 4});
  CHECK_THROWS_AS(MultiIndex({1, -1}), Error);
}

TEST_CASE("Box") {
  const auto b = Box::cube(2, -1.0, 1.0);
  CHECK(b.dim() == 2);
  CHECK(b.volume() == 4.0);
  const std::vector<double> inside{0.5, -0.5};
  const std::vector<double> outside{1.5, 0.0};
  CHECK(b.contains(inside));
  CHECK_FALSE(b.contains(outside));
  CHECK_THROWS_AS(Box({0.0, 1.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(Box({0.0}, {1.0, 2.0}), Error);
}
