#include <doctest.h>

#include <numeric>
#include <random>

#include "rankopt/fixed_span.hpp"
#include "rankopt/sim.hpp"
#include "support/support.hpp"

using namespace rankopt;

namespace {

Catalog example_one() { return index_catalog({{"one", 1.0, 1.0}, {"two", 9.0, 0.1}, {"three", 1.9, 0.52}}); }

bool ascending(const Ranking& r) { return std::is_sorted(r.begin(), r.end()) && std::adjacent_find(r.begin(), r.end()) == r.end(); }

}  // namespace

TEST_CASE("fixed span optimum on the worked example") {
  const auto c = example_one();
  const auto one = solve_fixed_span(c, 1);
  CHECK(one.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.ranking == Ranking{2});
  const auto two = solve_fixed_span(c, 2);
  CHECK(two.value == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(two.ranking == Ranking{0, 2});
  const auto three = solve_fixed_span(c, 3);
  CHECK(three.ranking == Ranking{0, 1, 2});

  CHECK_THROWS_AS(solve_fixed_span(c, 0), InvalidInput);
  CHECK_THROWS_AS(solve_fixed_span(c, 4), InvalidInput);
}

TEST_CASE("assort_opt on the worked example") {
  const auto sol = assort_opt(example_one(), 2);
  REQUIRE(sol.capacity() == 2);
  CHECK(sol.value(1) == doctest::Approx(1.0));
  CHECK(sol.value(2) == doctest::Approx(1.8));
  CHECK_FALSE(sol.clamped);

  const auto clamped = assort_opt(example_one(), 9);
  CHECK(clamped.clamped);
  CHECK(clamped.capacity() == 3);

  const auto single = assort_opt(index_catalog({{"a", 3.0, 0.4}}), 1);
  CHECK(single.at(1).ranking == Ranking{0});
  CHECK(single.value(1) == doctest::Approx(1.2));
}

TEST_CASE("nesting helper") {
  CHECK(is_nested({2}, {0, 2}));
  CHECK(is_nested({}, {1}));
  CHECK_FALSE(is_nested({2, 0}, {0, 2}));
  CHECK_FALSE(is_nested({1}, {0, 2}));
}

TEST_CASE("DP table boundary and monotonicity") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = support::continuous_catalog(12, rng);
    const DpTable dp(c, 6);
    for (std::size_t j = 0; j <= c.size(); ++j) CHECK(dp.value(0, j) == 0.0);
    for (std::size_t k = 0; k <= 6; ++k) CHECK(dp.value(k, c.size()) == 0.0);
    for (std::size_t k = 1; k <= 6; ++k) {
      for (std::size_t j = 0; j < c.size(); ++j) {
        CHECK(dp.value(k, j) >= dp.value(k, j + 1) - 1e-12);
        CHECK(dp.value(k, j) >= dp.value(k - 1, j) - 1e-12);
      }
    }
  }
}

TEST_CASE("fixed span DP matches exhaustive search and is L-optimal") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const auto c = trial % 2 == 0 ? support::continuous_catalog(n, rng) : support::grid_catalog(n, rng);
    const auto all = assort_opt(c, n);
    for (std::size_t x = 1; x <= n; ++x) {
      const auto sol = solve_fixed_span(c, x);
      const auto brute = support::brute_force(n, x, [&](const Ranking& r) { return support::fixed_value(r, x, c); });
      CHECK(sol.value == doctest::Approx(brute.value).epsilon(1e-9));
      CHECK(sol.ranking.size() == x);
      CHECK(ascending(sol.ranking));
      CHECK(sol.ranking == support::lex_min_of_length(brute.optima, x));
      CHECK(all.value(x) == doctest::Approx(sol.value).epsilon(1e-9));
      CHECK(all.at(x).ranking == sol.ranking);
    }
  }
}

TEST_CASE("full span ranks every product in index order") {
  std::mt19937_64 rng(5);
  const auto c = support::continuous_catalog(9, rng);
  Ranking expected(9);
  std::iota(expected.begin(), expected.end(), std::size_t{0});
  CHECK(solve_fixed_span(c, 9).ranking == expected);
}

TEST_CASE("nesting and decreasing margins on generated catalogs") {
  const SpanSpec spec{SpanKind::LinearTail, 20, 0.0, {}, 0};
  for (std::uint64_t i = 0; i < 60; ++i) {
    auto rng = make_stream(99, "instance", i);
    const auto inst = generate_instance(50, spec, rng);
    const auto sol = assort_opt(inst.catalog, 20);
    for (std::size_t x = 1; x <= 20; ++x) {
      CHECK(ascending(sol.at(x).ranking));
      CHECK(sol.value(x) == doctest::Approx(revenue_fixed_span(sol.at(x).ranking, x, inst.catalog)).epsilon(1e-12));
      if (x > 1) CHECK(is_nested(sol.at(x - 1).ranking, sol.at(x).ranking));
      if (x > 2) CHECK(sol.value(x) - sol.value(x - 1) <= sol.value(x - 1) - sol.value(x - 2) + 1e-9);
    }
  }
}
