#include <doctest.h>

#include <random>

#include "rankopt/fixed_span.hpp"
#include "rankopt/multi_purchase.hpp"
#include "support/support.hpp"

using namespace rankopt;

TEST_CASE("general revenue") {
  const auto base = index_catalog({{"one", 1.0, 1.0}, {"two", 9.0, 0.1}, {"three", 1.9, 0.52}});
  const auto general = order_general(as_general(base));
  // Scores reduce to prices, so the orders agree.
  for (std::size_t i = 0; i < base.size(); ++i) CHECK(general[i].id == base[i].id);
  CHECK(revenue_general({0, 2}, 2, general) == doctest::Approx(1.8).epsilon(1e-12));

  const auto two = order_general({{"a", 1.0, 0.5, 0.9}, {"b", 1.0 + 1e-9, 0.5, 0.9}});
  CHECK(revenue_general({1, 0}, 2, two) == doctest::Approx(0.95).epsilon(1e-8));
  CHECK(revenue_general({1, 0}, 1, two) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("general ordering") {
  const auto c = order_general({{"B", 3.0, 0.3, 0.1}, {"A", 2.0, 0.5, 0.25}});
  CHECK(c[0].id == "A");
  CHECK(c.source_index(0) == 1);
  CHECK(c.score(0) == doctest::Approx(2.0 * 0.5 / 0.75));
  CHECK(order_general({{"x", 1.0, 0.5, 0.5}}).size() == 1);

  CHECK_THROWS_AS(order_general({{"a", 1.0, 0.5, 0.5}, {"b", 0.5, 1.0, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(order_general({{"a", 1.0, 0.5, 1.0}}), InvalidInput);
  CHECK_THROWS_AS(order_general({{"a", 1.0, 0.0, 0.5}}), InvalidInput);
  CHECK_THROWS_AS(order_general({{"a", 0.0, 0.5, 0.5}}), InvalidInput);
}

TEST_CASE("general DP matches exhaustive search") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 7;
    const auto c = support::random_general(n, rng);
    for (std::size_t x = 1; x <= n; ++x) {
      const auto sol = solve_general_fixed_span(c, x);
      const auto brute = support::brute_force(n, x, [&](const Ranking& r) { return support::general_value(r, x, c); });
      CHECK(sol.value == doctest::Approx(brute.value).epsilon(1e-9));
      CHECK(sol.ranking == brute.optima.front());
      CHECK(std::is_sorted(sol.ranking.begin(), sol.ranking.end()));
      for (std::size_t k = 1; k < sol.ranking.size(); ++k) {
        Ranking swapped = sol.ranking;
        std::swap(swapped[k - 1], swapped[k]);
        CHECK(revenue_general(swapped, x, c) <= sol.value + 1e-12);
      }
    }
    CHECK(solve_general_fixed_span(c, n).ranking.size() == n);
  }
  const auto c = support::random_general(3, rng);
  CHECK_THROWS_AS(solve_general_fixed_span(c, 4), InvalidInput);
  CHECK_THROWS_AS(solve_general_fixed_span(c, 0), InvalidInput);
}

TEST_CASE("base model is the special case c = 1 - lambda") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto base = support::continuous_catalog(9, rng);
    const auto general = order_general(as_general(base));
    for (std::size_t x = 1; x <= 9; ++x) {
      CHECK(solve_general_fixed_span(general, x).value == doctest::Approx(solve_fixed_span(base, x).value).epsilon(1e-12));
    }
  }
}

TEST_CASE("nesting, margins and the score bound on general catalogs") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = support::random_general(30, rng);
    const auto all = general_all_spans(c, 10);
    for (std::size_t x = 1; x <= 10; ++x) {
      CHECK(all.value(x) == doctest::Approx(solve_general_fixed_span(c, x).value).epsilon(1e-12));
      if (x > 1) CHECK(is_nested(all.at(x - 1).ranking, all.at(x).ranking));
      if (x > 2) CHECK(all.value(x) - all.value(x - 1) <= all.value(x - 1) - all.value(x - 2) + 1e-9);
    }
    // r_k lambda_k / (1 - c_k) bounds the best revenue from products k..n.
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::vector<GeneralProduct> suffix(c.products().begin() + static_cast<std::ptrdiff_t>(k), c.products().end());
      const auto tail = order_general(suffix);
      CHECK(c.score(k) >= solve_general_fixed_span(tail, tail.size()).value - 1e-9);
    }
  }
}

TEST_CASE("random span wrapper and best-x rule") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = support::random_general(8, rng);
    const auto tail = support::random_ifr_tail(6, rng);
    const auto dist = SpanDistribution::from_tail(tail);
    Ranking r{0, 3, 5, 1};
    double mixture = 0.0;
    for (std::size_t x = 1; x <= dist.capacity(); ++x) mixture += dist.mass(x) * revenue_general(r, x, c);
    CHECK(revenue_general_random(r, dist, c) == doctest::Approx(mixture).epsilon(1e-12));

    const auto res = best_x_general(c, dist);
    CHECK(res.chosen_x >= 1);
    CHECK(res.lower_bound <= res.expected_revenue + 1e-12);
    CHECK(res.expected_revenue <= res.clairvoyant + 1e-12);
  }
}
