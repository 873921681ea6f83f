#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rankopt/bandit.hpp"
#include "rankopt/bestx.hpp"
#include "rankopt/oracle.hpp"
#include "rankopt/sim.hpp"

using namespace rankopt;

TEST_CASE("named streams are reproducible and distinct") {
  auto a = make_stream(5, "customer", 1);
  auto b = make_stream(5, "customer", 1);
  auto c = make_stream(5, "customer", 2);
  auto d = make_stream(5, "feature", 1);
  auto e = make_stream(6, "customer", 1);
  const auto first = a();
  CHECK(first == b());
  CHECK(first != c());
  CHECK(first != d());
  CHECK(first != e());
}

TEST_CASE("span sampling follows the tail") {
  const auto dist = SpanDistribution::from_tail({1.0, 0.7, 0.4, 0.1});
  auto rng = make_stream(1, "customer");
  const int draws = 200000;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < draws; ++i) ++counts[sample_span(dist, rng)];
  CHECK(counts[0] == 0);
  for (std::size_t x = 1; x <= 4; ++x) {
    const double p = dist.mass(x);
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(counts[x] / double(draws) - p) < 3 * se);
  }
}

TEST_CASE("customer walk edge cases") {
  auto rng = make_stream(2, "customer");
  const auto sure = index_catalog({{"a", 1.0, 1.0}, {"b", 0.5, 0.3}});
  for (int i = 0; i < 100; ++i) {
    const auto out = simulate_customer({0, 1}, sure, 2, rng);
    CHECK(out.purchased);
    CHECK(out.position == 1);
  }
  std::vector<Product> never;
  for (int j = 0; j < 5; ++j) never.push_back({"z" + std::to_string(j), 1.0 + j, 0.0});
  const auto idle = Catalog::relaxed(never);
  const auto out = simulate_customer({0, 1, 2, 3, 4}, idle, 3, rng);
  CHECK_FALSE(out.purchased);
  CHECK(out.position == 3);
  CHECK_THROWS_AS(simulate_customer({0}, idle, 0, rng), InvalidInput);
}

TEST_CASE("purchase frequencies and revenue match the closed form") {
  const auto c = index_catalog({{"a", 8.0, 0.15}, {"b", 5.0, 0.3}, {"c", 3.0, 0.45}, {"d", 2.0, 0.6}});
  const auto dist = SpanDistribution::linear_tail(4);
  const Ranking sigma{0, 1, 2, 3};
  auto rng = make_stream(3, "customer");
  const int draws = 100000;
  std::vector<int> bought(4, 0);
  double revenue = 0.0, revenue_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const auto out = simulate_customer(sigma, c, sample_span(dist, rng), rng);
    if (!out.purchased) continue;
    ++bought[out.position - 1];
    const double r = c.price(sigma[out.position - 1]);
    revenue += r;
    revenue_sq += r * r;
  }
  double reach = 1.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double p = reach * c.lambda(sigma[k]) * dist.tail(k + 1);
    const double se = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(bought[k] / double(draws) - p) < 3 * se);
    reach *= 1.0 - c.lambda(sigma[k]);
  }
  const double mean = revenue / draws;
  const double se = std::sqrt((revenue_sq / draws - mean * mean) / draws);
  CHECK(std::abs(mean - revenue_random_span(sigma, dist, c)) < 3 * se);
}

TEST_CASE("multi-purchase customers") {
  const auto g = order_general({{"a", 4.0, 0.5, 0.8}, {"b", 3.0, 0.4, 0.6}, {"c", 1.0, 0.7, 0.3}});
  auto rng = make_stream(4, "customer");
  const int draws = 100000;
  std::vector<int> bought(3, 0);
  for (int i = 0; i < draws; ++i) {
    const auto out = simulate_general_customer({0, 1, 2}, g, 3, rng);
    CHECK(out.last_viewed >= 1);
    for (auto p : out.purchases) ++bought[p - 1];
  }
  double reach = 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double p = reach * g.lambda(k);
    CHECK(std::abs(bought[k] / double(draws) - p) < 3 * std::sqrt(p * (1 - p) / draws));
    reach *= g.cont(k);
  }
}

TEST_CASE("generated instances") {
  const SpanSpec spec{SpanKind::LinearTail, 20, 0.0, {}, 0};
  auto rng = make_stream(10, "instance", 0);
  const auto inst = generate_instance(200, spec, rng);
  auto again_rng = make_stream(10, "instance", 0);
  const auto again = generate_instance(200, spec, again_rng);
  REQUIRE(inst.catalog.size() == 200);
  for (std::size_t j = 0; j < 200; ++j) {
    CHECK(inst.catalog.price(j) == again.catalog.price(j));
    CHECK(inst.catalog.lambda(j) == again.catalog.lambda(j));
    CHECK(inst.catalog.price(j) > 0.0);
    CHECK(inst.catalog.price(j) <= 10.0);
    CHECK(inst.catalog.lambda(j) > 0.0);
    CHECK(inst.catalog.lambda(j) <= 0.5);
    if (j > 0) {
      CHECK(inst.catalog.price(j) <= inst.catalog.price(j - 1));
      CHECK(inst.catalog.lambda(j) >= inst.catalog.lambda(j - 1));
    }
  }
  CHECK(inst.dist.capacity() == 20);
}

TEST_CASE("adversarial instance") {
  const auto small = adversarial_instance(0.5, 0.1, 5);
  CHECK(small.catalog.size() == 6);
  const auto best = brute_force_optimal(small.catalog, small.dist, 5);
  CHECK(best.value == doctest::Approx(1.0).epsilon(1e-12));

  const auto wide = adversarial_instance(0.5, 1e-6, 200);
  const double bound = clairvoyant_bound(wide.catalog, wide.dist);
  CHECK(std::abs(bound - 1.5) < 0.015);
  CHECK_THROWS_AS(adversarial_instance(1.0, 0.1, 3), InvalidInput);
  CHECK_THROWS_AS(adversarial_instance(0.5, 0.6, 3), InvalidInput);
}

TEST_CASE("offline benchmark") {
  OfflineConfig config;
  config.instances = 30;
  config.n = 60;
  config.span = SpanSpec{SpanKind::Geometric, 8, 0.9, {}, 0};
  config.seed = 3;
  const auto report = run_offline_benchmark(config);
  REQUIRE(report.ratios.size() == 30);
  for (const auto& row : report.ratios) {
    for (double r : row) CHECK(r <= 1.0 + 1e-9);
  }
  const auto& rdm = report.summary[0];
  CHECK(rdm.heuristic == Heuristic::Random);
  for (std::size_t h = 1; h < report.summary.size(); ++h) CHECK(rdm.mean < report.summary[h].mean);

  config.threads = 3;
  const auto threaded = run_offline_benchmark(config);
  CHECK(threaded.ratios == report.ratios);

  CHECK(parse_heuristic("max_Span") == Heuristic::MaxSpan);
  CHECK_FALSE(parse_heuristic("nope").has_value());

  // Hill climbing is greedy filling from the empty ranking.
  auto rng = make_stream(3, "instance", 0);
  const auto inst = generate_instance(60, config.span, rng);
  const auto sol = assort_opt(inst.catalog, 8);
  auto hrng = make_stream(3, "heuristic", 0);
  CHECK(heuristic_ranking(Heuristic::GreedyHillClimbing, inst.catalog, inst.dist, sol, hrng) ==
        greedy_fill({}, inst.catalog, inst.dist, 8));
  const auto profit = heuristic_ranking(Heuristic::MaxExpProfit, inst.catalog, inst.dist, sol, hrng);
  CHECK(std::is_sorted(profit.begin(), profit.end()));
  CHECK(profit.size() == 8);
}

TEST_CASE("censored failure-rate estimates converge") {
  const auto c = index_catalog({{"a", 8.0, 0.1}, {"b", 5.0, 0.2}, {"c", 3.0, 0.3}, {"d", 2.0, 0.25}, {"e", 1.0, 0.15}});
  const auto dist = SpanDistribution::linear_tail(5);
  const auto truth = bandit::failure_rates(dist);
  bandit::EstimatorState state(1, 5, 1.0);
  const bandit::Matrix features = bandit::Matrix::Constant(5, 1, 0.2);
  auto rng = make_stream(8, "customer");
  for (int i = 0; i < 100000; ++i) {
    const auto out = simulate_customer({0, 1, 2, 3, 4}, c, sample_span(dist, rng), rng);
    state.update({0, 1, 2, 3, 4}, features, bandit::encode_observation(out.purchased, out.position, 5));
  }
  for (std::size_t k = 0; k + 1 < 5; ++k) {
    const auto n = static_cast<double>(state.counts()[k]);
    if (n < 1e4) continue;
    const double se = std::sqrt(truth[k] * (1 - truth[k]) / n);
    CHECK(std::abs(state.rate(k) - truth[k]) < 3 * se);
  }
}

TEST_CASE("bandit experiment is reproducible") {
  BanditConfig config;
  config.n = 30;
  config.capacity = 4;
  config.rounds = 150;
  config.replications = 2;
  config.span = SpanSpec{SpanKind::LinearTail, 4, 0.0, {}, 0};
  config.error_positions = {1, 2};
  const auto a = run_bandit_experiment(config);
  config.threads = 2;
  const auto b = run_bandit_experiment(config);
  REQUIRE(a.rounds.size() == 150);
  for (std::size_t t = 0; t < 150; ++t) {
    CHECK(a.rounds[t].mean == b.rounds[t].mean);
    CHECK(a.rounds[t].h_est == b.rounds[t].h_est);
    CHECK(a.rounds[t].lb <= a.rounds[t].mean);
    CHECK(a.rounds[t].mean > 0.0);
  }
  config.error_positions = {4};
  CHECK_THROWS_AS(run_bandit_experiment(config), InvalidInput);
}
