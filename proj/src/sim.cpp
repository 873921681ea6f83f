#include "rankopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "rankopt/bestx.hpp"
#include "rankopt/parallel.hpp"

namespace rankopt {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double positive_uniform(double hi, Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, hi);
  double v = dist(rng);
  while (!(v > 0.0)) v = dist(rng);
  return v;
}

void normalize(bandit::Vector& v) {
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index) {
  // FNV-1a over the name, then mixed with the seed and index.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state ^= h;
  mixed ^= splitmix64(state);
  state ^= index * 0xd1b54a32d192ed03ULL;
  mixed ^= splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(mixed), static_cast<std::uint32_t>(mixed >> 32),
                    static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(index)};
  return Rng(seq);
}

std::size_t sample_span(const SpanDistribution& dist, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::size_t x = 0;
  while (x < dist.capacity() && dist.tail(x + 1) > u) ++x;
  return std::max<std::size_t>(x, 1);
}

CustomerOutcome simulate_customer(const Ranking& ranking, const Catalog& catalog, std::size_t span, Rng& rng) {
  if (span == 0) throw InvalidInput("span must be at least 1");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t len = std::min(span, ranking.size());
  for (std::size_t k = 0; k < len; ++k) {
    if (coin(rng) < catalog.lambda(ranking[k])) return {true, k + 1};
  }
  return {false, len};
}

GeneralOutcome simulate_general_customer(const Ranking& ranking, const GeneralCatalog& catalog, std::size_t span,
                                         Rng& rng) {
  if (span == 0) throw InvalidInput("span must be at least 1");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  GeneralOutcome out;
  const std::size_t len = std::min(span, ranking.size());
  for (std::size_t k = 0; k < len; ++k) {
    out.last_viewed = k + 1;
    const std::size_t j = ranking[k];
    if (coin(rng) < catalog.lambda(j)) out.purchases.push_back(k + 1);
    if (!(coin(rng) < catalog.cont(j))) break;
  }
  return out;
}

Catalog generate_catalog(std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidInput("catalog size must be positive");
  for (int attempt = 0;; ++attempt) {
    std::vector<double> prices(n), lambdas(n);
    for (auto& r : prices) r = positive_uniform(10.0, rng);
    for (auto& l : lambdas) l = positive_uniform(0.5, rng);
    std::sort(prices.begin(), prices.end(), std::greater<>());
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<Product> products(n);
    for (std::size_t j = 0; j < n; ++j) products[j] = Product{fmt::format("p{}", j + 1), prices[j], lambdas[j]};
    try {
      return Catalog::index(std::move(products));
    } catch (const InvalidInput&) {
      // Duplicate (price, lambda) draws; vanishingly rare.
      if (attempt > 100) throw;
    }
  }
}

Instance generate_instance(std::size_t n, const SpanSpec& span, Rng& rng) {
  Instance inst;
  inst.dist = make_span_distribution(span);
  inst.catalog = generate_catalog(n, rng);
  return inst;
}

Instance adversarial_instance(double alpha, double lambda_small, std::size_t capacity) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput(fmt::format("alpha {} outside (0,1)", alpha));
  if (!(lambda_small > 0.0 && lambda_small <= 1.0 - alpha)) {
    throw InvalidInput(fmt::format("lambda_small {} outside (0, 1 - alpha]", lambda_small));
  }
  if (capacity == 0) throw InvalidInput("capacity must be positive");
  std::vector<Product> products;
  products.reserve(capacity + 1);
  products.push_back({"p1", 1.0, 1.0});
  const double price = (1.0 - alpha) / lambda_small;
  for (std::size_t j = 0; j < capacity; ++j) products.push_back({fmt::format("p{}", j + 2), price, lambda_small});
  return Instance{Catalog::relaxed(std::move(products)), SpanDistribution::geometric(alpha, capacity)};
}

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::Random: return "rdm";
    case Heuristic::MaxSpan: return "max_Span";
    case Heuristic::MaxExpProfit: return "max_ExpProfit";
    case Heuristic::GreedyHillClimbing: return "max_GreedyHillClimbing";
    case Heuristic::BestX: return "bestx";
    case Heuristic::BestXFill: return "bestx_fill";
  }
  return "unknown";
}

std::vector<Heuristic> all_heuristics() {
  return {Heuristic::Random, Heuristic::MaxSpan, Heuristic::MaxExpProfit, Heuristic::GreedyHillClimbing,
          Heuristic::BestX, Heuristic::BestXFill};
}

std::optional<Heuristic> parse_heuristic(std::string_view name) {
  for (Heuristic h : all_heuristics()) {
    if (heuristic_name(h) == name) return h;
  }
  return std::nullopt;
}

Ranking heuristic_ranking(Heuristic h, const Catalog& catalog, const SpanDistribution& dist,
                          const FixedSpanSolution& solution, Rng& rng) {
  const std::size_t m = std::min(dist.capacity(), catalog.size());
  switch (h) {
    case Heuristic::Random: {
      Ranking all(catalog.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(m);
      return all;
    }
    case Heuristic::MaxSpan:
      return solution.at(m).ranking;
    case Heuristic::MaxExpProfit: {
      Ranking all(catalog.size());
      std::iota(all.begin(), all.end(), std::size_t{0});
      auto gain = [&](std::size_t j) { return catalog.lambda(j) * catalog.price(j); };
      std::stable_sort(all.begin(), all.end(), [&](std::size_t a, std::size_t b) { return gain(a) > gain(b); });
      all.resize(m);
      std::sort(all.begin(), all.end());
      return all;
    }
    case Heuristic::GreedyHillClimbing:
      return greedy_fill({}, catalog, dist, m);
    case Heuristic::BestX:
      return best_x(catalog, dist, solution, false).ranking;
    case Heuristic::BestXFill:
      return best_x(catalog, dist, solution, true).ranking;
  }
  return {};
}

OfflineReport run_offline_benchmark(const OfflineConfig& config) {
  if (config.instances == 0) throw InvalidInput("instance count must be positive");
  if (config.heuristics.empty()) throw InvalidInput("heuristic list is empty");
  const auto dist = make_span_distribution(config.span);
  if (config.n < dist.capacity()) {
    throw InvalidInput(fmt::format("n = {} is smaller than the span capacity {}", config.n, dist.capacity()));
  }

  OfflineReport report;
  report.heuristics = config.heuristics;
  report.histogram_bins = std::max<std::size_t>(config.histogram_bins, 1);
  report.clairvoyant.resize(config.instances);
  report.ratios.assign(config.instances, std::vector<double>(config.heuristics.size(), 0.0));

  parallel_for(config.instances, config.threads, [&](std::size_t i) {
    auto inst_rng = make_stream(config.seed, "instance", i);
    auto heur_rng = make_stream(config.seed, "heuristic", i);
    const Catalog catalog = generate_catalog(config.n, inst_rng);
    const auto solution = assort_opt(catalog, dist.capacity());
    const double bound = clairvoyant_bound(solution, dist);
    report.clairvoyant[i] = bound;
    for (std::size_t h = 0; h < config.heuristics.size(); ++h) {
      const auto ranking = heuristic_ranking(config.heuristics[h], catalog, dist, solution, heur_rng);
      report.ratios[i][h] = bound > 0.0 ? revenue_random_span(ranking, dist, catalog) / bound : 0.0;
    }
  });

  const std::size_t bins = report.histogram_bins;
  for (std::size_t h = 0; h < config.heuristics.size(); ++h) {
    HeuristicSummary s;
    s.heuristic = config.heuristics[h];
    s.histogram.assign(bins, 0);
    s.min = report.ratios[0][h];
    s.max = report.ratios[0][h];
    for (const auto& row : report.ratios) {
      s.min = std::min(s.min, row[h]);
      s.max = std::max(s.max, row[h]);
      s.mean += row[h];
      const auto bucket = static_cast<std::size_t>(std::clamp(row[h], 0.0, 1.0) * static_cast<double>(bins));
      ++s.histogram[std::min(bucket, bins - 1)];
    }
    s.mean /= static_cast<double>(config.instances);
    report.summary.push_back(std::move(s));
  }
  return report;
}

BanditEnvironment make_environment(const BanditConfig& config, std::size_t replication) {
  BanditEnvironment env;
  auto rng = make_stream(config.seed, "instance", replication);
  env.prices.resize(config.n);
  for (auto& r : env.prices) r = positive_uniform(10.0, rng);

  const auto n = static_cast<Eigen::Index>(config.n);
  const auto dp = static_cast<Eigen::Index>(config.product_dim);
  env.product_features.resize(n, dp);
  std::normal_distribution<double> product_draw(config.product_mean, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    bandit::Vector s(dp);
    for (Eigen::Index i = 0; i < dp; ++i) {
      s(i) = product_draw(rng);
      if (config.nonnegative) s(i) = std::abs(s(i));
    }
    normalize(s);
    env.product_features.row(j) = s.transpose();
  }

  // theta* is shared by all replications.
  auto theta_rng = make_stream(config.seed, "theta", 0);
  std::normal_distribution<double> theta_draw(config.theta_mean, 1.0);
  env.theta_star.resize(dp * static_cast<Eigen::Index>(config.customer_dim));
  for (Eigen::Index i = 0; i < env.theta_star.size(); ++i) {
    env.theta_star(i) = theta_draw(theta_rng);
    if (config.nonnegative) env.theta_star(i) = std::abs(env.theta_star(i));
  }
  normalize(env.theta_star);
  env.theta_star *= config.theta_norm;
  return env;
}

bandit::Vector draw_customer(const BanditConfig& config, Rng& rng) {
  std::normal_distribution<double> draw(config.customer_mean, std::sqrt(config.customer_variance));
  bandit::Vector y(static_cast<Eigen::Index>(config.customer_dim));
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    y(k) = draw(rng);
    if (config.nonnegative) y(k) = std::abs(y(k));
  }
  normalize(y);
  return y;
}

std::vector<double> true_lambdas(const BanditConfig& config, const BanditEnvironment& env,
                                 const bandit::Matrix& features) {
  const bandit::Vector raw = features * env.theta_star;
  std::vector<double> out(static_cast<std::size_t>(raw.size()));
  for (Eigen::Index j = 0; j < raw.size(); ++j) {
    out[static_cast<std::size_t>(j)] = std::clamp(raw(j), config.lambda_floor, 1.0 - config.lambda_floor);
  }
  return out;
}

namespace {

void check_bandit_config(const BanditConfig& config, const SpanDistribution& dist) {
  if (config.capacity == 0 || config.n < config.capacity) {
    throw InvalidInput(fmt::format("need 1 <= M <= n, got M = {}, n = {}", config.capacity, config.n));
  }
  if (config.product_dim == 0 || config.customer_dim == 0) throw InvalidInput("feature dimensions must be positive");
  if (config.rounds == 0 || config.replications == 0) throw InvalidInput("rounds and replications must be positive");
  if (dist.capacity() > config.capacity) {
    throw InvalidInput(fmt::format("span support {} exceeds the slate size {}", dist.capacity(), config.capacity));
  }
  for (std::size_t k : config.error_positions) {
    if (k == 0 || k >= config.capacity) {
      throw InvalidInput(fmt::format("error position {} outside 1..{}", k, config.capacity - 1));
    }
  }
  if (!(config.lambda_floor > 0.0 && config.lambda_floor < 0.5)) throw InvalidInput("lambda floor outside (0, 0.5)");
}

std::vector<double> padded_failure_rates(const SpanDistribution& dist, std::size_t capacity) {
  auto h = bandit::failure_rates(dist);
  h.resize(capacity, 1.0);
  return h;
}

}  // namespace

ReplicationTrace run_bandit_replication(const BanditConfig& config, std::size_t replication,
                                        const RoundObserver& observer) {
  const auto dist = make_span_distribution(config.span);
  check_bandit_config(config, dist);
  const auto env = make_environment(config, replication);
  const auto truth = padded_failure_rates(dist, config.capacity);
  auto feature_rng = make_stream(config.seed, "feature", replication);
  auto customer_rng = make_stream(config.seed, "customer", replication);

  const std::size_t d = config.product_dim * config.customer_dim;
  bandit::EstimatorState state(d, config.capacity, config.gamma);
  const bandit::UcbParams params{config.gamma, config.norm_bound};

  ReplicationTrace trace;
  trace.ratio.reserve(config.rounds);
  trace.revenue.reserve(config.rounds);
  trace.clairvoyant.reserve(config.rounds);
  trace.h_est_error.assign(config.error_positions.size(), {});
  trace.h_optm_error.assign(config.error_positions.size(), {});

  std::vector<Product> products(config.n);
  std::vector<std::size_t> position_of(config.n);
  for (std::size_t t = 1; t <= config.rounds; ++t) {
    const bandit::Vector y = draw_customer(config, feature_rng);
    const bandit::Matrix features = bandit::vectorize_all(env.product_features, y);
    const auto lambda = true_lambdas(config, env, features);

    const auto decision = bandit::rank_ucb_step(state, env.prices, features, params);

    for (std::size_t j = 0; j < config.n; ++j) products[j] = Product{std::to_string(j), env.prices[j], lambda[j]};
    const Catalog truth_catalog = Catalog::relaxed(products);
    for (std::size_t i = 0; i < config.n; ++i) position_of[truth_catalog.source_index(i)] = i;
    Ranking slate;
    slate.reserve(decision.slate.size());
    for (std::size_t j : decision.slate) slate.push_back(position_of[j]);

    const auto benchmark = best_x(truth_catalog, dist, true);
    const double revenue = revenue_random_span(slate, dist, truth_catalog);
    trace.revenue.push_back(revenue);
    trace.clairvoyant.push_back(benchmark.clairvoyant);
    trace.ratio.push_back(benchmark.expected_revenue > 0.0 ? revenue / benchmark.expected_revenue : 0.0);

    if (observer) observer(RoundContext{t, decision, lambda, dist, state});

    const std::size_t span = sample_span(dist, customer_rng);
    const auto outcome = simulate_customer(slate, truth_catalog, span, customer_rng);
    const auto obs = bandit::encode_observation(outcome.purchased, outcome.position, config.capacity);
    state.update(decision.slate, features, obs);

    for (std::size_t e = 0; e < config.error_positions.size(); ++e) {
      const std::size_t k = config.error_positions[e] - 1;
      trace.h_est_error[e].push_back(std::abs(state.rate(k) - truth[k]));
      trace.h_optm_error[e].push_back(std::abs(decision.estimates.h_lower[k] - truth[k]));
    }
  }
  return trace;
}

BanditReport run_bandit_experiment(const BanditConfig& config) {
  const auto dist = make_span_distribution(config.span);
  check_bandit_config(config, dist);

  std::vector<ReplicationTrace> traces(config.replications);
  parallel_for(config.replications, config.threads,
               [&](std::size_t r) { traces[r] = run_bandit_replication(config, r); });

  BanditReport report;
  report.error_positions = config.error_positions;
  report.true_failure_rates = padded_failure_rates(dist, config.capacity);
  const double reps = static_cast<double>(config.replications);
  const std::size_t errors = config.error_positions.size();
  std::vector<double> cumulative(config.replications, 0.0);
  report.rounds.reserve(config.rounds);
  for (std::size_t t = 0; t < config.rounds; ++t) {
    BanditRound row;
    row.round = t + 1;
    double sum = 0.0;
    for (const auto& tr : traces) sum += tr.ratio[t];
    row.mean = sum / reps;
    double var = 0.0;
    if (config.replications > 1) {
      for (const auto& tr : traces) var += (tr.ratio[t] - row.mean) * (tr.ratio[t] - row.mean);
      var /= reps - 1.0;
    }
    const double se = std::sqrt(var / reps);
    row.ub = row.mean + se;
    row.lb = row.mean - se;
    row.h_est.assign(errors, 0.0);
    row.h_optm.assign(errors, 0.0);
    double regret = 0.0;
    for (std::size_t r = 0; r < config.replications; ++r) {
      const auto& tr = traces[r];
      for (std::size_t e = 0; e < errors; ++e) {
        row.h_est[e] += tr.h_est_error[e][t] / reps;
        row.h_optm[e] += tr.h_optm_error[e][t] / reps;
      }
      cumulative[r] += tr.clairvoyant[t] - std::numbers::e * tr.revenue[t];
      regret += cumulative[r] / static_cast<double>(t + 1);
    }
    row.scaled_regret = regret / reps;
    report.rounds.push_back(std::move(row));
  }
  return report;
}

}  // namespace rankopt
