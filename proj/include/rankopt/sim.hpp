#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankopt/bandit.hpp"
#include "rankopt/fixed_span.hpp"
#include "rankopt/instance.hpp"
#include "rankopt/multi_purchase.hpp"

namespace rankopt {

using Rng = std::mt19937_64;

// Independent generator for (seed, stream name, index). Streams used by the
// harness: "instance", "customer", "feature", "theta", "heuristic".
Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t index = 0);

// X = #{x : G_x > u} for u ~ U[0,1).
std::size_t sample_span(const SpanDistribution& dist, Rng& rng);

struct CustomerOutcome {
  bool purchased = false;
  std::size_t position = 0;  // 1-based exit position; 0 for an empty walk
};

CustomerOutcome simulate_customer(const Ranking& ranking, const Catalog& catalog, std::size_t span, Rng& rng);

struct GeneralOutcome {
  std::vector<std::size_t> purchases;  // 1-based positions
  std::size_t last_viewed = 0;
};

// Purchases and continuation are independent coin flips at every position.
GeneralOutcome simulate_general_customer(const Ranking& ranking, const GeneralCatalog& catalog, std::size_t span,
                                         Rng& rng);

struct Instance {
  Catalog catalog;
  SpanDistribution dist;
};

// Prices U[0,10] and purchase probabilities U[0,0.5] sorted in opposite
// orders, so r_j >= r_{j+1} and lambda_j <= lambda_{j+1}.
Catalog generate_catalog(std::size_t n, Rng& rng);
Instance generate_instance(std::size_t n, const SpanSpec& span, Rng& rng);

// Product "p1" = (1, 1) plus M copies of (1 - alpha)/lambda_small with
// purchase probability lambda_small, under G_k = alpha^{k-1} truncated at M.
Instance adversarial_instance(double alpha, double lambda_small, std::size_t capacity);

// Offline heuristics compared against the clairvoyant bound.
enum class Heuristic { Random, MaxSpan, MaxExpProfit, GreedyHillClimbing, BestX, BestXFill };

std::string_view heuristic_name(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);
std::vector<Heuristic> all_heuristics();

Ranking heuristic_ranking(Heuristic h, const Catalog& catalog, const SpanDistribution& dist,
                          const FixedSpanSolution& solution, Rng& rng);

struct OfflineConfig {
  std::size_t instances = 1000;
  std::size_t n = 1000;
  SpanSpec span{SpanKind::LinearTail, 20, 0.0, {}};
  std::uint64_t seed = 1;
  std::vector<Heuristic> heuristics = all_heuristics();
  std::size_t histogram_bins = 20;
  unsigned threads = 1;
};

struct HeuristicSummary {
  Heuristic heuristic{};
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::vector<std::size_t> histogram;
};

struct OfflineReport {
  std::vector<Heuristic> heuristics;
  std::vector<double> clairvoyant;          // per instance
  std::vector<std::vector<double>> ratios;  // [instance][heuristic]
  std::vector<HeuristicSummary> summary;
  std::size_t histogram_bins = 0;
};

OfflineReport run_offline_benchmark(const OfflineConfig& config);

struct BanditConfig {
  std::size_t n = 200;
  std::size_t capacity = 10;
  std::size_t product_dim = 5;
  std::size_t customer_dim = 3;
  std::size_t rounds = 5000;
  double gamma = 1.0;
  double norm_bound = 1.0;
  std::uint64_t seed = 1;
  SpanSpec span{SpanKind::LinearTail, 10, 0.0, {}};
  std::size_t replications = 5;
  std::vector<std::size_t> error_positions{1, 3, 5};  // 1-based k for h{k} columns
  double theta_norm = 0.906;
  double theta_mean = 0.25;
  double product_mean = 0.25;
  double customer_mean = 1.0;
  double customer_variance = 0.1;
  double lambda_floor = 1e-6;
  // Take absolute values of product features and theta*, so every inner
  // product lies in (0, 1) and no clamping happens.
  bool nonnegative = false;
  unsigned threads = 1;
};

struct BanditEnvironment {
  std::vector<double> prices;
  bandit::Matrix product_features;  // n x d_p, rows normalized
  bandit::Vector theta_star;        // d_p * d_c
};

BanditEnvironment make_environment(const BanditConfig& config, std::size_t replication);
bandit::Vector draw_customer(const BanditConfig& config, Rng& rng);
std::vector<double> true_lambdas(const BanditConfig& config, const BanditEnvironment& env,
                                 const bandit::Matrix& features);

struct RoundContext {
  std::size_t round = 0;  // 1-based
  const bandit::UcbDecision& decision;
  std::span<const double> lambda;  // true purchase probabilities, per product
  const SpanDistribution& dist;
  const bandit::EstimatorState& state;  // before this round's update
};

using RoundObserver = std::function<void(const RoundContext&)>;

struct ReplicationTrace {
  std::vector<double> ratio;        // E[R(sigma_t)] / E[R(filled Best-x with true parameters)]
  std::vector<double> revenue;      // E[R(sigma_t)]
  std::vector<double> clairvoyant;  // clairvoyant bound for customer t
  std::vector<std::vector<double>> h_est_error;   // [position][round]
  std::vector<std::vector<double>> h_optm_error;  // [position][round]
};

ReplicationTrace run_bandit_replication(const BanditConfig& config, std::size_t replication,
                                        const RoundObserver& observer = {});

struct BanditRound {
  std::size_t round = 0;
  double mean = 0.0;
  double ub = 0.0;
  double lb = 0.0;
  std::vector<double> h_est;
  std::vector<double> h_optm;
  // Cumulative scaled regret / t, averaged over replications. The unknown
  // optimum is replaced by the clairvoyant bound, which dominates it.
  double scaled_regret = 0.0;
};

struct BanditReport {
  std::vector<std::size_t> error_positions;
  std::vector<BanditRound> rounds;
  std::vector<double> true_failure_rates;
};

BanditReport run_bandit_experiment(const BanditConfig& config);

}  // namespace rankopt
