#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rankopt/instance.hpp"

namespace rankopt::bandit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// vec(s y^T) laid out row-major over s then y: x[i * d_c + k] = s_i * y_k.
// With theta = vec(Theta) in the same layout, x^T theta = s^T Theta y.
Vector vectorize_features(const Vector& product, const Vector& customer);

// Row j holds the vectorized feature of product j for this customer.
Matrix vectorize_all(const Matrix& product_features, const Vector& customer);

// Censored encoding of one customer's outcome. Arrays are indexed by
// position k = 0..M-1 (position k + 1 in 1-based terms).
struct Observation {
  bool purchased = false;
  std::size_t position = 0;  // 1-based Upsilon
  std::vector<std::uint8_t> y, z, observed_y, observed_z;
};

// Requires 1 <= position <= capacity.
Observation encode_observation(bool purchased, std::size_t position, std::size_t capacity);

// 0.5 * sqrt(d ln(1 + tM/(gamma d)) + 4 ln(t + 1)) + D sqrt(gamma)
double confidence_radius(std::size_t t, std::size_t capacity, std::size_t dim, double gamma, double norm_bound);

// Ridge statistics for theta and censored counts for the failure rates.
class EstimatorState {
 public:
  EstimatorState(std::size_t dim, std::size_t capacity, double gamma);

  std::size_t dim() const { return static_cast<std::size_t>(gram_.rows()); }
  std::size_t capacity() const { return counts_.size(); }
  double gamma() const { return gamma_; }
  // Number of completed rounds.
  std::size_t round() const { return round_; }

  const Matrix& gram() const { return gram_; }
  const Vector& moment() const { return moment_; }
  const Vector& theta_hat() const { return theta_; }
  // V^{-1}, refreshed after every update.
  const Matrix& gram_inverse() const { return gram_inverse_; }
  std::span<const std::uint64_t> counts() const { return counts_; }
  // h_hat_k = (# exits observed at k) / N_k, or 0 while N_k = 0.
  double rate(std::size_t k) const;

  // slate[k] indexes rows of `features`.
  void update(const Ranking& slate, const Matrix& features, const Observation& obs);

 private:
  void refresh();

  double gamma_;
  Matrix gram_;
  Vector moment_;
  Vector theta_;
  Matrix gram_inverse_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> exits_;
  std::size_t round_ = 0;
};

void update_estimators(EstimatorState& state, const Ranking& slate, const Matrix& features, const Observation& obs);

struct OptimisticEstimates {
  std::vector<double> u;        // per product, in [0, 1]
  std::vector<double> h_lower;  // k = 1..M-1
  std::vector<double> g_upper;  // x = 1..M, G^U_1 = 1
};

// Estimates for the upcoming round t = state.round() + 1. The failure-rate
// radius uses sqrt(ln(t + 1) / N_k); h^L_k = 0 while N_k = 0.
OptimisticEstimates optimistic_estimates(const EstimatorState& state, const Matrix& features, double rho);

struct UcbParams {
  double gamma = 1.0;
  double norm_bound = 1.0;  // D
};

struct UcbDecision {
  Ranking slate;  // product indices (rows of `features`), exactly min(M, n) of them
  OptimisticEstimates estimates;
  double rho = 0.0;
};

// One RankUCB decision: optimistic estimates, Best-x on (prices, u, G^U),
// then greedy filling to M positions. Does not modify the state.
UcbDecision rank_ucb_step(const EstimatorState& state, std::span<const double> prices, const Matrix& features,
                          const UcbParams& params);

// h_k = (G_k - G_{k+1}) / G_k for k < M, h_M = 1.
std::vector<double> failure_rates(const SpanDistribution& dist);

}  // namespace rankopt::bandit
