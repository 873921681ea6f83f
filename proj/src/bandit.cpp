#include "rankopt/bandit.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "rankopt/bestx.hpp"

namespace rankopt::bandit {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

Vector vectorize_features(const Vector& product, const Vector& customer) {
  if (product.size() == 0 || customer.size() == 0) throw InvalidInput("feature vectors must be non-empty");
  const Eigen::Index dc = customer.size();
  Vector x(product.size() * dc);
  for (Eigen::Index i = 0; i < product.size(); ++i) x.segment(i * dc, dc) = product(i) * customer;
  return x;
}

Matrix vectorize_all(const Matrix& product_features, const Vector& customer) {
  const Eigen::Index dc = customer.size();
  const Eigen::Index dp = product_features.cols();
  Matrix out(product_features.rows(), dp * dc);
  for (Eigen::Index j = 0; j < product_features.rows(); ++j) {
    for (Eigen::Index i = 0; i < dp; ++i) out.row(j).segment(i * dc, dc) = product_features(j, i) * customer.transpose();
  }
  return out;
}

Observation encode_observation(bool purchased, std::size_t position, std::size_t capacity) {
  if (position < 1 || position > capacity) {
    throw InvalidInput(fmt::format("exit position {} outside 1..{}", position, capacity));
  }
  Observation obs;
  obs.purchased = purchased;
  obs.position = position;
  obs.y.assign(capacity, 0);
  obs.z.assign(capacity, 0);
  obs.observed_y.assign(capacity, 0);
  obs.observed_z.assign(capacity, 0);
  const std::size_t last = position - 1;
  for (std::size_t k = 0; k <= last; ++k) obs.observed_z[k] = 1;
  if (purchased) {
    obs.z[last] = 1;
    for (std::size_t k = 0; k < last; ++k) obs.observed_y[k] = 1;
  } else {
    obs.y[last] = 1;
    for (std::size_t k = 0; k <= last; ++k) obs.observed_y[k] = 1;
  }
  return obs;
}

double confidence_radius(std::size_t t, std::size_t capacity, std::size_t dim, double gamma, double norm_bound) {
  if (dim == 0 || !(gamma > 0.0)) throw InvalidInput("confidence radius needs d >= 1 and gamma > 0");
  const double d = static_cast<double>(dim);
  const double tt = static_cast<double>(t);
  const double inner = d * std::log1p(tt * static_cast<double>(capacity) / (gamma * d)) + 4.0 * std::log1p(tt);
  return 0.5 * std::sqrt(inner) + norm_bound * std::sqrt(gamma);
}

EstimatorState::EstimatorState(std::size_t dim, std::size_t capacity, double gamma)
    : gamma_(gamma),
      gram_(gamma * Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))),
      moment_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      theta_(Vector::Zero(static_cast<Eigen::Index>(dim))),
      gram_inverse_(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)) / gamma),
      counts_(capacity, 0),
      exits_(capacity, 0) {
  if (dim == 0 || capacity == 0) throw InvalidInput("estimator needs d >= 1 and M >= 1");
  if (!(gamma >= 1.0)) throw InvalidInput(fmt::format("gamma must be at least 1, got {}", gamma));
}

double EstimatorState::rate(std::size_t k) const {
  return counts_[k] == 0 ? 0.0 : static_cast<double>(exits_[k]) / static_cast<double>(counts_[k]);
}

void EstimatorState::update(const Ranking& slate, const Matrix& features, const Observation& obs) {
  const std::size_t m = capacity();
  if (obs.observed_z.size() != m) throw InvalidInput("observation length does not match the estimator capacity");
  if (features.cols() != gram_.rows()) throw InvalidInput("feature dimension does not match the estimator");
  for (std::size_t k = 0; k < m; ++k) {
    if (obs.observed_z[k] && k < slate.size()) {
      const auto row = static_cast<Eigen::Index>(slate[k]);
      const Vector x = features.row(row).transpose();
      gram_.selfadjointView<Eigen::Lower>().rankUpdate(x);
      if (obs.z[k]) moment_ += x;
    }
    if (obs.observed_y[k]) {
      ++counts_[k];
      exits_[k] += obs.y[k];
    }
  }
  gram_ = gram_.selfadjointView<Eigen::Lower>();
  ++round_;
  refresh();
}

void EstimatorState::refresh() {
  const Eigen::LDLT<Matrix> ldlt(gram_);
  theta_ = ldlt.solve(moment_);
  gram_inverse_ = ldlt.solve(Matrix::Identity(gram_.rows(), gram_.cols()));
}

void update_estimators(EstimatorState& state, const Ranking& slate, const Matrix& features, const Observation& obs) {
  state.update(slate, features, obs);
}

OptimisticEstimates optimistic_estimates(const EstimatorState& state, const Matrix& features, double rho) {
  OptimisticEstimates est;
  const Vector mean = features * state.theta_hat();
  const Matrix scaled = features * state.gram_inverse();
  est.u.resize(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index j = 0; j < features.rows(); ++j) {
    const double width = std::sqrt(std::max(0.0, scaled.row(j).dot(features.row(j))));
    est.u[static_cast<std::size_t>(j)] = clamp01(mean(j) + rho * width);
  }

  const std::size_t m = state.capacity();
  const double log_t = std::log(static_cast<double>(state.round() + 2));
  est.h_lower.resize(m - 1);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const auto n = state.counts()[k];
    est.h_lower[k] = n == 0 ? 0.0 : clamp01(state.rate(k) - std::sqrt(log_t / static_cast<double>(n)));
  }
  est.g_upper.resize(m);
  est.g_upper[0] = 1.0;
  for (std::size_t x = 1; x < m; ++x) est.g_upper[x] = est.g_upper[x - 1] * (1.0 - est.h_lower[x - 1]);
  return est;
}

UcbDecision rank_ucb_step(const EstimatorState& state, std::span<const double> prices, const Matrix& features,
                          const UcbParams& params) {
  if (prices.size() != static_cast<std::size_t>(features.rows())) {
    throw InvalidInput("prices and feature rows differ in length");
  }
  UcbDecision decision;
  decision.rho = confidence_radius(state.round(), state.capacity(), state.dim(), params.gamma, params.norm_bound);
  decision.estimates = optimistic_estimates(state, features, decision.rho);

  std::vector<Product> products(prices.size());
  for (std::size_t j = 0; j < prices.size(); ++j) products[j] = Product{std::to_string(j), prices[j], decision.estimates.u[j]};
  const Catalog catalog = Catalog::relaxed(std::move(products));

  // G^U can reach zero once some h^L is 1; from_tail then shortens the
  // support, so filling uses the nominal capacity.
  auto tail = decision.estimates.g_upper;
  const auto dist = SpanDistribution::from_tail(std::move(tail));
  const auto choice = best_x(catalog, dist, false);
  const Ranking slate = greedy_fill(choice.ranking, catalog, dist, state.capacity());

  decision.slate.reserve(slate.size());
  for (std::size_t i : slate) decision.slate.push_back(catalog.source_index(i));
  return decision;
}

std::vector<double> failure_rates(const SpanDistribution& dist) {
  const std::size_t m = dist.capacity();
  std::vector<double> h(m, 1.0);
  for (std::size_t k = 1; k < m; ++k) h[k - 1] = dist.mass(k) / dist.tail(k);
  return h;
}

}  // namespace rankopt::bandit
