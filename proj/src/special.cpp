#include "rankopt/special.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rankopt/detail/cascade_dp.hpp"

namespace rankopt {

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kTieTolerance * std::max({1.0, std::abs(a), std::abs(b)});
}

// Catalog indices sorted by descending score; equal scores keep catalog order.
std::vector<std::size_t> order_by_score(const std::vector<double>& score) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return order;
}

}  // namespace

PrefixCheck prefix_condition(const Catalog& catalog, std::size_t capacity) {
  const std::size_t m = std::min(capacity, catalog.size());
  std::vector<double> score(catalog.size());
  for (std::size_t j = 0; j < catalog.size(); ++j) score[j] = catalog.lambda(j) * catalog.price(j);
  const auto order = order_by_score(score);

  PrefixCheck check;
  check.top.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  // Ties inside the top M, or straddling its boundary, leave i_k undefined.
  const std::size_t last = std::min(m + 1, order.size());
  for (std::size_t k = 1; k < last; ++k) {
    if (nearly_equal(score[order[k - 1]], score[order[k]])) check.indeterminate = true;
  }
  check.holds = true;
  for (std::size_t k = 1; k < m; ++k) {
    if (check.top[k - 1] > check.top[k]) {
      check.holds = false;
      check.witness = std::make_pair(check.top[k - 1], check.top[k]);
      break;
    }
  }
  return check;
}

double geometric_score(double price, double lambda, double alpha) {
  return price * lambda / (1.0 - alpha * (1.0 - lambda));
}

GeometricResult geometric_rank(const Catalog& catalog, double alpha, std::size_t capacity) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidInput(fmt::format("geometric span parameter must lie in [0,1), got {}", alpha));
  }
  if (capacity == 0) throw InvalidInput("capacity must be at least 1");
  const std::size_t n = catalog.size();
  const std::size_t m = std::min(capacity, n);

  std::vector<double> score(n);
  for (std::size_t j = 0; j < n; ++j) score[j] = geometric_score(catalog.price(j), catalog.lambda(j), alpha);
  const auto order = order_by_score(score);

  GeometricResult result;
  std::vector<double> gain(n), carry(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    gain[k] = catalog.price(j) * catalog.lambda(j);
    carry[k] = alpha * (1.0 - catalog.lambda(j));
    if (k > 0 && nearly_equal(score[order[k - 1]], score[j])) result.score_ties = true;
  }

  const detail::CascadeDp dp(gain, carry, m);
  result.value = dp.value(m, 0);
  for (std::size_t k : dp.ranking(m)) result.ranking.push_back(order[k]);
  return result;
}

}  // namespace rankopt
