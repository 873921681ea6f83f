#include "rankopt/multi_purchase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "rankopt/detail/cascade_dp.hpp"

namespace rankopt {

namespace {

double raw_score(const GeneralProduct& p) { return p.price * p.purchase_prob / (1.0 - p.cont_prob); }

detail::CascadeDp make_general_dp(const GeneralCatalog& catalog, std::size_t max_span) {
  std::vector<double> gain(catalog.size()), carry(catalog.size());
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    gain[j] = catalog.price(j) * catalog.lambda(j);
    carry[j] = catalog.cont(j);
  }
  return detail::CascadeDp(gain, carry, max_span);
}

}  // namespace

double GeneralCatalog::score(std::size_t i) const { return raw_score(products_[i]); }

GeneralCatalog GeneralCatalog::order(std::vector<GeneralProduct> products) {
  for (const auto& p : products) {
    if (!(p.price > 0.0) || !std::isfinite(p.price)) {
      throw InvalidInput(fmt::format("product '{}': price must be positive, got {}", p.id, p.price));
    }
    if (!(p.purchase_prob > 0.0 && p.purchase_prob <= 1.0)) {
      throw InvalidInput(fmt::format("product '{}': purchase probability {} outside (0,1]", p.id, p.purchase_prob));
    }
    if (!(p.cont_prob >= 0.0 && p.cont_prob < 1.0)) {
      throw InvalidInput(fmt::format("product '{}': continuation probability {} outside [0,1)", p.id, p.cont_prob));
    }
  }
  std::vector<std::size_t> order(products.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw_score(products[a]) > raw_score(products[b]); });

  GeneralCatalog catalog;
  catalog.source_ = order;
  catalog.products_.reserve(products.size());
  for (std::size_t i : order) catalog.products_.push_back(products[i]);
  for (std::size_t i = 1; i < catalog.size(); ++i) {
    const double a = catalog.score(i - 1);
    const double b = catalog.score(i);
    if (std::abs(a - b) <= kTieTolerance * std::max({1.0, a, b})) {
      throw InvalidInput(fmt::format("products '{}' and '{}' have tied ordering score {}", catalog[i - 1].id,
                                     catalog[i].id, a));
    }
  }
  return catalog;
}

GeneralCatalog order_general(std::vector<GeneralProduct> products) {
  return GeneralCatalog::order(std::move(products));
}

std::vector<GeneralProduct> as_general(const Catalog& catalog) {
  std::vector<GeneralProduct> out;
  out.reserve(catalog.size());
  for (const auto& p : catalog.products()) out.push_back({p.id, p.price, p.purchase_prob, 1.0 - p.purchase_prob});
  return out;
}

double revenue_general(const Ranking& ranking, std::size_t span, const GeneralCatalog& catalog) {
  validate_ranking(ranking, catalog.size());
  const std::size_t len = std::min(span, ranking.size());
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t j = ranking[k];
    total += reach * catalog.lambda(j) * catalog.price(j);
    reach *= catalog.cont(j);
  }
  return total;
}

double revenue_general_random(const Ranking& ranking, const SpanDistribution& dist, const GeneralCatalog& catalog) {
  validate_ranking(ranking, catalog.size());
  const std::size_t len = std::min(dist.capacity(), ranking.size());
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t j = ranking[k];
    total += reach * catalog.lambda(j) * catalog.price(j) * dist.tail(k + 1);
    reach *= catalog.cont(j);
  }
  return total;
}

SpanSolution solve_general_fixed_span(const GeneralCatalog& catalog, std::size_t span) {
  if (span == 0) throw InvalidInput("span must be at least 1");
  if (span > catalog.size()) {
    throw InvalidInput(fmt::format("span {} exceeds the number of products {}", span, catalog.size()));
  }
  const auto dp = make_general_dp(catalog, span);
  return SpanSolution{dp.value(span, 0), dp.ranking(span)};
}

FixedSpanSolution general_all_spans(const GeneralCatalog& catalog, std::size_t capacity) {
  const std::size_t m = std::min(capacity, catalog.size());
  const auto dp = make_general_dp(catalog, m);
  FixedSpanSolution out;
  out.clamped = capacity > catalog.size();
  out.per_span.reserve(m);
  for (std::size_t x = 1; x <= m; ++x) out.per_span.push_back(SpanSolution{dp.value(x, 0), dp.ranking(x)});
  return out;
}

BestXResult best_x_general(const GeneralCatalog& catalog, const SpanDistribution& dist) {
  const auto solution = general_all_spans(catalog, dist.capacity());
  BestXResult result;
  result.clairvoyant = clairvoyant_bound(solution, dist);
  for (std::size_t x = 1; x <= solution.capacity(); ++x) {
    const double bound = solution.value(x) * dist.tail(x);
    if (result.chosen_x == 0 || bound > result.lower_bound + kTieTolerance) {
      result.chosen_x = x;
      result.lower_bound = bound;
    }
  }
  if (result.chosen_x == 0) return result;
  result.ranking = solution.at(result.chosen_x).ranking;
  result.expected_revenue = result.unfilled_revenue = revenue_general_random(result.ranking, dist, catalog);
  result.ratio = result.clairvoyant > 0.0 ? result.expected_revenue / result.clairvoyant : 0.0;
  return result;
}

}  // namespace rankopt
