#include "rankopt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace rankopt {

namespace {

constexpr double kIfrTolerance = 1e-12;

bool canonical_before(const Product& a, const Product& b) {
  if (a.price != b.price) return a.price > b.price;
  return a.purchase_prob > b.purchase_prob;
}

}  // namespace

Catalog Catalog::build(std::vector<Product> products, bool strict) {
  for (const auto& p : products) {
    if (!(p.price > 0.0) || !std::isfinite(p.price)) {
      throw InvalidInput(fmt::format("product '{}': price must be positive, got {}", p.id, p.price));
    }
    const bool lambda_ok = strict ? (p.purchase_prob > 0.0 && p.purchase_prob <= 1.0)
                                  : (p.purchase_prob >= 0.0 && p.purchase_prob <= 1.0);
    if (!lambda_ok) {
      throw InvalidInput(fmt::format("product '{}': purchase probability {} outside {}", p.id,
                                     p.purchase_prob, strict ? "(0,1]" : "[0,1]"));
    }
  }

  std::vector<std::size_t> order(products.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canonical_before(products[a], products[b]);
  });

  Catalog catalog;
  catalog.products_.reserve(products.size());
  catalog.source_ = order;
  for (std::size_t i : order) catalog.products_.push_back(products[i]);

  if (strict) {
    for (std::size_t i = 1; i < catalog.products_.size(); ++i) {
      const auto& prev = catalog.products_[i - 1];
      const auto& cur = catalog.products_[i];
      if (prev.price == cur.price && prev.purchase_prob == cur.purchase_prob) {
        throw InvalidInput(fmt::format("products '{}' and '{}' have identical price and purchase probability",
                                       prev.id, cur.id));
      }
    }
  }
  return catalog;
}

Catalog Catalog::index(std::vector<Product> products) { return build(std::move(products), true); }

Catalog Catalog::relaxed(std::vector<Product> products) { return build(std::move(products), false); }

Catalog index_catalog(std::vector<Product> products) { return Catalog::index(std::move(products)); }

std::optional<std::size_t> Catalog::find(const std::string& id) const {
  for (std::size_t i = 0; i < products_.size(); ++i) {
    if (products_[i].id == id) return i;
  }
  return std::nullopt;
}

double Catalog::max_price() const {
  double best = 0.0;
  for (const auto& p : products_) best = std::max(best, p.price);
  return best;
}

SpanDistribution SpanDistribution::from_tail(std::vector<double> tail) {
  while (!tail.empty() && tail.back() == 0.0) tail.pop_back();
  if (tail.empty()) throw InvalidInput("span tail is empty");
  if (std::abs(tail.front() - 1.0) > kTieTolerance) {
    throw InvalidInput(fmt::format("span tail must start with G_1 = 1, got {}", tail.front()));
  }
  tail.front() = 1.0;
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!std::isfinite(tail[i]) || tail[i] < 0.0) {
      throw InvalidInput(fmt::format("span tail entry G_{} = {} is not a probability", i + 1, tail[i]));
    }
    if (i > 0 && tail[i] > tail[i - 1]) {
      throw InvalidInput(fmt::format("span tail increases at x = {} ({} > {})", i + 1, tail[i], tail[i - 1]));
    }
  }
  SpanDistribution dist;
  dist.tail_ = std::move(tail);
  dist.ifr_ = validate_ifr(std::span<const double>(dist.tail_));
  return dist;
}

SpanDistribution SpanDistribution::geometric(double alpha, std::size_t capacity) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidInput(fmt::format("geometric span parameter must lie in [0,1), got {}", alpha));
  }
  if (capacity == 0) throw InvalidInput("span capacity must be at least 1");
  std::vector<double> tail(capacity);
  double g = 1.0;
  for (std::size_t x = 0; x < capacity; ++x) {
    tail[x] = g;
    g *= alpha;
  }
  return from_tail(std::move(tail));
}

SpanDistribution SpanDistribution::linear_tail(std::size_t capacity) {
  if (capacity == 0) throw InvalidInput("span capacity must be at least 1");
  std::vector<double> tail(capacity);
  const auto m = static_cast<double>(capacity);
  for (std::size_t x = 0; x < capacity; ++x) tail[x] = (m - static_cast<double>(x)) / m;
  return from_tail(std::move(tail));
}

SpanDistribution SpanDistribution::point_mass(std::size_t span) {
  if (span == 0) throw InvalidInput("span must be at least 1");
  return from_tail(std::vector<double>(span, 1.0));
}

double SpanDistribution::tail(std::size_t x) const {
  if (x == 0) return 1.0;
  if (x > tail_.size()) return 0.0;
  return tail_[x - 1];
}

bool validate_ifr(std::span<const double> tail) {
  // G_{x+1} G_{x-1} <= G_x^2 for x = 2..M-1 (1-based).
  for (std::size_t x = 1; x + 1 < tail.size(); ++x) {
    if (tail[x + 1] * tail[x - 1] > tail[x] * tail[x] + kIfrTolerance) return false;
  }
  return true;
}

bool validate_ifr(const SpanDistribution& dist) { return validate_ifr(dist.tails()); }

SpanDistribution make_span_distribution(const SpanSpec& spec) {
  SpanDistribution base;
  switch (spec.kind) {
    case SpanKind::Geometric:
      base = SpanDistribution::geometric(spec.alpha, spec.capacity);
      break;
    case SpanKind::LinearTail:
      base = SpanDistribution::linear_tail(spec.capacity);
      break;
    case SpanKind::Explicit:
      base = SpanDistribution::from_tail(spec.tail);
      break;
  }
  if (spec.truncate == 0 || spec.truncate >= base.capacity()) return base;
  const auto tails = base.tails().first(spec.truncate);
  return SpanDistribution::from_tail(std::vector<double>(tails.begin(), tails.end()));
}

void validate_ranking(const Ranking& ranking, std::size_t catalog_size) {
  std::vector<bool> seen(catalog_size, false);
  for (std::size_t i : ranking) {
    if (i >= catalog_size) {
      throw InvalidInput(fmt::format("ranking refers to product index {} but catalog has {}", i, catalog_size));
    }
    if (seen[i]) throw InvalidInput(fmt::format("ranking lists product index {} twice", i));
    seen[i] = true;
  }
}

double revenue_fixed_span(const Ranking& ranking, std::size_t span, const Catalog& catalog) {
  validate_ranking(ranking, catalog.size());
  const std::size_t len = std::min(span, ranking.size());
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t j = ranking[k];
    total += reach * catalog.lambda(j) * catalog.price(j);
    reach *= 1.0 - catalog.lambda(j);
  }
  return total;
}

// Positions beyond the span capacity carry G = 0 and contribute nothing.
double revenue_random_span(const Ranking& ranking, const SpanDistribution& dist, const Catalog& catalog) {
  validate_ranking(ranking, catalog.size());
  const std::size_t len = std::min(dist.capacity(), ranking.size());
  double reach = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t j = ranking[k];
    total += reach * catalog.lambda(j) * catalog.price(j) * dist.tail(k + 1);
    reach *= 1.0 - catalog.lambda(j);
  }
  return total;
}

std::vector<std::string> ranking_ids(const Ranking& ranking, const Catalog& catalog) {
  std::vector<std::string> ids;
  ids.reserve(ranking.size());
  for (std::size_t j : ranking) ids.push_back(catalog[j].id);
  return ids;
}

}  // namespace rankopt
