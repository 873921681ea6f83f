#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankopt/error.hpp"

namespace rankopt {

// Absolute tolerance for floating-point comparisons between revenues.
inline constexpr double kTolerance = 1e-9;
// Tie tolerance used inside the dynamic programs.
inline constexpr double kTieTolerance = 1e-12;

struct Product {
  std::string id;
  double price = 0.0;          // r_j > 0
  double purchase_prob = 0.0;  // lambda_j in (0, 1]
};

// A ranking lists catalog indices (0-based, canonical order) by display
// position. Position 0 is the top slot.
using Ranking = std::vector<std::size_t>;

// Products in canonical order: descending price, then descending purchase
// probability. Immutable once built.
class Catalog {
 public:
  Catalog() = default;

  // Strict construction: price > 0, purchase_prob in (0, 1], and no two
  // products share both price and purchase probability.
  static Catalog index(std::vector<Product> products);

  // Lenient construction used for synthetic catalogs (optimistic estimates,
  // adversarial instances): purchase_prob may be 0 and duplicate
  // characteristics are allowed. Remaining ties keep input order.
  static Catalog relaxed(std::vector<Product> products);

  std::size_t size() const { return products_.size(); }
  bool empty() const { return products_.empty(); }
  const Product& operator[](std::size_t i) const { return products_[i]; }
  double price(std::size_t i) const { return products_[i].price; }
  double lambda(std::size_t i) const { return products_[i].purchase_prob; }
  std::span<const Product> products() const { return products_; }

  // Position of canonical product i in the vector passed at construction.
  std::size_t source_index(std::size_t i) const { return source_[i]; }
  std::optional<std::size_t> find(const std::string& id) const;
  double max_price() const;

 private:
  static Catalog build(std::vector<Product> products, bool strict);

  std::vector<Product> products_;
  std::vector<std::size_t> source_;
};

Catalog index_catalog(std::vector<Product> products);

// Attention-span distribution given by its tail probabilities
// G_x = Pr(X >= x) for x = 1..M, with G_1 = 1 and G_{M+1} = 0.
class SpanDistribution {
 public:
  SpanDistribution() = default;

  // Trailing zeros are trimmed (reducing M). Rejects G_1 != 1, increases,
  // negative entries and empty tails.
  static SpanDistribution from_tail(std::vector<double> tail);
  static SpanDistribution geometric(double alpha, std::size_t capacity);
  static SpanDistribution linear_tail(std::size_t capacity);
  static SpanDistribution point_mass(std::size_t span);

  std::size_t capacity() const { return tail_.size(); }
  // 1-based; returns 0 for x > M and 1 for x <= 0.
  double tail(std::size_t x) const;
  // Pr(X = x), 1-based.
  double mass(std::size_t x) const { return tail(x) - tail(x + 1); }
  std::span<const double> tails() const { return tail_; }
  bool ifr() const { return ifr_; }

 private:
  std::vector<double> tail_;
  bool ifr_ = true;
};

bool validate_ifr(const SpanDistribution& dist);
bool validate_ifr(std::span<const double> tail);

enum class SpanKind { Explicit, Geometric, LinearTail };

struct SpanSpec {
  SpanKind kind = SpanKind::LinearTail;
  std::size_t capacity = 1;
  double alpha = 0.0;
  std::vector<double> tail;
  // Keep only G_1..G_truncate when nonzero.
  std::size_t truncate = 0;
};

SpanDistribution make_span_distribution(const SpanSpec& spec);

// Throws InvalidInput on duplicates or out-of-range indices.
void validate_ranking(const Ranking& ranking, std::size_t catalog_size);

double revenue_fixed_span(const Ranking& ranking, std::size_t span, const Catalog& catalog);
double revenue_random_span(const Ranking& ranking, const SpanDistribution& dist,
                           const Catalog& catalog);

// Ids of the ranked products, in display order.
std::vector<std::string> ranking_ids(const Ranking& ranking, const Catalog& catalog);

}  // namespace rankopt
