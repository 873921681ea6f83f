#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rankopt/bestx.hpp"
#include "rankopt/fixed_span.hpp"
#include "rankopt/instance.hpp"

namespace rankopt {

// Product in the multi-purchase model: after viewing it the customer buys
// with probability lambda and, independently of the span, keeps viewing with
// probability c.
struct GeneralProduct {
  std::string id;
  double price = 0.0;
  double purchase_prob = 0.0;
  double cont_prob = 0.0;  // c in [0, 1)
};

// Products ordered by strictly descending r * lambda / (1 - c).
class GeneralCatalog {
 public:
  GeneralCatalog() = default;
  static GeneralCatalog order(std::vector<GeneralProduct> products);

  std::size_t size() const { return products_.size(); }
  const GeneralProduct& operator[](std::size_t i) const { return products_[i]; }
  double price(std::size_t i) const { return products_[i].price; }
  double lambda(std::size_t i) const { return products_[i].purchase_prob; }
  double cont(std::size_t i) const { return products_[i].cont_prob; }
  double score(std::size_t i) const;
  std::size_t source_index(std::size_t i) const { return source_[i]; }
  std::span<const GeneralProduct> products() const { return products_; }

 private:
  std::vector<GeneralProduct> products_;
  std::vector<std::size_t> source_;
};

// Rejects invalid fields and tied scores.
GeneralCatalog order_general(std::vector<GeneralProduct> products);

// Base-model products with c = 1 - lambda.
std::vector<GeneralProduct> as_general(const Catalog& catalog);

double revenue_general(const Ranking& ranking, std::size_t span, const GeneralCatalog& catalog);
double revenue_general_random(const Ranking& ranking, const SpanDistribution& dist,
                              const GeneralCatalog& catalog);

// Optimal value and ranking for a fixed span x <= n; products appear in
// ascending catalog index.
SpanSolution solve_general_fixed_span(const GeneralCatalog& catalog, std::size_t span);

// Solutions for every span 1..min(M, n) from a single DP table.
FixedSpanSolution general_all_spans(const GeneralCatalog& catalog, std::size_t capacity);

// The Best-x selection rule applied to the multi-purchase model. No
// approximation guarantee is claimed here.
BestXResult best_x_general(const GeneralCatalog& catalog, const SpanDistribution& dist);

}  // namespace rankopt
