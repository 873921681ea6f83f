#pragma once

#include <cstddef>
#include <vector>

#include "rankopt/detail/cascade_dp.hpp"
#include "rankopt/instance.hpp"

namespace rankopt {

struct SpanSolution {
  double value = 0.0;
  Ranking ranking;
};

// Optimal rankings for every fixed span x = 1..M.
struct FixedSpanSolution {
  std::vector<SpanSolution> per_span;  // per_span[x - 1]
  // Set when the requested capacity exceeded the catalog size.
  bool clamped = false;

  std::size_t capacity() const { return per_span.size(); }
  const SpanSolution& at(std::size_t span) const { return per_span.at(span - 1); }
  double value(std::size_t span) const { return at(span).value; }
};

// DP table over (span k, product j) for the base cascade model.
class DpTable {
 public:
  DpTable(const Catalog& catalog, std::size_t max_span);

  double value(std::size_t k, std::size_t j) const { return dp_.value(k, j); }
  bool taken(std::size_t k, std::size_t j) const { return dp_.taken(k, j); }
  std::size_t max_span() const { return dp_.max_span(); }
  std::size_t products() const { return dp_.items(); }
  SpanSolution solution(std::size_t span) const;

 private:
  detail::CascadeDp dp_;
};

// Optimal value and L-optimal ranking for a customer who views exactly
// `span` products. Requires 1 <= span <= n.
SpanSolution solve_fixed_span(const Catalog& catalog, std::size_t span);

// Builds sigma^1 ⊂ sigma^2 ⊂ ... ⊂ sigma^M by inserting one product per step.
// Capacities above the catalog size are clamped to n.
FixedSpanSolution assort_opt(const Catalog& catalog, std::size_t capacity);

// sigma ⊂ sigma': same products in the same relative order.
bool is_nested(const Ranking& inner, const Ranking& outer);

}  // namespace rankopt
