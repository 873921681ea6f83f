#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "rankopt/instance.hpp"

namespace rankopt {

struct PrefixCheck {
  bool holds = false;
  // Catalog indices (i_k, i_{k+1}) of the first pair with i_k > i_{k+1}.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  // True when lambda*r ties make the top-M order ambiguous.
  bool indeterminate = false;
  // i_1..i_M: catalog indices of the M largest lambda*r, largest first.
  std::vector<std::size_t> top;
};

// holds iff the top-M products by lambda * r appear in increasing index
// order. Prefix-nested optimal rankings imply it; the converse can fail
// (see the pinned counterexample in the tests).
PrefixCheck prefix_condition(const Catalog& catalog, std::size_t capacity);

struct GeometricResult {
  double value = 0.0;
  Ranking ranking;  // catalog indices, in display order
  bool score_ties = false;
};

// rλ / (1 - α(1 - λ)); products appear in descending order of this score in
// the optimal ranking under G_k = α^{k-1}.
double geometric_score(double price, double lambda, double alpha);

// Exact optimum of E[R(sigma, X)] for G_k = alpha^{k-1}, k = 1..M (truncated
// at M). M is clamped to the catalog size.
GeometricResult geometric_rank(const Catalog& catalog, double alpha, std::size_t capacity);

}  // namespace rankopt
