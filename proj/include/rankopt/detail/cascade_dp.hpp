#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankopt/instance.hpp"

namespace rankopt::detail {

// Backward dynamic program shared by the fixed-span, geometric and
// multi-purchase solvers. Items are pre-ordered so that an optimal ranking
// lists them in increasing index. With gain a_j and carry b_j:
//
//   H^k_j = max{ a_j + b_j H^{k-1}_{j+1}, H^k_{j+1} },  H^0_j = H^k_{n+1} = 0
//
// Inclusion wins ties in the table (within kTieTolerance). Rankings are
// rebuilt forwards instead of from those flags: once the reach hits zero
// every completion ties, and only a forward pass sees that.
class CascadeDp {
 public:
  CascadeDp(std::span<const double> gain, std::span<const double> carry, std::size_t max_span);

  std::size_t items() const { return n_; }
  std::size_t max_span() const { return max_span_; }

  // H^k_j with k in 0..max_span and j in 0..n (j = n is the sentinel).
  double value(std::size_t k, std::size_t j) const { return values_[k * (n_ + 1) + j]; }
  bool taken(std::size_t k, std::size_t j) const { return taken_[k * (n_ + 1) + j] != 0; }

  // Lexicographically smallest ranking of min(k, n) items attaining H^k_0.
  std::vector<std::size_t> ranking(std::size_t k) const;

 private:
  std::size_t n_;
  std::size_t max_span_;
  std::vector<double> gain_;
  std::vector<double> carry_;
  std::vector<double> values_;
  std::vector<unsigned char> taken_;
};

}  // namespace rankopt::detail
