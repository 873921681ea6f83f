#include "rankopt/detail/cascade_dp.hpp"

#include <algorithm>

namespace rankopt::detail {

CascadeDp::CascadeDp(std::span<const double> gain, std::span<const double> carry, std::size_t max_span)
    : n_(gain.size()),
      max_span_(max_span),
      gain_(gain.begin(), gain.end()),
      carry_(carry.begin(), carry.end()),
      values_((max_span + 1) * (gain.size() + 1), 0.0),
      taken_((max_span + 1) * (gain.size() + 1), 0) {
  const std::size_t stride = n_ + 1;
  for (std::size_t k = 1; k <= max_span_; ++k) {
    double* row = &values_[k * stride];
    const double* prev = &values_[(k - 1) * stride];
    for (std::size_t j = n_; j-- > 0;) {
      const double take = gain[j] + carry[j] * prev[j + 1];
      const double skip = row[j + 1];
      if (take >= skip - kTieTolerance) {
        row[j] = std::max(take, skip);
        taken_[k * stride + j] = 1;
      } else {
        row[j] = skip;
      }
    }
  }
}

std::vector<std::size_t> CascadeDp::ranking(std::size_t k) const {
  k = std::min(k, n_);
  const double target = value(k, 0);
  const double tol = kTieTolerance * std::max(1.0, target);
  std::vector<std::size_t> out;
  double collected = 0.0, reach = 1.0;
  std::size_t j = 0;
  while (k > 0) {
    // Leave room for the k - 1 items still to place.
    for (; j + k < n_; ++j) {
      const double best = collected + reach * (gain_[j] + carry_[j] * value(k - 1, j + 1));
      if (best >= target - tol) break;
    }
    out.push_back(j);
    collected += reach * gain_[j];
    reach *= carry_[j];
    --k;
    ++j;
  }
  return out;
}

}  // namespace rankopt::detail
