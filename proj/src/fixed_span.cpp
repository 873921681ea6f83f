#include "rankopt/fixed_span.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace rankopt {

namespace {

struct GainCarry {
  std::vector<double> gain;
  std::vector<double> carry;
};

GainCarry base_coefficients(const Catalog& catalog) {
  GainCarry gc;
  gc.gain.resize(catalog.size());
  gc.carry.resize(catalog.size());
  for (std::size_t j = 0; j < catalog.size(); ++j) {
    gc.gain[j] = catalog.lambda(j) * catalog.price(j);
    gc.carry[j] = 1.0 - catalog.lambda(j);
  }
  return gc;
}

detail::CascadeDp make_dp(const Catalog& catalog, std::size_t max_span) {
  const auto gc = base_coefficients(catalog);
  return detail::CascadeDp(gc.gain, gc.carry, max_span);
}

}  // namespace

DpTable::DpTable(const Catalog& catalog, std::size_t max_span) : dp_(make_dp(catalog, max_span)) {}

SpanSolution DpTable::solution(std::size_t span) const {
  return SpanSolution{dp_.value(span, 0), dp_.ranking(span)};
}

SpanSolution solve_fixed_span(const Catalog& catalog, std::size_t span) {
  if (span == 0) throw InvalidInput("span must be at least 1");
  if (span > catalog.size()) {
    throw InvalidInput(fmt::format("span {} exceeds the number of products {}", span, catalog.size()));
  }
  return DpTable(catalog, span).solution(span);
}

FixedSpanSolution assort_opt(const Catalog& catalog, std::size_t capacity) {
  const std::size_t n = catalog.size();
  const std::size_t m = std::min(capacity, n);
  FixedSpanSolution out;
  out.per_span.reserve(m);
  out.clamped = capacity > n;

  Ranking current;  // ascending catalog indices
  std::vector<bool> used(n, false);
  std::vector<double> prefix, reach, suffix;
  for (std::size_t x = 1; x <= m; ++x) {
    const std::size_t len = current.size();
    // Slot p inserts before current[p]. prefix/reach describe current[0..p),
    // suffix[p] is the revenue of current[p..) viewed from its own top.
    prefix.assign(len + 1, 0.0);
    reach.assign(len + 1, 1.0);
    suffix.assign(len + 1, 0.0);
    for (std::size_t p = 0; p < len; ++p) {
      const std::size_t j = current[p];
      prefix[p + 1] = prefix[p] + reach[p] * catalog.lambda(j) * catalog.price(j);
      reach[p + 1] = reach[p] * (1.0 - catalog.lambda(j));
    }
    for (std::size_t p = len; p-- > 0;) {
      const std::size_t j = current[p];
      suffix[p] = catalog.lambda(j) * catalog.price(j) + (1.0 - catalog.lambda(j)) * suffix[p + 1];
    }

    std::size_t best_item = n;
    std::size_t best_slot = 0;
    double best_value = 0.0;
    std::size_t slot = 0;
    for (std::size_t j = 0; j < n; ++j) {
      while (slot < len && current[slot] < j) ++slot;
      if (used[j]) continue;
      const double lam = catalog.lambda(j);
      const double value =
          prefix[slot] + reach[slot] * (lam * catalog.price(j) + (1.0 - lam) * suffix[slot]);
      // Smallest index wins ties.
      if (best_item == n || value > best_value + kTieTolerance) {
        best_item = j;
        best_slot = slot;
        best_value = value;
      }
    }

    current.insert(current.begin() + static_cast<std::ptrdiff_t>(best_slot), best_item);
    used[best_item] = true;
    out.per_span.push_back(SpanSolution{revenue_fixed_span(current, x, catalog), current});
  }
  return out;
}

bool is_nested(const Ranking& inner, const Ranking& outer) {
  std::size_t pos = 0;
  for (std::size_t item : inner) {
    while (pos < outer.size() && outer[pos] != item) ++pos;
    if (pos == outer.size()) return false;
    ++pos;
  }
  return true;
}

}  // namespace rankopt
