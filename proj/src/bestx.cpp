#include "rankopt/bestx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "rankopt/parallel.hpp"

namespace rankopt {

double clairvoyant_bound(const FixedSpanSolution& solution, const SpanDistribution& dist) {
  if (solution.capacity() == 0) return 0.0;
  double total = 0.0;
  for (std::size_t x = 1; x <= dist.capacity(); ++x) {
    total += dist.mass(x) * solution.value(std::min(x, solution.capacity()));
  }
  return total;
}

double clairvoyant_bound(const Catalog& catalog, const SpanDistribution& dist) {
  return clairvoyant_bound(assort_opt(catalog, dist.capacity()), dist);
}

BestXResult best_x(const Catalog& catalog, const SpanDistribution& dist, const FixedSpanSolution& solution,
                   bool fill) {
  BestXResult result;
  result.clairvoyant = clairvoyant_bound(solution, dist);
  const std::size_t spans = std::min(dist.capacity(), solution.capacity());
  for (std::size_t x = 1; x <= spans; ++x) {
    const double bound = solution.value(x) * dist.tail(x);
    if (result.chosen_x == 0 || bound > result.lower_bound + kTieTolerance) {
      result.chosen_x = x;
      result.lower_bound = bound;
    }
  }
  if (result.chosen_x == 0) return result;

  result.ranking = solution.at(result.chosen_x).ranking;
  result.unfilled_revenue = revenue_random_span(result.ranking, dist, catalog);
  result.expected_revenue = result.unfilled_revenue;
  if (fill) {
    result.ranking = greedy_fill(std::move(result.ranking), catalog, dist, dist.capacity());
    result.expected_revenue = revenue_random_span(result.ranking, dist, catalog);
    result.filled = true;
  }
  result.ratio = result.clairvoyant > 0.0 ? result.expected_revenue / result.clairvoyant : 0.0;
  return result;
}

BestXResult best_x(const Catalog& catalog, const SpanDistribution& dist, bool fill) {
  return best_x(catalog, dist, assort_opt(catalog, dist.capacity()), fill);
}

Ranking greedy_fill(Ranking ranking, const Catalog& catalog, const SpanDistribution& dist,
                    std::size_t capacity) {
  validate_ranking(ranking, catalog.size());
  const std::size_t n = catalog.size();
  const std::size_t target = std::min(capacity, n);

  std::vector<bool> used(n, false);
  for (std::size_t j : ranking) used[j] = true;

  std::vector<double> term, reach, head, tail_shifted;
  while (ranking.size() < target) {
    const std::size_t len = ranking.size();
    // term[k]: reach * lambda * r at position k (0-based) before weighting by G.
    term.assign(len, 0.0);
    reach.assign(len + 1, 1.0);
    for (std::size_t k = 0; k < len; ++k) {
      const std::size_t j = ranking[k];
      term[k] = reach[k] * catalog.lambda(j) * catalog.price(j);
      reach[k + 1] = reach[k] * (1.0 - catalog.lambda(j));
    }
    // head[p]: revenue of positions before slot p; tail_shifted[p]: revenue of
    // positions from p onward once they move down by one slot.
    head.assign(len + 1, 0.0);
    tail_shifted.assign(len + 1, 0.0);
    for (std::size_t k = 0; k < len; ++k) head[k + 1] = head[k] + term[k] * dist.tail(k + 1);
    for (std::size_t k = len; k-- > 0;) tail_shifted[k] = tail_shifted[k + 1] + term[k] * dist.tail(k + 2);

    std::size_t best_item = n;
    std::size_t best_slot = 0;
    double best_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double lam = catalog.lambda(j);
      const double gain = lam * catalog.price(j);
      for (std::size_t p = 0; p <= len; ++p) {
        const double value = head[p] + reach[p] * gain * dist.tail(p + 1) + (1.0 - lam) * tail_shifted[p];
        if (best_item == n || value > best_value + kTieTolerance) {
          best_item = j;
          best_slot = p;
          best_value = value;
        }
      }
    }
    ranking.insert(ranking.begin() + static_cast<std::ptrdiff_t>(best_slot), best_item);
    used[best_item] = true;
  }
  return ranking;
}

AuditReport ratio_audit(std::span<const AuditInstance> instances, std::size_t histogram_bins, unsigned threads) {
  for (const auto& inst : instances) {
    if (!inst.dist.ifr()) {
      throw InvalidInput(fmt::format("instance '{}': span distribution is not IFR", inst.id));
    }
  }
  AuditReport report;
  report.rows.resize(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) {
    const auto& inst = instances[i];
    const auto solution = assort_opt(inst.catalog, inst.dist.capacity());
    const auto plain = best_x(inst.catalog, inst.dist, solution, false);
    const auto filled = best_x(inst.catalog, inst.dist, solution, true);
    report.rows[i] = AuditRow{inst.id, plain.ratio, filled.ratio, plain.clairvoyant};
  });

  const std::size_t bins = std::max<std::size_t>(histogram_bins, 1);
  report.histogram.assign(bins, 0);
  if (report.rows.empty()) return report;
  report.min_bestx = report.min_filled = std::numeric_limits<double>::infinity();
  for (const auto& row : report.rows) {
    report.min_bestx = std::min(report.min_bestx, row.ratio_bestx);
    report.min_filled = std::min(report.min_filled, row.ratio_filled);
    report.mean_bestx += row.ratio_bestx;
    report.mean_filled += row.ratio_filled;
    const auto bucket = static_cast<std::size_t>(std::clamp(row.ratio_bestx, 0.0, 1.0) * static_cast<double>(bins));
    ++report.histogram[std::min(bucket, bins - 1)];
    if (row.ratio_bestx < 1.0 / std::numbers::e) report.below_inverse_e.push_back(row.id);
  }
  report.mean_bestx /= static_cast<double>(report.rows.size());
  report.mean_filled /= static_cast<double>(report.rows.size());
  return report;
}

}  // namespace rankopt
