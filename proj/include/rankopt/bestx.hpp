#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rankopt/fixed_span.hpp"
#include "rankopt/instance.hpp"

namespace rankopt {

struct BestXResult {
  std::size_t chosen_x = 0;
  Ranking ranking;               // sigma^{chosen_x}, greedily extended when `filled`
  double lower_bound = 0.0;      // R(sigma^x, x) * G_x
  double expected_revenue = 0.0; // E[R(ranking, X)]
  double clairvoyant = 0.0;
  double ratio = 0.0;            // expected_revenue / clairvoyant
  bool filled = false;
  double unfilled_revenue = 0.0; // E[R(sigma^{chosen_x}, X)]
};

// sum_x g_x R(sigma^x, x); spans beyond the catalog size reuse R(sigma^n, n).
double clairvoyant_bound(const Catalog& catalog, const SpanDistribution& dist);
double clairvoyant_bound(const FixedSpanSolution& solution, const SpanDistribution& dist);

// Picks x maximizing R(sigma^x, x) G_x (smallest x on ties). With `fill`,
// the remaining positions up to min(M, n) are filled by greedy_fill.
BestXResult best_x(const Catalog& catalog, const SpanDistribution& dist, bool fill = false);
BestXResult best_x(const Catalog& catalog, const SpanDistribution& dist,
                   const FixedSpanSolution& solution, bool fill);

// Repeatedly inserts the (product, position) pair with the largest expected
// revenue, keeping the relative order of products already placed, until the
// ranking holds min(capacity, n) products. Ties go to the smallest product
// index, then the earliest position.
Ranking greedy_fill(Ranking partial, const Catalog& catalog, const SpanDistribution& dist,
                    std::size_t capacity);

struct AuditInstance {
  std::string id;
  Catalog catalog;
  SpanDistribution dist;
};

struct AuditRow {
  std::string id;
  double ratio_bestx = 0.0;
  double ratio_filled = 0.0;
  double clairvoyant = 0.0;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  double min_bestx = 0.0;
  double mean_bestx = 0.0;
  double min_filled = 0.0;
  double mean_filled = 0.0;
  // Counts of unfilled ratios in [i/bins, (i+1)/bins); ratio 1 lands in the last bucket.
  std::vector<std::size_t> histogram;
  // Ids whose unfilled ratio fell below 1/e.
  std::vector<std::string> below_inverse_e;
};

// Rejects (InvalidInput) any instance whose span distribution is not IFR.
AuditReport ratio_audit(std::span<const AuditInstance> instances, std::size_t histogram_bins = 20,
                        unsigned threads = 1);

}  // namespace rankopt
