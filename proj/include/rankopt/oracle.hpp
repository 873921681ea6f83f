#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rankopt/instance.hpp"
#include "rankopt/multi_purchase.hpp"

namespace rankopt {

// Largest catalog the exhaustive search accepts.
inline constexpr std::size_t kOracleMaxProducts = 10;
// Rankings within this distance of the best value count as optimal.
inline constexpr double kOracleOptimumTolerance = 1e-10;

struct OracleResult {
  double value = 0.0;
  // Every optimal ranking, in lexicographic order of catalog indices.
  std::vector<Ranking> optima;
  // Number of non-empty rankings evaluated: sum_{k<=max_len} n!/(n-k)!.
  std::uint64_t enumerated = 0;
};

// Exhaustive search over every permutation of every subset of size
// 1..max_len. Throws BudgetExceeded for n > kOracleMaxProducts.
OracleResult brute_force_optimal(const Catalog& catalog, std::size_t span, std::size_t max_len);
OracleResult brute_force_optimal(const Catalog& catalog, const SpanDistribution& dist, std::size_t max_len);
OracleResult brute_force_general(const GeneralCatalog& catalog, std::size_t span, std::size_t max_len);

// sum_{k=1}^{max_len} n!/(n-k)!
std::uint64_t ranking_count(std::size_t n, std::size_t max_len);

}  // namespace rankopt
