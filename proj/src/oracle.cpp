#include "rankopt/oracle.hpp"

#include <algorithm>
#include <utility>

#include <fmt/format.h>

namespace rankopt {

namespace {

// Depth-first enumeration in lexicographic order. The revenue of a prefix is
// carried incrementally: sum_p reach_p * gain[sigma(p)] * weight[p].
class Enumerator {
 public:
  Enumerator(std::vector<double> gain, std::vector<double> carry, std::vector<double> weight, std::size_t max_len)
      : gain_(std::move(gain)),
        carry_(std::move(carry)),
        weight_(std::move(weight)),
        max_len_(max_len),
        used_(gain_.size(), false) {}

  OracleResult run() {
    prefix_.clear();
    visit(0.0, 1.0);
    // The running best can creep upward by less than the tolerance, so
    // candidates are filtered against the final value.
    for (auto& [value, ranking] : candidates_) {
      if (value >= result_.value - kOracleOptimumTolerance) result_.optima.push_back(std::move(ranking));
    }
    std::sort(result_.optima.begin(), result_.optima.end());
    return std::move(result_);
  }

 private:
  void visit(double value, double reach) {
    const std::size_t depth = prefix_.size();
    if (depth > 0) {
      ++result_.enumerated;
      record(value);
    }
    if (depth == max_len_) return;
    for (std::size_t j = 0; j < gain_.size(); ++j) {
      if (used_[j]) continue;
      used_[j] = true;
      prefix_.push_back(j);
      visit(value + reach * gain_[j] * weight_[depth], reach * carry_[j]);
      prefix_.pop_back();
      used_[j] = false;
    }
  }

  void record(double value) {
    if (candidates_.empty() || value > result_.value + kOracleOptimumTolerance) {
      result_.value = value;
      candidates_.assign(1, {value, prefix_});
      return;
    }
    if (value >= result_.value - kOracleOptimumTolerance) {
      result_.value = std::max(result_.value, value);
      candidates_.emplace_back(value, prefix_);
    }
  }

  std::vector<double> gain_, carry_, weight_;
  std::size_t max_len_;
  std::vector<bool> used_;
  Ranking prefix_;
  std::vector<std::pair<double, Ranking>> candidates_;
  OracleResult result_;
};

void check_budget(std::size_t n, std::size_t max_len) {
  if (n > kOracleMaxProducts) {
    throw BudgetExceeded(
        fmt::format("oracle refuses {} products; the exhaustive budget is {}", n, kOracleMaxProducts));
  }
  if (max_len > n) throw InvalidInput(fmt::format("max_len {} exceeds the number of products {}", max_len, n));
}

}  // namespace

std::uint64_t ranking_count(std::size_t n, std::size_t max_len) {
  std::uint64_t total = 0;
  std::uint64_t perms = 1;
  for (std::size_t k = 1; k <= max_len && k <= n; ++k) {
    perms *= n - k + 1;
    total += perms;
  }
  return total;
}

OracleResult brute_force_optimal(const Catalog& catalog, std::size_t span, std::size_t max_len) {
  const std::size_t n = catalog.size();
  check_budget(n, max_len);
  if (span == 0) throw InvalidInput("span must be at least 1");
  std::vector<double> gain(n), carry(n), weight(max_len);
  for (std::size_t j = 0; j < n; ++j) {
    gain[j] = catalog.lambda(j) * catalog.price(j);
    carry[j] = 1.0 - catalog.lambda(j);
  }
  for (std::size_t p = 0; p < max_len; ++p) weight[p] = p < span ? 1.0 : 0.0;
  return Enumerator(gain, carry, weight, max_len).run();
}

OracleResult brute_force_optimal(const Catalog& catalog, const SpanDistribution& dist, std::size_t max_len) {
  const std::size_t n = catalog.size();
  check_budget(n, max_len);
  std::vector<double> gain(n), carry(n), weight(max_len);
  for (std::size_t j = 0; j < n; ++j) {
    gain[j] = catalog.lambda(j) * catalog.price(j);
    carry[j] = 1.0 - catalog.lambda(j);
  }
  for (std::size_t p = 0; p < max_len; ++p) weight[p] = dist.tail(p + 1);
  return Enumerator(gain, carry, weight, max_len).run();
}

OracleResult brute_force_general(const GeneralCatalog& catalog, std::size_t span, std::size_t max_len) {
  const std::size_t n = catalog.size();
  check_budget(n, max_len);
  if (span == 0) throw InvalidInput("span must be at least 1");
  std::vector<double> gain(n), carry(n), weight(max_len);
  for (std::size_t j = 0; j < n; ++j) {
    gain[j] = catalog.lambda(j) * catalog.price(j);
    carry[j] = catalog.cont(j);
  }
  for (std::size_t p = 0; p < max_len; ++p) weight[p] = p < span ? 1.0 : 0.0;
  return Enumerator(gain, carry, weight, max_len).run();
}

}  // namespace rankopt
