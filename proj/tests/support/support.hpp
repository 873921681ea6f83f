#pragma once

// Test-side reference implementations. Nothing here calls the solvers under
// test; revenues are evaluated from the closed forms directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "rankopt/instance.hpp"
#include "rankopt/multi_purchase.hpp"

namespace support {

using rankopt::Ranking;

inline double cascade_value(const Ranking& sigma, const std::vector<double>& gain, const std::vector<double>& carry,
                            const std::function<double(std::size_t)>& weight) {
  double reach = 1.0, total = 0.0;
  for (std::size_t k = 0; k < sigma.size(); ++k) {
    total += reach * gain[sigma[k]] * weight(k + 1);
    reach *= carry[sigma[k]];
  }
  return total;
}

inline double fixed_value(const Ranking& sigma, std::size_t x, const rankopt::Catalog& c) {
  std::vector<double> gain(c.size()), carry(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    gain[j] = c.price(j) * c.lambda(j);
    carry[j] = 1.0 - c.lambda(j);
  }
  return cascade_value(sigma, gain, carry, [x](std::size_t k) { return k <= x ? 1.0 : 0.0; });
}

inline double random_value(const Ranking& sigma, const std::vector<double>& tail, const rankopt::Catalog& c) {
  std::vector<double> gain(c.size()), carry(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    gain[j] = c.price(j) * c.lambda(j);
    carry[j] = 1.0 - c.lambda(j);
  }
  return cascade_value(sigma, gain, carry, [&](std::size_t k) { return k <= tail.size() ? tail[k - 1] : 0.0; });
}

inline double general_value(const Ranking& sigma, std::size_t x, const rankopt::GeneralCatalog& c) {
  std::vector<double> gain(c.size()), carry(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    gain[j] = c.price(j) * c.lambda(j);
    carry[j] = c.cont(j);
  }
  return cascade_value(sigma, gain, carry, [x](std::size_t k) { return k <= x ? 1.0 : 0.0; });
}

struct Brute {
  double value = -1.0;
  std::vector<Ranking> optima;
};

// Every ordered subset of {0..n-1} with 1..max_len elements, built from
// bitmasks and std::next_permutation.
inline Brute brute_force(std::size_t n, std::size_t max_len, const std::function<double(const Ranking&)>& f,
                         double tol = 1e-10) {
  std::vector<std::pair<double, Ranking>> all;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Ranking items;
    for (std::size_t j = 0; j < n; ++j) {
      if (mask & (1u << j)) items.push_back(j);
    }
    if (items.size() > max_len) continue;
    do {
      all.emplace_back(f(items), items);
    } while (std::next_permutation(items.begin(), items.end()));
  }
  Brute out;
  for (const auto& [v, r] : all) out.value = std::max(out.value, v);
  for (const auto& [v, r] : all) {
    if (v >= out.value - tol) out.optima.push_back(r);
  }
  std::sort(out.optima.begin(), out.optima.end());
  return out;
}

// Smallest optimum of exactly `len` products. A lambda = 1 product makes
// everything after it worthless, so optima of several lengths can tie and a
// bare prefix would otherwise win the comparison.
inline Ranking lex_min_of_length(const std::vector<Ranking>& optima, std::size_t len) {
  for (const auto& r : optima) {
    if (r.size() == len) return r;
  }
  return {};
}

// Continuous prices and purchase probabilities; ties have probability zero.
inline rankopt::Catalog continuous_catalog(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> price(0.5, 10.0), lam(0.02, 1.0);
  std::vector<rankopt::Product> products;
  for (std::size_t j = 0; j < n; ++j) products.push_back({"p" + std::to_string(j), price(rng), lam(rng)});
  return rankopt::Catalog::index(std::move(products));
}

// Prices and probabilities on a coarse grid so that lambda * r ties and
// equal prices occur often.
inline rankopt::Catalog grid_catalog(std::size_t n, std::mt19937_64& rng) {
  static const double prices[] = {1.0, 2.0, 2.5, 4.0, 5.0, 10.0};
  static const double lambdas[] = {0.1, 0.2, 0.25, 0.4, 0.5, 0.8, 1.0};
  std::uniform_int_distribution<std::size_t> pi(0, 5), li(0, 6);
  std::vector<rankopt::Product> products;
  std::vector<std::pair<std::size_t, std::size_t>> used;
  while (products.size() < n) {
    const auto key = std::make_pair(pi(rng), li(rng));
    if (std::find(used.begin(), used.end(), key) != used.end()) continue;
    used.push_back(key);
    products.push_back({"g" + std::to_string(products.size()), prices[key.first], lambdas[key.second]});
  }
  return rankopt::Catalog::index(std::move(products));
}

inline rankopt::GeneralCatalog random_general(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> price(0.5, 10.0), lam(0.02, 1.0), cont(0.0, 0.98);
  std::vector<rankopt::GeneralProduct> products;
  for (std::size_t j = 0; j < n; ++j) products.push_back({"q" + std::to_string(j), price(rng), lam(rng), cont(rng)});
  return rankopt::GeneralCatalog::order(std::move(products));
}

// Tail built from nondecreasing failure rates, so the result is IFR.
inline std::vector<double> random_ifr_tail(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 0.6);
  std::vector<double> h(m);
  for (auto& v : h) v = u(rng);
  std::sort(h.begin(), h.end());
  std::vector<double> tail(m, 1.0);
  for (std::size_t x = 1; x < m; ++x) tail[x] = tail[x - 1] * (1.0 - h[x - 1]);
  return tail;
}

inline std::vector<double> random_tail(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> tail(m, 1.0);
  for (std::size_t x = 1; x < m; ++x) tail[x] = tail[x - 1] * u(rng);
  return tail;
}

}  // namespace support

namespace doctest {
template <>
struct StringMaker<std::vector<std::size_t>> {
  static String convert(const std::vector<std::size_t>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return (s + ")").c_str();
  }
};
}  // namespace doctest
