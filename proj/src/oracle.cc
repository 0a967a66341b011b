// Copyright 2026 The kpgrad Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kpgrad/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kpgrad {

namespace {

// True if selection mask `a` precedes `b` lexicographically, where bit i is
// item i and item 0 is compared first.
bool lex_less(std::uint32_t a, std::uint32_t b) {
  const std::uint32_t diff = a ^ b;
  if (diff == 0) return false;
  return (a & (diff & (0 - diff))) == 0;
}

}  // namespace

std::string_view oracle_name(OracleMethod method) {
  switch (method) {
    case OracleMethod::kBruteForce:
      return "brute-force";
    case OracleMethod::kDynamicProgramming:
      return "dp";
    case OracleMethod::kGreedy:
      return "greedy";
    case OracleMethod::kBound:
      return "dantzig-bound";
  }
  return "unknown";
}

OracleResult brute_force(const KnapsackInstance& instance,
                         std::size_t max_items) {
  const std::size_t n = instance.size();
  if (max_items > 30) {
    throw std::invalid_argument("brute force is limited to 30 items");
  }
  if (n > max_items) {
    throw std::invalid_argument("brute force refused: " + std::to_string(n) +
                                " items exceeds " + std::to_string(max_items));
  }
  // Gray-code walk: each step toggles exactly one item.
  std::uint32_t mask = 0;
  double value = 0.0;
  double cost = 0.0;
  std::uint32_t best_mask = 0;
  double best_value = 0.0;
  double best_cost = 0.0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t g = 1; g < total; ++g) {
    const int item = std::countr_zero(g);
    const std::uint32_t bit = std::uint32_t{1} << item;
    mask ^= bit;
    if (mask & bit) {
      value += instance.value(item);
      cost += instance.cost(item);
    } else {
      value -= instance.value(item);
      cost -= instance.cost(item);
    }
    if (cost > instance.budget()) continue;
    if (value > best_value ||
        (value == best_value &&
         (cost < best_cost || (cost == best_cost && lex_less(mask, best_mask))))) {
      best_mask = mask;
      best_value = value;
      best_cost = cost;
    }
  }
  OracleResult result;
  result.method = OracleMethod::kBruteForce;
  std::vector<std::uint8_t> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (best_mask >> i) & 1u;
  // Recompute from scratch so incremental rounding does not leak out.
  result.objective = instance.objective_of(x);
  result.cost = instance.cost_of(x);
  result.x = std::move(x);
  return result;
}

OracleResult dp_exact(const KnapsackInstance& instance,
                      const DpOptions& options) {
  if (!instance.has_integral_costs()) {
    throw std::invalid_argument("dynamic programming needs integral costs");
  }
  const std::size_t n = instance.size();
  const double floor_budget = std::floor(instance.budget());
  const double cells = static_cast<double>(n) * (floor_budget + 1.0);
  if (cells > static_cast<double>(options.max_cells)) {
    throw std::length_error("dynamic programming table of " +
                            std::to_string(static_cast<std::uint64_t>(cells)) +
                            " cells exceeds the cap");
  }
  const auto capacity = static_cast<std::size_t>(floor_budget);
  const std::size_t width = capacity + 1;

  // best[w] = max value of items i..n-1 with cost <= w, built from the last
  // item backwards. take[i][w] records that item i strictly improves on
  // skipping it, so a forward walk that skips whenever possible yields the
  // lexicographically smallest optimal selection.
  std::vector<double> best(width, 0.0);
  std::vector<bool> take(n * width, false);
  for (std::size_t i = n; i-- > 0;) {
    const double c = instance.cost(i);
    if (c > floor_budget) continue;
    const auto ci = static_cast<std::size_t>(c);
    const double v = instance.value(i);
    for (std::size_t w = capacity; w >= ci; --w) {
      const double with = best[w - ci] + v;
      if (with > best[w]) {
        best[w] = with;
        take[i * width + w] = true;
      }
      if (w == 0) break;
    }
  }

  // Smallest capacity that still reaches the optimum is the minimum cost.
  const double optimum = best[capacity];
  std::size_t w = 0;
  while (best[w] < optimum) ++w;

  std::vector<std::uint8_t> x(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (take[i * width + w]) {
      x[i] = 1;
      w -= static_cast<std::size_t>(instance.cost(i));
    }
  }
  OracleResult result;
  result.method = OracleMethod::kDynamicProgramming;
  result.objective = instance.objective_of(x);
  result.cost = instance.cost_of(x);
  result.x = std::move(x);
  return result;
}

std::vector<std::size_t> ratio_order(const KnapsackInstance& instance) {
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> ratio(instance.size());
  for (std::size_t i = 0; i < ratio.size(); ++i) {
    ratio[i] = instance.value(i) / instance.cost(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return ratio[a] > ratio[b];
                   });
  return order;
}

OracleResult greedy(const KnapsackInstance& instance, GreedyRule rule) {
  std::vector<std::uint8_t> x(instance.size(), 0);
  double remaining = instance.budget();
  for (std::size_t i : ratio_order(instance)) {
    if (instance.cost(i) <= remaining) {
      x[i] = 1;
      remaining -= instance.cost(i);
    } else if (rule == GreedyRule::kStopAtFirstMisfit) {
      break;
    }
  }
  OracleResult result;
  result.method = OracleMethod::kGreedy;
  result.objective = instance.objective_of(x);
  result.cost = instance.cost_of(x);
  result.x = std::move(x);
  return result;
}

double dantzig_bound(const KnapsackInstance& instance) {
  double remaining = instance.budget();
  double bound = 0.0;
  for (std::size_t i : ratio_order(instance)) {
    if (instance.cost(i) <= remaining) {
      bound += instance.value(i);
      remaining -= instance.cost(i);
    } else {
      bound += instance.value(i) * (remaining / instance.cost(i));
      break;
    }
  }
  return bound;
}

}  // namespace kpgrad
