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

// Reference solvers used to check the gradient solver: exhaustive search,
// exact dynamic programming, the ratio-greedy heuristic and the LP-relaxation
// (Dantzig) upper bound.
//
// Ties between equally valued selections are broken by lower cost, then by
// the lexicographically smallest selection vector (x_1 first, 0 < 1).

#ifndef KPGRAD_ORACLE_H_
#define KPGRAD_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kpgrad/instance.h"

namespace kpgrad {

enum class OracleMethod { kBruteForce, kDynamicProgramming, kGreedy, kBound };

std::string_view oracle_name(OracleMethod method);

struct OracleResult {
  std::optional<std::vector<std::uint8_t>> x;  // empty for bound-only results
  double objective = 0.0;
  double cost = 0.0;
  OracleMethod method = OracleMethod::kBruteForce;
};

inline constexpr std::size_t kBruteForceMaxItems = 25;

// Exhaustive search. Throws std::invalid_argument when the instance has more
// than `max_items` items; `max_items` itself may not exceed 30.
OracleResult brute_force(const KnapsackInstance& instance,
                         std::size_t max_items = kBruteForceMaxItems);

struct DpOptions {
  // Upper bound on n * (floor(B) + 1), the size of the decision bit table.
  std::uint64_t max_cells = std::uint64_t{1} << 31;
};

// O(n * B) dynamic program over integer capacities. Throws
// std::invalid_argument for non-integral costs and std::length_error when
// the table would exceed `options.max_cells`.
OracleResult dp_exact(const KnapsackInstance& instance,
                      const DpOptions& options = {});

enum class GreedyRule {
  kSkipMisfits,        // keep scanning past items that do not fit
  kStopAtFirstMisfit,  // stop at the first item that does not fit
};

// Scans items by descending value/cost ratio (ties by lower index).
OracleResult greedy(const KnapsackInstance& instance,
                    GreedyRule rule = GreedyRule::kSkipMisfits);

// Greedy prefix plus the fractional part of the first item that does not fit.
double dantzig_bound(const KnapsackInstance& instance);

// Item indices by descending value/cost ratio, ties by lower index.
std::vector<std::size_t> ratio_order(const KnapsackInstance& instance);

}  // namespace kpgrad

#endif  // KPGRAD_ORACLE_H_
