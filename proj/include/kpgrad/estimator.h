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

// Binary estimators mapping one learnable scalar per item to a selection bit.
//
// Both estimators round Sigmoid(.) in the forward pass. In the backward pass
// the straight-through estimator (STE) differentiates Sigmoid(tau * e) with an
// annealed slope tau, while the pass-through estimator (PTE) treats the bit as
// the raw parameter e itself.

#ifndef KPGRAD_ESTIMATOR_H_
#define KPGRAD_ESTIMATOR_H_

#include <cmath>
#include <cstdint>
#include <string_view>
#include <optional>
#include <vector>

namespace kpgrad {

enum class EstimatorKind { kStraightThrough, kPassThrough };

std::string_view estimator_name(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(std::string_view name);

struct EstimatorConfig {
  EstimatorKind kind = EstimatorKind::kStraightThrough;
  double tau0 = 1.0;          // initial slope, >= 1 (STE only)
  double change_rate = 1.01;  // r > 1 (STE only)
  double step = 50.0;         // s >= 1 (STE only)
  double round_threshold = 0.5;

  // Throws std::invalid_argument. PTE skips the annealing checks.
  void validate() const;
};

struct EstimatorState {
  std::vector<double> e;
  std::int64_t epoch = 0;
};

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

// tau(p) = tau0 * r^(p / s). Throws std::logic_error for a PTE config.
double anneal_tau(const EstimatorConfig& config, std::int64_t epoch);

// Slope applied inside the sigmoid: tau(p) for STE, 1 for PTE.
double forward_slope(const EstimatorConfig& config, std::int64_t epoch);

// Single-coordinate forward bit. Ties at the threshold select the item.
inline bool forward_bit(double e, double slope, double threshold) {
  const double z = slope * e;
  // Sigmoid(z) >= 1/2 exactly when z >= 0; the sign avoids rounding near 0.
  if (threshold == 0.5) return z >= 0.0;
  return sigmoid(z) >= threshold;
}

// Bits for every coordinate at the state's epoch.
std::vector<std::uint8_t> forward(const EstimatorState& state,
                                  const EstimatorConfig& config);

struct Relaxation {
  std::vector<double> value;  // relaxed bits
  std::vector<double> slope;  // d(relaxed bit) / de
};

Relaxation backward_relaxation(const EstimatorState& state,
                               const EstimatorConfig& config);

}  // namespace kpgrad

#endif  // KPGRAD_ESTIMATOR_H_
