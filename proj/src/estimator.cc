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

#include "kpgrad/estimator.h"

#include <algorithm>
#include <stdexcept>

namespace kpgrad {

std::string_view estimator_name(EstimatorKind kind) {
  return kind == EstimatorKind::kStraightThrough ? "ste" : "pte";
}

std::optional<EstimatorKind> parse_estimator(std::string_view name) {
  if (name == "ste") return EstimatorKind::kStraightThrough;
  if (name == "pte") return EstimatorKind::kPassThrough;
  return std::nullopt;
}

void EstimatorConfig::validate() const {
  if (!(round_threshold > 0.0 && round_threshold < 1.0)) {
    throw std::invalid_argument("round threshold must lie in (0, 1)");
  }
  if (kind == EstimatorKind::kPassThrough) return;
  if (!(tau0 >= 1.0)) throw std::invalid_argument("tau0 must be >= 1");
  if (!(change_rate > 1.0)) {
    throw std::invalid_argument("change rate must be > 1");
  }
  if (!(step >= 1.0)) throw std::invalid_argument("annealing step must be >= 1");
}

double anneal_tau(const EstimatorConfig& config, std::int64_t epoch) {
  if (config.kind != EstimatorKind::kStraightThrough) {
    throw std::logic_error("slope annealing applies to STE only");
  }
  if (epoch < 0) throw std::logic_error("epoch must be non-negative");
  return config.tau0 *
         std::pow(config.change_rate, static_cast<double>(epoch) / config.step);
}

double forward_slope(const EstimatorConfig& config, std::int64_t epoch) {
  return config.kind == EstimatorKind::kStraightThrough
             ? anneal_tau(config, epoch)
             : 1.0;
}

std::vector<std::uint8_t> forward(const EstimatorState& state,
                                  const EstimatorConfig& config) {
  const double slope = forward_slope(config, state.epoch);
  std::vector<std::uint8_t> x(state.e.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = forward_bit(state.e[i], slope, config.round_threshold) ? 1 : 0;
  }
  return x;
}

Relaxation backward_relaxation(const EstimatorState& state,
                               const EstimatorConfig& config) {
  Relaxation out;
  out.value.resize(state.e.size());
  out.slope.resize(state.e.size());
  if (config.kind == EstimatorKind::kPassThrough) {
    out.value = state.e;
    std::fill(out.slope.begin(), out.slope.end(), 1.0);
    return out;
  }
  const double tau = anneal_tau(config, state.epoch);
  for (std::size_t i = 0; i < state.e.size(); ++i) {
    const double s = sigmoid(tau * state.e[i]);
    out.value[i] = s;
    out.slope[i] = tau * s * (1.0 - s);
  }
  return out;
}

}  // namespace kpgrad
