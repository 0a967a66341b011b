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

#ifndef KPGRAD_PROBLEM_H_
#define KPGRAD_PROBLEM_H_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kpgrad/estimator.h"
#include "kpgrad/instance.h"

namespace kpgrad {

// Scalar function of a point (forward bits, or raw parameters when the
// problem does not use an estimator).
using ValueFn = std::function<double(std::span<const double> point)>;

// Partial derivatives of a scalar function at the relaxed point, for the
// coordinates listed in `coords` only: out[k] = df / dx[coords[k]].
using GradientFn = std::function<void(std::span<const double> relaxed,
                                      std::span<const std::size_t> coords,
                                      std::span<double> out)>;

// f(x) = coefficients . x + offset. Problems that declare their value
// functions linear let the solver update values incrementally as individual
// coordinates change instead of re-evaluating the whole point.
struct LinearForm {
  std::shared_ptr<const std::vector<double>> coefficients;
  double offset = 0.0;
};

// Single-constraint maximization problem: maximize o(x) s.t. b(x) <= 0.
//
// Values are taken on forward points and gradients on the relaxed point.
struct ConstrainedProblem {
  std::size_t dim = 0;
  // False when the parameters are the decision variables themselves.
  bool uses_estimator = true;
  // False when the gradient callbacks ignore `relaxed` (constant gradients),
  // which lets the solver skip relaxing coordinates outside a mini-batch.
  bool reads_relaxed_point = true;
  ValueFn objective_value;
  GradientFn objective_grad;
  ValueFn constraint_value;
  GradientFn constraint_grad;
  // Optional closed forms of objective_value / constraint_value.
  std::optional<LinearForm> objective_linear;
  std::optional<LinearForm> constraint_linear;
};

// Full-length gradient of `grad` at `relaxed`.
std::vector<double> full_gradient(const GradientFn& grad,
                                  std::span<const double> relaxed);

// o(x) = v.x, b(x) = c.x - B, with constant gradients v and c.
ConstrainedProblem kp_problem(const KnapsackInstance& instance);

// Knapsack with an external value assignment function: o(x) = value(x) and
// b(x) = c.x - budget. `value_grad` supplies d value / dx.
ConstrainedProblem valued_knapsack_problem(std::vector<double> costs,
                                           double budget, ValueFn value,
                                           GradientFn value_grad);

// The same problem with o and b divided by positive scales: values,
// gradients and linear forms alike. Feasibility is unchanged; powers of two
// keep every value exact.
ConstrainedProblem scale_problem(ConstrainedProblem problem,
                                 double objective_scale,
                                 double constraint_scale);

struct ProblemScales {
  double objective = 1.0;
  double constraint = 1.0;
};

// Smallest powers of two not below max v and max c.
ProblemScales knapsack_scales(const KnapsackInstance& instance);

// kp_problem divided by knapsack_scales, so that gradients are of order one
// whatever the coefficient range.
ConstrainedProblem normalized_kp_problem(const KnapsackInstance& instance);

// Maximize x1^2 + x2^2 subject to (x1 - 1)^2 + (x2 - 1)^2 <= 1, optimized
// directly over the raw parameters.
ConstrainedProblem toy_problem();

struct ChainedGradients {
  std::vector<double> objective;   // do/de
  std::vector<double> constraint;  // db/de
};

// Gradients with respect to the estimator parameters: the problem's relaxed
// gradients multiplied by the estimator's backward slope.
// Throws std::logic_error if the problem does not use an estimator.
ChainedGradients chain_gradients(const ConstrainedProblem& problem,
                                 const EstimatorState& state,
                                 const EstimatorConfig& config);

}  // namespace kpgrad

#endif  // KPGRAD_PROBLEM_H_
