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

#include "kpgrad/problem.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace kpgrad {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

GradientFn constant_gradient(std::shared_ptr<const std::vector<double>> g) {
  return [g = std::move(g)](std::span<const double>,
                            std::span<const std::size_t> coords,
                            std::span<double> out) {
    for (std::size_t k = 0; k < coords.size(); ++k) out[k] = (*g)[coords[k]];
  };
}

std::optional<LinearForm> scale_form(const std::optional<LinearForm>& form,
                                     double scale) {
  if (!form) return std::nullopt;
  auto coefficients =
      std::make_shared<std::vector<double>>(*form->coefficients);
  for (double& a : *coefficients) a /= scale;
  return LinearForm{std::move(coefficients), form->offset / scale};
}

ValueFn scale_value(ValueFn f, double scale) {
  return [f = std::move(f), scale](std::span<const double> x) {
    return f(x) / scale;
  };
}

GradientFn scale_gradient(GradientFn g, double scale) {
  return [g = std::move(g), scale](std::span<const double> relaxed,
                                   std::span<const std::size_t> coords,
                                   std::span<double> out) {
    g(relaxed, coords, out);
    for (double& d : out) d /= scale;
  };
}

// o(x) = values.x, b(x) = costs.x - budget. Gradients and linear forms share
// the coefficient arrays.
ConstrainedProblem linear_knapsack(
    std::shared_ptr<const std::vector<double>> values,
    std::shared_ptr<const std::vector<double>> costs, double budget) {
  ConstrainedProblem problem;
  problem.dim = values->size();
  problem.uses_estimator = true;
  problem.reads_relaxed_point = false;
  problem.objective_value = [values](std::span<const double> x) {
    return dot(*values, x);
  };
  problem.constraint_value = [costs, budget](std::span<const double> x) {
    return dot(*costs, x) - budget;
  };
  problem.objective_grad = constant_gradient(values);
  problem.constraint_grad = constant_gradient(costs);
  problem.objective_linear = LinearForm{values, 0.0};
  problem.constraint_linear = LinearForm{costs, -budget};
  return problem;
}

std::shared_ptr<const std::vector<double>> divided(
    std::span<const double> data, double scale) {
  auto out = std::make_shared<std::vector<double>>(data.begin(), data.end());
  for (double& d : *out) d /= scale;
  return out;
}

double power_of_two_at_least(double x) {
  return std::exp2(std::ceil(std::log2(x)));
}

}  // namespace

std::vector<double> full_gradient(const GradientFn& grad,
                                  std::span<const double> relaxed) {
  std::vector<std::size_t> coords(relaxed.size());
  std::iota(coords.begin(), coords.end(), std::size_t{0});
  std::vector<double> out(relaxed.size());
  grad(relaxed, coords, out);
  return out;
}

ConstrainedProblem kp_problem(const KnapsackInstance& instance) {
  return linear_knapsack(
      std::make_shared<const std::vector<double>>(instance.values().begin(),
                                                  instance.values().end()),
      std::make_shared<const std::vector<double>>(instance.costs().begin(),
                                                  instance.costs().end()),
      instance.budget());
}

ConstrainedProblem valued_knapsack_problem(std::vector<double> costs,
                                           double budget, ValueFn value,
                                           GradientFn value_grad) {
  if (costs.empty()) throw std::invalid_argument("no items");
  auto shared_costs =
      std::make_shared<const std::vector<double>>(std::move(costs));
  ConstrainedProblem problem;
  problem.dim = shared_costs->size();
  problem.uses_estimator = true;
  problem.reads_relaxed_point = true;
  problem.objective_value = std::move(value);
  problem.objective_grad = std::move(value_grad);
  problem.constraint_value = [shared_costs,
                              budget](std::span<const double> x) {
    return dot(*shared_costs, x) - budget;
  };
  problem.constraint_grad = constant_gradient(shared_costs);
  problem.constraint_linear = LinearForm{shared_costs, -budget};
  return problem;
}

ConstrainedProblem scale_problem(ConstrainedProblem problem,
                                 double objective_scale,
                                 double constraint_scale) {
  if (!(objective_scale > 0.0 && constraint_scale > 0.0)) {
    throw std::invalid_argument("scales must be positive");
  }
  problem.objective_value =
      scale_value(std::move(problem.objective_value), objective_scale);
  problem.objective_grad =
      scale_gradient(std::move(problem.objective_grad), objective_scale);
  problem.constraint_value =
      scale_value(std::move(problem.constraint_value), constraint_scale);
  problem.constraint_grad =
      scale_gradient(std::move(problem.constraint_grad), constraint_scale);
  problem.objective_linear =
      scale_form(problem.objective_linear, objective_scale);
  problem.constraint_linear =
      scale_form(problem.constraint_linear, constraint_scale);
  return problem;
}

ProblemScales knapsack_scales(const KnapsackInstance& instance) {
  const double max_value =
      *std::max_element(instance.values().begin(), instance.values().end());
  const double max_cost =
      *std::max_element(instance.costs().begin(), instance.costs().end());
  return {power_of_two_at_least(max_value), power_of_two_at_least(max_cost)};
}

ConstrainedProblem normalized_kp_problem(const KnapsackInstance& instance) {
  const ProblemScales scales = knapsack_scales(instance);
  return linear_knapsack(divided(instance.values(), scales.objective),
                         divided(instance.costs(), scales.constraint),
                         instance.budget() / scales.constraint);
}

ConstrainedProblem toy_problem() {
  ConstrainedProblem problem;
  problem.dim = 2;
  problem.uses_estimator = false;
  problem.reads_relaxed_point = true;
  problem.objective_value = [](std::span<const double> t) {
    return t[0] * t[0] + t[1] * t[1];
  };
  problem.objective_grad = [](std::span<const double> t,
                              std::span<const std::size_t> coords,
                              std::span<double> out) {
    for (std::size_t k = 0; k < coords.size(); ++k) {
      out[k] = 2.0 * t[coords[k]];
    }
  };
  problem.constraint_value = [](std::span<const double> t) {
    return (t[0] - 1.0) * (t[0] - 1.0) + (t[1] - 1.0) * (t[1] - 1.0) - 1.0;
  };
  problem.constraint_grad = [](std::span<const double> t,
                               std::span<const std::size_t> coords,
                               std::span<double> out) {
    for (std::size_t k = 0; k < coords.size(); ++k) {
      out[k] = 2.0 * (t[coords[k]] - 1.0);
    }
  };
  return problem;
}

ChainedGradients chain_gradients(const ConstrainedProblem& problem,
                                 const EstimatorState& state,
                                 const EstimatorConfig& config) {
  if (!problem.uses_estimator) {
    throw std::logic_error("problem is optimized over raw parameters");
  }
  const Relaxation relaxed = backward_relaxation(state, config);
  ChainedGradients out{full_gradient(problem.objective_grad, relaxed.value),
                       full_gradient(problem.constraint_grad, relaxed.value)};
  for (std::size_t i = 0; i < relaxed.slope.size(); ++i) {
    out.objective[i] *= relaxed.slope[i];
    out.constraint[i] *= relaxed.slope[i];
  }
  return out;
}

}  // namespace kpgrad
