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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "kpgrad/random.h"

namespace kpgrad {
namespace {

KnapsackInstance ThreeItems() { return KnapsackInstance({6, 10, 12}, {1, 2, 3}, 5); }

double RelativeError(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

TEST(KpProblemTest, Values) {
  const ConstrainedProblem problem = kp_problem(ThreeItems());
  EXPECT_EQ(problem.dim, 3u);
  EXPECT_TRUE(problem.uses_estimator);
  const std::vector<double> best = {0, 1, 1}, none = {0, 0, 0}, all = {1, 1, 1};
  EXPECT_EQ(problem.objective_value(best), 22.0);
  EXPECT_EQ(problem.constraint_value(best), 0.0);
  EXPECT_EQ(problem.objective_value(none), 0.0);
  EXPECT_EQ(problem.constraint_value(none), -5.0);
  EXPECT_EQ(problem.objective_value(all), 28.0);
  EXPECT_EQ(problem.constraint_value(all), 1.0);
}

TEST(KpProblemTest, LinearFormsMatchValueFunctions) {
  GeneratorSpec spec;
  spec.n = 64;
  spec.seed = 2;
  const KnapsackInstance instance = generate(spec);
  Rng rng(3);
  for (const ConstrainedProblem& problem :
       {kp_problem(instance), normalized_kp_problem(instance)}) {
    ASSERT_TRUE(problem.objective_linear && problem.constraint_linear);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x(instance.size());
      double o = problem.objective_linear->offset;
      double b = problem.constraint_linear->offset;
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<double>(rng.index(2));
        o += (*problem.objective_linear->coefficients)[i] * x[i];
        b += (*problem.constraint_linear->coefficients)[i] * x[i];
      }
      EXPECT_DOUBLE_EQ(problem.objective_value(x), o);
      EXPECT_DOUBLE_EQ(problem.constraint_value(x), b);
    }
  }
}

TEST(KpProblemTest, NormalizationIsExactScaling) {
  const KnapsackInstance instance({600, 1000, 1200}, {100, 200, 300}, 500);
  const ProblemScales scales = knapsack_scales(instance);
  EXPECT_EQ(scales.objective, 2048.0);
  EXPECT_EQ(scales.constraint, 512.0);
  const ConstrainedProblem raw = kp_problem(instance);
  const ConstrainedProblem scaled = normalized_kp_problem(instance);
  for (int mask = 0; mask < 8; ++mask) {
    const std::vector<double> x = {double(mask & 1), double((mask >> 1) & 1),
                                   double((mask >> 2) & 1)};
    EXPECT_EQ(scaled.objective_value(x) * scales.objective,
              raw.objective_value(x));
    EXPECT_EQ(scaled.constraint_value(x) * scales.constraint,
              raw.constraint_value(x));
  }
  const std::vector<double> relaxed = {0.5, 0.5, 0.5};
  const std::vector<double> g = full_gradient(scaled.objective_grad, relaxed);
  EXPECT_EQ(g[2], 1200.0 / 2048.0);
}

TEST(KnapsackScalesTest, PowersOfTwo) {
  const KnapsackInstance instance({1, 1024, 3}, {0.3, 1, 1025}, 5);
  const ProblemScales scales = knapsack_scales(instance);
  EXPECT_EQ(scales.objective, 1024.0);
  EXPECT_EQ(scales.constraint, 2048.0);
  const KnapsackInstance tiny({0.3}, {0.2}, 1);
  EXPECT_EQ(knapsack_scales(tiny).objective, 0.5);
  EXPECT_EQ(knapsack_scales(tiny).constraint, 0.25);
}

TEST(ChainGradientsTest, PassThroughIsIdentity) {
  EstimatorConfig pte;
  pte.kind = EstimatorKind::kPassThrough;
  EstimatorState state;
  state.e = {0.3, -1.0, 2.0};
  const ChainedGradients g = chain_gradients(kp_problem(ThreeItems()), state, pte);
  EXPECT_EQ(g.objective, (std::vector<double>{6, 10, 12}));
  EXPECT_EQ(g.constraint, (std::vector<double>{1, 2, 3}));
}

TEST(ChainGradientsTest, StraightThroughSingleItem) {
  const KnapsackInstance instance({2}, {1}, 5);
  EstimatorState state;
  state.e = {0.0};
  const ChainedGradients g = chain_gradients(kp_problem(instance), state, {});
  EXPECT_EQ(g.objective[0], 0.5);
  EXPECT_EQ(g.constraint[0], 0.25);
}

TEST(ChainGradientsTest, ZeroValueItemHasZeroGradient) {
  // Values must be positive in an instance; the raw problem interface
  // accepts any value function.
  const ConstrainedProblem problem = valued_knapsack_problem(
      {1, 2}, 2,
      [](std::span<const double> x) { return 3.0 * x[1]; },
      [](std::span<const double>, std::span<const std::size_t> coords,
         std::span<double> out) {
        for (std::size_t k = 0; k < coords.size(); ++k) {
          out[k] = coords[k] == 1 ? 3.0 : 0.0;
        }
      });
  EstimatorState state;
  state.e = {0.4, -0.2};
  const ChainedGradients g = chain_gradients(problem, state, {});
  EXPECT_EQ(g.objective[0], 0.0);
  EXPECT_GT(g.objective[1], 0.0);
  EXPECT_GT(g.constraint[0], 0.0);
}

TEST(ChainGradientsTest, RawParameterProblemIsRejected) {
  EstimatorState state;
  state.e = {0.0, 0.0};
  EXPECT_THROW(chain_gradients(toy_problem(), state, {}), std::logic_error);
}

// f(up) - f(down) for the relaxed knapsack value f(e) = a . relax(e),
// summed term by term so that unchanged coordinates cancel exactly.
double RelaxedDifference(std::span<const double> coefficients,
                         const std::vector<double>& up,
                         const std::vector<double>& down, double tau,
                         bool ste) {
  auto relax = [&](double e) {
    return ste ? 1.0 / (1.0 + std::exp(-tau * e)) : e;
  };
  double total = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) {
    total += coefficients[i] * (relax(up[i]) - relax(down[i]));
  }
  return total;
}

TEST(ChainGradientsTest, CentralDifferences) {
  Rng rng(21);
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    GeneratorSpec spec;
    spec.family = static_cast<Family>(t % 4);
    spec.n = 8;
    spec.seed = static_cast<std::uint64_t>(t);
    const KnapsackInstance instance = generate(spec);
    EstimatorConfig config;
    if ((t / 4) % 2 == 1) config.kind = EstimatorKind::kPassThrough;
    config.tau0 = 1.0 + 2.0 * rng.uniform01();
    const bool ste = config.kind == EstimatorKind::kStraightThrough;
    EstimatorState state;
    for (std::size_t i = 0; i < spec.n; ++i) {
      state.e.push_back(6.0 * rng.uniform01() - 3.0);
    }
    const ChainedGradients g = chain_gradients(kp_problem(instance), state, config);
    for (std::size_t i = 0; i < spec.n; ++i) {
      std::vector<double> up = state.e, down = state.e;
      up[i] += h;
      down[i] -= h;
      const double fd_o =
          RelaxedDifference(instance.values(), up, down, config.tau0, ste) /
          (2.0 * h);
      const double fd_b =
          RelaxedDifference(instance.costs(), up, down, config.tau0, ste) /
          (2.0 * h);
      EXPECT_LE(RelativeError(g.objective[i], fd_o), 1e-6) << t << " " << i;
      EXPECT_LE(RelativeError(g.constraint[i], fd_b), 1e-6) << t << " " << i;
    }
  }
}

TEST(ToyProblemTest, Values) {
  const ConstrainedProblem problem = toy_problem();
  EXPECT_FALSE(problem.uses_estimator);
  const std::vector<double> center = {1, 1}, edge = {2, 1};
  EXPECT_EQ(problem.objective_value(center), 2.0);
  EXPECT_EQ(problem.constraint_value(center), -1.0);
  EXPECT_EQ(problem.objective_value(edge), 5.0);
  EXPECT_EQ(problem.constraint_value(edge), 0.0);
  const double c = 1.0 + 1.0 / std::numbers::sqrt2;
  const std::vector<double> optimum = {c, c};
  EXPECT_NEAR(problem.objective_value(optimum), 3.0 + 2.0 * std::numbers::sqrt2,
              1e-12);
  EXPECT_NEAR(problem.constraint_value(optimum), 0.0, 1e-12);
}

TEST(ToyProblemTest, OptimumBeatsDenseGrid) {
  // Dense polar grid over the feasible disk.
  const ConstrainedProblem problem = toy_problem();
  double best = -1.0;
  for (int r = 0; r <= 200; ++r) {
    for (int a = 0; a < 720; ++a) {
      const double radius = r / 200.0;
      const double angle = a * std::numbers::pi / 360.0;
      const std::vector<double> t = {1.0 + radius * std::cos(angle),
                                     1.0 + radius * std::sin(angle)};
      best = std::max(best, problem.objective_value(t));
    }
  }
  EXPECT_NEAR(best, 3.0 + 2.0 * std::numbers::sqrt2, 1e-9);
}

TEST(ToyProblemTest, CentralDifferences) {
  const ConstrainedProblem problem = toy_problem();
  Rng rng(4);
  const double h = 1e-5;
  for (int t = 0; t < 100; ++t) {
    const std::vector<double> p = {4.0 * rng.uniform01() - 1.0,
                                   4.0 * rng.uniform01() - 1.0};
    const std::vector<double> go = full_gradient(problem.objective_grad, p);
    const std::vector<double> gb = full_gradient(problem.constraint_grad, p);
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<double> up = p, down = p;
      up[i] += h;
      down[i] -= h;
      EXPECT_LE(RelativeError(go[i], (problem.objective_value(up) -
                                      problem.objective_value(down)) /
                                         (2.0 * h)),
                1e-6);
      EXPECT_LE(RelativeError(gb[i], (problem.constraint_value(up) -
                                      problem.constraint_value(down)) /
                                         (2.0 * h)),
                1e-6);
    }
  }
}

TEST(ScaleProblemTest, DividesValuesAndGradients) {
  const ConstrainedProblem scaled = scale_problem(toy_problem(), 2.0, 4.0);
  const std::vector<double> p = {2.0, 1.0};
  EXPECT_EQ(scaled.objective_value(p), 2.5);
  EXPECT_EQ(scaled.constraint_value(p), 0.0);
  EXPECT_EQ(full_gradient(scaled.objective_grad, p)[0], 2.0);
  EXPECT_EQ(full_gradient(scaled.constraint_grad, p)[0], 0.5);
}

TEST(FullGradientTest, CoordinateSubsetMatchesFull) {
  const ConstrainedProblem problem = kp_problem(ThreeItems());
  const std::vector<double> relaxed = {0.1, 0.2, 0.3};
  const std::vector<std::size_t> coords = {2, 0};
  std::vector<double> out(2);
  problem.objective_grad(relaxed, coords, out);
  EXPECT_EQ(out, (std::vector<double>{12, 6}));
}

}  // namespace
}  // namespace kpgrad
