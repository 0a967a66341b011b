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

// Adaptive gradient ascent on the squared-penalty Lagrangian
//
//   L(theta) = o(x) - 0.5 * beta * max(0, b(x))^2,   x = f(theta),
//
// where beta is re-derived from the current gradients whenever the forward
// point overruns the constraint, so that one ascent step reduces the overrun
// while, where possible, not reducing the objective.

#ifndef KPGRAD_SOLVER_H_
#define KPGRAD_SOLVER_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "kpgrad/estimator.h"
#include "kpgrad/instance.h"
#include "kpgrad/problem.h"
#include "kpgrad/random.h"

namespace kpgrad {

// Initial values of the learnable parameters.
struct Initialization {
  enum class Kind { kZero, kConstant, kGaussian };
  Kind kind = Kind::kZero;
  double parameter = 0.0;  // the constant, or the standard deviation

  static Initialization zero() { return {}; }
  static Initialization constant(double value) {
    return {Kind::kConstant, value};
  }
  static Initialization gaussian(double stddev) {
    return {Kind::kGaussian, stddev};
  }
};

// Guards against a stalled overrun. The adaptive beta makes the penalty
// step independent of how far the forward point is over budget, so a run can
// sit at a constant overrun indefinitely. While the overrun fails to shrink
// by `sufficient_decrease` from one step to the next, beta is scaled up by a
// further factor of `growth`; every feasible step divides the scale by
// `relief` (never below 1). growth = 1 disables the guard.
struct PenaltySafeguard {
  double growth = 1.01;
  double sufficient_decrease = 0.95;
  double relief = 1.2;
};

struct SolverConfig {
  double learning_rate = 0.1;       // gamma
  double minibatch_fraction = 0.1;  // xi
  // Patience k and the cap are counted in epochs. One epoch is ceil(n / m)
  // mini-batch steps of m = ceil(xi * n) coordinates, i.e. one pass over the
  // parameters in expectation.
  std::int64_t patience = 100;
  std::int64_t max_epochs = 100000;
  std::uint64_t seed = 0;
  Initialization init;
  EstimatorConfig estimator;
  PenaltySafeguard safeguard;
  // Knapsack front end only: optimize normalized_kp_problem rather than the
  // raw kp_problem. Sigmoid-based estimators saturate after one step when
  // gradients are in the hundreds, so the default learning rate assumes
  // unit-scale coefficients.
  bool normalize = true;
  bool record_trace = true;

  // Throws std::invalid_argument.
  void validate() const;
};

struct TraceEntry {
  std::int64_t epoch = 0;
  double objective = 0.0;      // at the forward point ending the epoch
  double constraint = 0.0;
  double beta = 0.0;           // penalty weight used by the epoch's last step
  std::optional<double> tau;   // STE slope; empty for PTE or raw parameters
  bool feasible = false;
};

struct SolverState {
  explicit SolverState(std::uint64_t seed) : rng(seed) {}

  EstimatorState params;  // theta and the epoch counter p
  double beta = 0.0;
  std::int64_t tolerance = 0;
  // b at the most recent forward point; empty before the first evaluation.
  std::optional<double> last_constraint;
  bool has_feasible = false;
  double best_objective = -std::numeric_limits<double>::infinity();
  std::vector<double> best_point;
  std::vector<TraceEntry> trace;
  std::int64_t steps = 0;
  std::int64_t stall_events = 0;
  double penalty_scale = 1.0;  // see PenaltySafeguard

  Rng rng;
  // Coordinates updated by the latest step, ascending.
  std::vector<std::size_t> batch;

  // Scratch space reused across steps.
  std::vector<std::uint64_t> batch_mask;
  std::vector<double> objective_grad;
  std::vector<double> constraint_grad;
  std::vector<double> slope;
};

// beta is only defined for a non-zero constraint gradient.
class DegenerateGradient : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

SolverState initial_state(const ConstrainedProblem& problem,
                          const SolverConfig& config);

// Minimizer over lambda >= 0 of -lambda * b + delta * lambda^2.
// Throws std::invalid_argument unless delta > 0.
double optimal_lambda(double b_value, double delta);

// o(x) - 0.5 * beta * max(0, b(x))^2. Throws std::invalid_argument if
// beta < 0.
double lagrangian(const ConstrainedProblem& problem,
                  std::span<const double> point, double beta);

// Bounds on beta for an overrunning point (b > 0) and a linear step
// e += gamma * (o' - beta * b * b'): any beta > lower strictly decreases the
// relaxed constraint, and when b'.o' > 0 any beta <= upper does not decrease
// the relaxed objective. upper is empty unless b'.o' > 0.
struct BetaBounds {
  double lower = 0.0;  // b'.o' / (b b'.b')
  std::optional<double> upper;  // o'.o' / (b b'.o')
};

// Throws std::invalid_argument if b_value <= 0 and DegenerateGradient if
// b'.b' == 0.
BetaBounds beta_bounds(std::span<const double> o_grad,
                       std::span<const double> b_grad, double b_value);

// Penalty weight for an overrunning point with objective gradient `o_grad`
// and constraint gradient `b_grad`:
//   b'.o' < 0                  -> 0
//   b'.o' > 0 and lower < upper -> (lower + upper) / 2
//   otherwise                  -> lower + 1 / (gamma * b'.b')
// with lower = b'.o' / (b b'.b') and upper = o'.o' / (b b'.o').
// Throws std::invalid_argument if b_value <= 0 and DegenerateGradient if
// b'.b' == 0.
double compute_beta(std::span<const double> o_grad,
                    std::span<const double> b_grad, double b_value,
                    double learning_rate);

// One mini-batch ascent step. Draws ceil(xi * n) coordinates, recomputes
// beta from the gradients restricted to them when the last forward point
// overran the constraint (beta = 0 otherwise), then applies
// e_i += gamma * (o'_i - beta * max(0, b) * b'_i). The drawn coordinates are
// left in `state.batch`.
void step(const ConstrainedProblem& problem, SolverState& state,
          const SolverConfig& config);

// Point the problem's values are evaluated on: forward bits as 0/1 reals, or
// the raw parameters when the problem does not use an estimator.
std::vector<double> forward_point(const ConstrainedProblem& problem,
                                  const SolverState& state,
                                  const SolverConfig& config);

// ceil(xi * n), at least 1.
std::size_t batch_size(std::size_t n, double minibatch_fraction);

// Mini-batch steps per epoch: ceil(n / batch_size).
std::int64_t steps_per_epoch(std::size_t n, double minibatch_fraction);

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  double constraint = 0.0;
  bool feasible = false;
  std::int64_t epochs_run = 0;
  std::int64_t steps_run = 0;
  double wall_time_s = 0.0;
  std::int64_t stall_events = 0;
  std::vector<TraceEntry> trace;
};

// Runs the ascent loop with early stopping and returns the best feasible
// point seen. If none was feasible, returns the final point with
// feasible = false.
//
// Each epoch runs steps_per_epoch() mini-batch steps and re-evaluates the
// forward point after every one of them; the best snapshot may come from any
// step. Patience is reset by an epoch that improved the best feasible
// objective and spent by one that did not. The slope tau is fixed within an
// epoch.
Solution solve(const ConstrainedProblem& problem, const SolverConfig& config);

struct KnapsackSolution {
  std::vector<std::uint8_t> x;
  double objective = 0.0;
  double cost = 0.0;
  bool feasible = false;
  std::int64_t epochs_run = 0;
  std::int64_t steps_run = 0;
  double wall_time_s = 0.0;
  std::int64_t stall_events = 0;
  std::vector<TraceEntry> trace;
};

// Knapsack front end. Falls back to the empty selection when no feasible
// forward point was ever reached, so the result always fits the budget.
KnapsackSolution solve(const KnapsackInstance& instance,
                       const SolverConfig& config);

// One JSON object per line:
// {"epoch","objective","constraint","beta","tau","feasible"}.
void write_trace(std::span<const TraceEntry> trace, std::ostream& out);

}  // namespace kpgrad

#endif  // KPGRAD_SOLVER_H_
