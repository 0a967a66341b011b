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

#include "kpgrad/solver.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <utility>

#include "json.hpp"

namespace kpgrad {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

// Draws a uniformly random m-subset of the n coordinates into
// `state.batch` in ascending order (Floyd's algorithm over a bitmap).
void draw_batch(SolverState& state, std::size_t n, std::size_t m) {
  std::vector<std::size_t>& batch = state.batch;
  batch.clear();
  if (m >= n) {
    batch.resize(n);
    std::iota(batch.begin(), batch.end(), std::size_t{0});
    return;
  }
  std::vector<std::uint64_t>& mask = state.batch_mask;
  mask.resize((n + 63) / 64, 0);
  auto is_set = [&](std::size_t i) { return (mask[i >> 6] >> (i & 63)) & 1u; };
  for (std::size_t j = n - m; j < n; ++j) {
    std::size_t t = state.rng.index(j + 1);
    if (is_set(t)) t = j;
    mask[t >> 6] |= std::uint64_t{1} << (t & 63);
  }
  batch.resize(m);
  std::size_t k = 0;
  for (std::size_t w = 0; w < mask.size(); ++w) {
    std::uint64_t bits = mask[w];
    mask[w] = 0;
    while (bits != 0) {
      batch[k++] = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
      bits &= bits - 1;
    }
  }
}

// One ascent step. `on_move(i, old_e)` is called for every coordinate whose
// parameter was changed.
template <typename OnMove>
void ascend(const ConstrainedProblem& problem, SolverState& state,
            const SolverConfig& config, OnMove&& on_move) {
  const std::size_t n = problem.dim;
  if (!state.last_constraint) {
    state.last_constraint =
        problem.constraint_value(forward_point(problem, state, config));
  }
  draw_batch(state, n, batch_size(n, config.minibatch_fraction));
  const std::span<const std::size_t> coords = state.batch;
  const std::size_t m = coords.size();
  std::vector<double>& e = state.params.e;
  std::vector<double>& o_grad = state.objective_grad;
  std::vector<double>& b_grad = state.constraint_grad;
  std::vector<double>& slope = state.slope;
  o_grad.resize(m);
  b_grad.resize(m);
  slope.assign(m, 1.0);

  // Relaxed point and d(relaxed)/de. Only the batch is needed unless the
  // gradient callbacks look at the relaxed point.
  std::vector<double> relaxed;
  std::span<const double> relaxed_view;
  if (problem.uses_estimator) {
    const bool ste =
        config.estimator.kind == EstimatorKind::kStraightThrough;
    const double tau = ste ? anneal_tau(config.estimator, state.params.epoch)
                           : 1.0;
    auto relax = [&](double ei) { return ste ? sigmoid(tau * ei) : ei; };
    if (problem.reads_relaxed_point) {
      relaxed.resize(n);
      for (std::size_t i = 0; i < n; ++i) relaxed[i] = relax(e[i]);
      relaxed_view = relaxed;
    }
    if (ste) {
      for (std::size_t k = 0; k < m; ++k) {
        const double s = relax(e[coords[k]]);
        slope[k] = tau * s * (1.0 - s);
      }
    }
  } else {
    relaxed_view = e;
  }

  problem.objective_grad(relaxed_view, coords, o_grad);
  problem.constraint_grad(relaxed_view, coords, b_grad);
  for (std::size_t k = 0; k < m; ++k) {
    o_grad[k] *= slope[k];
    b_grad[k] *= slope[k];
  }

  const double overrun = std::max(0.0, *state.last_constraint);
  state.beta = 0.0;
  if (overrun > 0.0) {
    try {
      state.beta = state.penalty_scale *
                   compute_beta(o_grad, b_grad, overrun, config.learning_rate);
    } catch (const DegenerateGradient&) {
      // Every coordinate in the batch is saturated. Walk the selected ones
      // back toward zero by one learning-rate step and leave the rest alone.
      ++state.stall_events;
      const double forward = problem.uses_estimator
                                 ? forward_slope(config.estimator,
                                                 state.params.epoch)
                                 : 1.0;
      for (std::size_t i : coords) {
        const double old = e[i];
        const bool selected =
            !problem.uses_estimator ||
            forward_bit(old, forward, config.estimator.round_threshold);
        if (selected) {
          e[i] -= std::copysign(std::min(std::abs(old), config.learning_rate),
                                old);
          on_move(i, old);
        }
      }
      return;
    }
  }

  const double penalty = state.beta * overrun;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = coords[k];
    const double old = e[i];
    e[i] += config.learning_rate * (o_grad[k] - penalty * b_grad[k]);
    on_move(i, old);
  }
}

// Forward point of a run, derived from the parameters on demand. Keeps o and
// b current as coordinates move (incrementally for linear problems), and
// tracks which coordinates moved since the best snapshot was last written so
// that snapshots cost time proportional to the change.
class ForwardTracker {
 public:
  ForwardTracker(const ConstrainedProblem& problem, const SolverConfig& config,
                 const SolverState& state)
      : problem_(problem),
        threshold_(config.estimator.round_threshold),
        incremental_(problem.objective_linear.has_value() &&
                     problem.constraint_linear.has_value()),
        slope_(problem.uses_estimator
                   ? forward_slope(config.estimator, state.params.epoch)
                   : 1.0),
        moved_flag_(problem.dim, 0) {
    recompute_values(state);
  }

  double objective() const { return objective_; }
  double constraint() const { return constraint_; }

  double coordinate(double e) const {
    if (!problem_.uses_estimator) return e;
    return forward_bit(e, slope_, threshold_) ? 1.0 : 0.0;
  }

  std::vector<double> point(const SolverState& state) const {
    std::vector<double> x(state.params.e.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = coordinate(state.params.e[i]);
    }
    return x;
  }

  void moved(const SolverState& state, std::size_t i, double old_e) {
    const double delta = coordinate(state.params.e[i]) - coordinate(old_e);
    if (delta == 0.0) return;
    mark(i);
    if (incremental_) {
      objective_ += (*problem_.objective_linear->coefficients)[i] * delta;
      constraint_ += (*problem_.constraint_linear->coefficients)[i] * delta;
    }
  }

  void finish_step(const SolverState& state) {
    if (!incremental_) recompute_values(state);
  }

  // Closes an epoch: re-evaluates o and b exactly under the current slope
  // (kept as the epoch's closing values) and then switches to `slope`,
  // marking every coordinate whose bit flips. One pass for linear problems.
  void end_epoch(const SolverState& state, double slope) {
    const std::vector<double>& e = state.params.e;
    if (!problem_.uses_estimator || !incremental_) {
      recompute_values(state);
      closing_objective_ = objective_;
      closing_constraint_ = constraint_;
      if (!problem_.uses_estimator || slope == slope_) return;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (forward_bit(e[i], slope_, threshold_) !=
            forward_bit(e[i], slope, threshold_)) {
          mark(i);
        }
      }
      slope_ = slope;
      recompute_values(state);
      return;
    }
    const std::vector<double>& a = *problem_.objective_linear->coefficients;
    const std::vector<double>& c = *problem_.constraint_linear->coefficients;
    double o_old = 0.0, b_old = 0.0, o_new = 0.0, b_new = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const bool before = forward_bit(e[i], slope_, threshold_);
      const bool after =
          slope == slope_ ? before : forward_bit(e[i], slope, threshold_);
      if (before) {
        o_old += a[i];
        b_old += c[i];
      }
      if (after) {
        o_new += a[i];
        b_new += c[i];
      }
      if (before != after) mark(i);
    }
    closing_objective_ = o_old + problem_.objective_linear->offset;
    closing_constraint_ = b_old + problem_.constraint_linear->offset;
    objective_ = o_new + problem_.objective_linear->offset;
    constraint_ = b_new + problem_.constraint_linear->offset;
    slope_ = slope;
  }

  double closing_objective() const { return closing_objective_; }
  double closing_constraint() const { return closing_constraint_; }

  // Exact re-evaluation, discarding rounding accumulated by updates.
  void recompute_values(const SolverState& state) {
    if (!problem_.uses_estimator) {
      objective_ = problem_.objective_value(state.params.e);
      constraint_ = problem_.constraint_value(state.params.e);
      return;
    }
    if (incremental_) {
      objective_ = linear_value(*problem_.objective_linear, state);
      constraint_ = linear_value(*problem_.constraint_linear, state);
      return;
    }
    const std::vector<double> x = point(state);
    objective_ = problem_.objective_value(x);
    constraint_ = problem_.constraint_value(x);
  }

  // Brings `snapshot` (the point at the previous call) up to date.
  void write_snapshot(const SolverState& state, std::vector<double>& snapshot) {
    if (snapshot.size() != state.params.e.size()) {
      snapshot = point(state);
    } else {
      for (std::size_t i : moved_) snapshot[i] = coordinate(state.params.e[i]);
    }
    for (std::size_t i : moved_) moved_flag_[i] = 0;
    moved_.clear();
  }

 private:
  double linear_value(const LinearForm& form, const SolverState& state) const {
    const std::vector<double>& a = *form.coefficients;
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (coordinate(state.params.e[i]) != 0.0) total += a[i];
    }
    return total + form.offset;
  }

  void mark(std::size_t i) {
    if (moved_flag_[i]) return;
    moved_flag_[i] = 1;
    moved_.push_back(i);
  }

  const ConstrainedProblem& problem_;
  const double threshold_;
  const bool incremental_;
  double slope_;
  double objective_ = 0.0;
  double constraint_ = 0.0;
  double closing_objective_ = 0.0;
  double closing_constraint_ = 0.0;
  std::vector<std::uint8_t> moved_flag_;
  std::vector<std::size_t> moved_;
};

}  // namespace

void SolverConfig::validate() const {
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (!(minibatch_fraction > 0.0 && minibatch_fraction <= 1.0)) {
    throw std::invalid_argument("mini-batch fraction must lie in (0, 1]");
  }
  if (patience < 1) throw std::invalid_argument("patience must be >= 1");
  if (max_epochs < 1) throw std::invalid_argument("max epochs must be >= 1");
  if (init.kind == Initialization::Kind::kGaussian && !(init.parameter >= 0.0)) {
    throw std::invalid_argument("initialization stddev must be >= 0");
  }
  if (init.kind == Initialization::Kind::kConstant &&
      !std::isfinite(init.parameter)) {
    throw std::invalid_argument("initial value must be finite");
  }
  if (!(safeguard.growth >= 1.0)) {
    throw std::invalid_argument("penalty growth must be >= 1");
  }
  if (!(safeguard.sufficient_decrease > 0.0 &&
        safeguard.sufficient_decrease <= 1.0)) {
    throw std::invalid_argument("sufficient decrease must lie in (0, 1]");
  }
  if (!(safeguard.relief >= 1.0)) {
    throw std::invalid_argument("penalty relief must be >= 1");
  }
  estimator.validate();
}

std::size_t batch_size(std::size_t n, double minibatch_fraction) {
  const auto m = static_cast<std::size_t>(
      std::ceil(minibatch_fraction * static_cast<double>(n)));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(n, 1));
}

std::int64_t steps_per_epoch(std::size_t n, double minibatch_fraction) {
  const std::size_t m = batch_size(n, minibatch_fraction);
  return static_cast<std::int64_t>((n + m - 1) / m);
}

SolverState initial_state(const ConstrainedProblem& problem,
                          const SolverConfig& config) {
  config.validate();
  if (problem.dim == 0) throw std::invalid_argument("problem has no variables");
  SolverState state(config.seed);
  state.params.e.assign(problem.dim, 0.0);
  switch (config.init.kind) {
    case Initialization::Kind::kZero:
      break;
    case Initialization::Kind::kConstant:
      std::fill(state.params.e.begin(), state.params.e.end(),
                config.init.parameter);
      break;
    case Initialization::Kind::kGaussian:
      for (double& e : state.params.e) {
        e = config.init.parameter * state.rng.normal();
      }
      break;
  }
  state.tolerance = config.patience;
  return state;
}

double optimal_lambda(double b_value, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return std::max(0.0, b_value / (2.0 * delta));
}

double lagrangian(const ConstrainedProblem& problem,
                  std::span<const double> point, double beta) {
  if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
  const double overrun = std::max(0.0, problem.constraint_value(point));
  return problem.objective_value(point) - 0.5 * beta * overrun * overrun;
}

BetaBounds beta_bounds(std::span<const double> o_grad,
                       std::span<const double> b_grad, double b_value) {
  if (!(b_value > 0.0)) {
    throw std::invalid_argument("beta is only defined for b > 0");
  }
  const double bo = dot(b_grad, o_grad);
  const double bb = dot(b_grad, b_grad);
  if (bb == 0.0) throw DegenerateGradient("constraint gradient is zero");
  BetaBounds bounds;
  bounds.lower = bo / (b_value * bb);
  if (bo > 0.0) bounds.upper = dot(o_grad, o_grad) / (b_value * bo);
  return bounds;
}

double compute_beta(std::span<const double> o_grad,
                    std::span<const double> b_grad, double b_value,
                    double learning_rate) {
  const BetaBounds bounds = beta_bounds(o_grad, b_grad, b_value);
  if (bounds.lower < 0.0) return 0.0;
  if (bounds.upper && bounds.lower < *bounds.upper) {
    return 0.5 * bounds.lower + 0.5 * *bounds.upper;
  }
  return bounds.lower + 1.0 / (learning_rate * dot(b_grad, b_grad));
}

void step(const ConstrainedProblem& problem, SolverState& state,
          const SolverConfig& config) {
  ascend(problem, state, config, [](std::size_t, double) {});
}

std::vector<double> forward_point(const ConstrainedProblem& problem,
                                  const SolverState& state,
                                  const SolverConfig& config) {
  if (!problem.uses_estimator) return state.params.e;
  const double slope = forward_slope(config.estimator, state.params.epoch);
  const double threshold = config.estimator.round_threshold;
  std::vector<double> x(state.params.e.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = forward_bit(state.params.e[i], slope, threshold) ? 1.0 : 0.0;
  }
  return x;
}

Solution solve(const ConstrainedProblem& problem, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  SolverState state = initial_state(problem, config);
  const bool ste = problem.uses_estimator &&
                   config.estimator.kind == EstimatorKind::kStraightThrough;
  const std::int64_t per_epoch =
      steps_per_epoch(problem.dim, config.minibatch_fraction);
  const PenaltySafeguard& guard = config.safeguard;

  ForwardTracker forward(problem, config, state);
  state.last_constraint = forward.constraint();
  while (true) {
    bool improved = false;
    for (std::int64_t s = 0; s < per_epoch; ++s) {
      ascend(problem, state, config, [&](std::size_t i, double old_e) {
        forward.moved(state, i, old_e);
      });
      forward.finish_step(state);
      ++state.steps;
      const double objective = forward.objective();
      const double constraint = forward.constraint();
      if (constraint <= 0.0 &&
          (!state.has_feasible || objective > state.best_objective)) {
        state.has_feasible = true;
        state.best_objective = objective;
        forward.write_snapshot(state, state.best_point);
        improved = true;
      }
      const double previous = *state.last_constraint;
      if (constraint > 0.0) {
        if (previous > 0.0 && constraint >= guard.sufficient_decrease * previous) {
          state.penalty_scale *= guard.growth;
        }
      } else {
        state.penalty_scale = std::max(1.0, state.penalty_scale / guard.relief);
      }
      state.last_constraint = constraint;
    }
    // Values at the close of the epoch, then the next epoch's slope.
    forward.end_epoch(state,
                      problem.uses_estimator
                          ? forward_slope(config.estimator,
                                          state.params.epoch + 1)
                          : 1.0);
    state.last_constraint = forward.closing_constraint();
    state.tolerance = improved ? config.patience : state.tolerance - 1;

    if (config.record_trace) {
      TraceEntry entry;
      entry.epoch = state.params.epoch;
      entry.objective = forward.closing_objective();
      entry.constraint = forward.closing_constraint();
      entry.beta = state.beta;
      if (ste) entry.tau = anneal_tau(config.estimator, state.params.epoch);
      entry.feasible = entry.constraint <= 0.0;
      state.trace.push_back(entry);
    }
    if (!(*state.last_constraint > 0.0)) state.beta = 0.0;
    ++state.params.epoch;
    if (state.tolerance <= 0 || state.params.epoch >= config.max_epochs) break;
  }

  Solution solution;
  if (state.has_feasible) {
    solution.x = std::move(state.best_point);
    solution.objective = problem.objective_value(solution.x);
    solution.constraint = problem.constraint_value(solution.x);
    solution.feasible = solution.constraint <= 0.0;
  } else {
    solution.x = forward.point(state);
    solution.objective = forward.objective();
    solution.constraint = forward.constraint();
    solution.feasible = false;
  }
  solution.epochs_run = state.params.epoch;
  solution.steps_run = state.steps;
  solution.stall_events = state.stall_events;
  solution.trace = std::move(state.trace);
  solution.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return solution;
}

KnapsackSolution solve(const KnapsackInstance& instance,
                       const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Solution raw = solve(
      config.normalize ? normalized_kp_problem(instance) : kp_problem(instance),
      config);
  KnapsackSolution out;
  out.x.assign(instance.size(), 0);
  if (raw.feasible) {
    for (std::size_t i = 0; i < instance.size(); ++i) {
      out.x[i] = raw.x[i] != 0.0 ? 1 : 0;
    }
  }
  out.cost = instance.cost_of(out.x);
  if (out.cost > instance.budget()) {
    std::fill(out.x.begin(), out.x.end(), std::uint8_t{0});
    out.cost = 0.0;
  }
  out.objective = instance.objective_of(out.x);
  out.feasible = true;
  out.epochs_run = raw.epochs_run;
  out.steps_run = raw.steps_run;
  out.stall_events = raw.stall_events;
  out.trace = std::move(raw.trace);
  if (config.normalize) {
    // Report values in the instance's units; beta stays normalized.
    const ProblemScales scales = knapsack_scales(instance);
    for (TraceEntry& entry : out.trace) {
      entry.objective *= scales.objective;
      entry.constraint *= scales.constraint;
    }
  }
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

void write_trace(std::span<const TraceEntry> trace, std::ostream& out) {
  for (const TraceEntry& entry : trace) {
    nlohmann::ordered_json line;
    line["epoch"] = entry.epoch;
    line["objective"] = entry.objective;
    line["constraint"] = entry.constraint;
    line["beta"] = entry.beta;
    line["tau"] = entry.tau ? nlohmann::ordered_json(*entry.tau)
                            : nlohmann::ordered_json(nullptr);
    line["feasible"] = entry.feasible;
    out << line.dump() << '\n';
  }
}

}  // namespace kpgrad
