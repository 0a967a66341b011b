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

#include "kpgrad/cli.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "kpgrad/instance.h"
#include "kpgrad/oracle.h"
#include "kpgrad/solver.h"

namespace kpgrad::cli {

namespace {

using Json = nlohmann::ordered_json;

// Largest dynamic-programming table built automatically to fill in
// ratio_to_optimum.
constexpr double kAutoExactCells = 5e7;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
Json optional_json(const std::optional<T>& value) {
  return value ? Json(*value) : Json(nullptr);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// --seed, else KP_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  const char* env = std::getenv("KP_SEED");
  if (env == nullptr || *env == '\0') return 0;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw UsageError("KP_SEED is not an unsigned 64-bit integer: " +
                     std::string(text));
  }
  return seed;
}

std::size_t resolve_jobs(std::size_t flag) {
  if (flag > 0) return flag;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs task(i) for i in [0, count) on `jobs` threads. Results are written by
// index, so the merge order never depends on scheduling. The first
// exception is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& task) {
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Shared flag groups.

struct GeneratorFlags {
  std::string family = "uncorrelated";
  std::string spanner;  // "v,m"; empty for none
  std::size_t n = 0;
  std::int64_t range = 1000;
  double budget_fraction = 0.5;
};

// `families` receives a repeatable --family list when given; otherwise
// --family names a single family.
void add_generator_flags(CLI::App* app, GeneratorFlags& flags, bool n_required,
                         std::vector<std::string>* families = nullptr) {
  if (families != nullptr) {
    app->add_option("--family", *families,
                    "Benchmark types, repeatable (default: all six)");
  } else {
    app->add_option("--family", flags.family,
                    "Benchmark family, optionally with a -span suffix")
        ->capture_default_str();
  }
  app->add_option("--spanner", flags.spanner,
                  "Spanner variant as SIZE,MULTIPLIER_LIMIT (e.g. 2,10)");
  auto* n = app->add_option("--n", flags.n, "Number of items")
                ->check(CLI::PositiveNumber);
  if (n_required) n->required();
  app->add_option("--R", flags.range, "Coefficient range R (>= 10)")
      ->capture_default_str();
  app->add_option("--budget-fraction", flags.budget_fraction,
                  "Budget as a fraction of the total cost, in (0, 1]")
      ->capture_default_str();
}

std::pair<int, int> parse_spanner(const std::string& text) {
  const auto comma = text.find(',');
  int size = 0;
  int limit = 0;
  bool ok = comma != std::string::npos;
  if (ok) {
    const char* begin = text.data();
    const char* mid = begin + comma;
    const char* end = begin + text.size();
    const auto a = std::from_chars(begin, mid, size);
    const auto b = std::from_chars(mid + 1, end, limit);
    ok = a.ec == std::errc() && a.ptr == mid && b.ec == std::errc() &&
         b.ptr == end && size >= 1 && limit >= 1;
  }
  if (!ok) throw UsageError("--spanner expects SIZE,LIMIT, got " + text);
  return {size, limit};
}

// Spec and descriptor for one generated instance.
struct Generated {
  GeneratorSpec spec;
  std::string name;
};

Generated make_generated(const std::string& type_name,
                         const GeneratorFlags& flags, std::uint64_t seed,
                         const std::string& spanner_text) {
  const std::optional<BenchmarkType> type = parse_benchmark_type(type_name);
  if (!type) throw UsageError("unknown family: " + type_name);
  Generated out;
  out.spec.family = type->family;
  out.spec.spanner = type->spanner;
  if (!spanner_text.empty()) {
    const auto [size, limit] = parse_spanner(spanner_text);
    out.spec.spanner = Spanner{size, limit};
  }
  out.spec.n = flags.n;
  out.spec.range = flags.range;
  out.spec.budget_fraction = flags.budget_fraction;
  out.spec.seed = seed;
  try {
    out.spec.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out.name = std::string(family_name(type->family));
  if (out.spec.spanner) out.name += "-span";
  return out;
}

InstanceDescriptor describe(const Generated& generated,
                            const KnapsackInstance& instance) {
  InstanceDescriptor d;
  d.family = generated.name;
  if (generated.spec.spanner) {
    d.spanner = std::make_pair(generated.spec.spanner->size,
                               generated.spec.spanner->multiplier_limit);
  }
  d.n = instance.size();
  d.range = generated.spec.range;
  d.seed = generated.spec.seed;
  d.budget_fraction = generated.spec.budget_fraction;
  d.budget = instance.budget();
  return d;
}

struct SolverFlags {
  std::string estimator = "ste";
  double gamma = 0.1;
  double xi = 0.1;
  std::int64_t patience = 100;
  std::int64_t max_epochs = 100000;
  std::string init = "zero";
  bool raw_scale = false;
};

void add_solver_flags(CLI::App* app, SolverFlags& flags) {
  app->add_option("--estimator", flags.estimator, "ste | pte")
      ->check(CLI::IsMember({"ste", "pte"}))
      ->capture_default_str();
  app->add_option("--gamma", flags.gamma, "Learning rate")
      ->capture_default_str();
  app->add_option("--xi", flags.xi, "Mini-batch fraction in (0, 1]")
      ->capture_default_str();
  app->add_option("--patience", flags.patience,
                  "Epochs without improvement before stopping")
      ->capture_default_str();
  app->add_option("--max-epochs", flags.max_epochs, "Epoch cap")
      ->capture_default_str();
  app->add_option("--init", flags.init,
                  "zero | constant:VALUE | gaussian:STDDEV")
      ->capture_default_str();
  app->add_flag("--raw-scale", flags.raw_scale,
                "Optimize the raw coefficients instead of the normalized ones");
}

Initialization parse_init(const std::string& text) {
  if (text == "zero") return Initialization::zero();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const std::string number = text.substr(colon + 1);
    double value = 0.0;
    const auto [end, ec] =
        std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec == std::errc() && end == number.data() + number.size()) {
      if (kind == "constant") return Initialization::constant(value);
      if (kind == "gaussian") return Initialization::gaussian(value);
    }
  }
  throw UsageError("--init expects zero, constant:VALUE or gaussian:STDDEV");
}

SolverConfig make_config(const SolverFlags& flags, std::uint64_t seed,
                         bool record_trace) {
  SolverConfig config;
  config.estimator.kind = *parse_estimator(flags.estimator);
  config.learning_rate = flags.gamma;
  config.minibatch_fraction = flags.xi;
  config.patience = flags.patience;
  config.max_epochs = flags.max_epochs;
  config.seed = seed;
  config.init = parse_init(flags.init);
  config.normalize = !flags.raw_scale;
  config.record_trace = record_trace;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return config;
}

std::string method_name(const SolverConfig& config) {
  return "gradient-" + std::string(estimator_name(config.estimator.kind));
}

std::optional<double> auto_optimum(const KnapsackInstance& instance) {
  if (!instance.has_integral_costs()) return std::nullopt;
  const double cells = static_cast<double>(instance.size()) *
                       (std::floor(instance.budget()) + 1.0);
  if (cells > kAutoExactCells) return std::nullopt;
  return dp_exact(instance).objective;
}

RunReport solver_report(const InstanceDescriptor& descriptor,
                        const KnapsackInstance& instance,
                        const KnapsackSolution& solution,
                        const SolverConfig& config,
                        std::optional<double> optimum, bool timing) {
  RunReport report;
  report.instance = descriptor;
  report.method = method_name(config);
  report.objective = solution.objective;
  report.cost = solution.cost;
  report.feasible = solution.feasible && solution.cost <= instance.budget();
  report.ratio_to_bound = solution.objective / dantzig_bound(instance);
  if (optimum) {
    report.ratio_to_optimum =
        *optimum > 0.0 ? solution.objective / *optimum : 1.0;
  }
  report.epochs = solution.epochs_run;
  report.steps = solution.steps_run;
  if (timing) report.wall_time_s = solution.wall_time_s;
  return report;
}

void write_json(const Json& document, std::ostream& out) {
  out << document.dump(2) << '\n';
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateCommand {
  GeneratorFlags generator;
  std::optional<std::uint64_t> seed;
  std::string out_path;

  void attach(CLI::App* app) {
    add_generator_flags(app, generator, /*n_required=*/true);
    app->add_option("--seed", seed, "Generator seed (default: $KP_SEED or 0)");
    app->add_option("--out", out_path, "Output CSV path")->required();
  }

  int run(std::ostream& out) const {
    const Generated g = make_generated(generator.family, generator,
                                       resolve_seed(seed), generator.spanner);
    const KnapsackInstance instance = generate(g.spec);
    write_instance(instance, out_path);
    Json doc;
    doc["instance"] = to_json(describe(g, instance));
    doc["total_cost"] = instance.total_cost();
    doc["path"] = out_path;
    write_json(doc, out);
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// solve

struct SolveCommand {
  std::string instance_path;
  GeneratorFlags generator;
  SolverFlags solver;
  std::optional<std::uint64_t> seed;
  std::string trace_path;
  bool no_timing = false;

  void attach(CLI::App* app) {
    app->add_option("--instance", instance_path, "Instance CSV path");
    add_generator_flags(app, generator, /*n_required=*/false);
    add_solver_flags(app, solver);
    app->add_option("--seed", seed,
                    "Generator and solver seed (default: $KP_SEED or 0)");
    app->add_option("--trace", trace_path, "Write a per-epoch JSON-lines trace");
    app->add_flag("--no-timing", no_timing,
                  "Report wall_time_s as null for byte-stable output");
  }

  int run(std::ostream& out) const {
    const std::uint64_t s = resolve_seed(seed);
    std::optional<KnapsackInstance> instance;
    InstanceDescriptor descriptor;
    if (!instance_path.empty()) {
      if (generator.n != 0) {
        throw UsageError("--instance and --n are mutually exclusive");
      }
      instance.emplace(read_instance(instance_path));
      descriptor.n = instance->size();
      descriptor.budget = instance->budget();
      descriptor.path = instance_path;
    } else {
      if (generator.n == 0) throw UsageError("either --instance or --n is required");
      const Generated g =
          make_generated(generator.family, generator, s, generator.spanner);
      instance.emplace(generate(g.spec));
      descriptor = describe(g, *instance);
    }
    const SolverConfig config =
        make_config(solver, s, /*record_trace=*/!trace_path.empty());
    const KnapsackSolution solution = solve(*instance, config);
    if (!trace_path.empty()) {
      std::ofstream trace = open_output(trace_path);
      write_trace(solution.trace, trace);
      if (!trace) throw std::runtime_error("failed writing " + trace_path);
    }
    write_json(to_json(solver_report(descriptor, *instance, solution, config,
                                     auto_optimum(*instance), !no_timing)),
               out);
    return kOk;
  }
};

// ---------------------------------------------------------------------------
// verify

struct VerifyCommand {
  GeneratorFlags generator;
  std::vector<std::string> families;
  SolverFlags solver;
  std::optional<std::uint64_t> seed;
  std::size_t count = 20;
  bool brute_force_check = false;
  std::size_t jobs = 0;
  bool no_timing = false;

  void attach(CLI::App* app) {
    generator.n = 100;
    add_generator_flags(app, generator, /*n_required=*/false, &families);
    add_solver_flags(app, solver);
    app->add_option("--seed", seed,
                    "Base seed; run j uses seed + j (default: $KP_SEED or 0)");
    app->add_option("--count", count, "Instances per family")
        ->check(CLI::Range(std::size_t{1},
                           std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    app->add_flag("--brute-force", brute_force_check,
                  "Cross-check the dynamic program by exhaustive search "
                  "(n <= 30)");
    app->add_option("--jobs", jobs, "Worker threads (default: all cores)");
    app->add_flag("--no-timing", no_timing,
                  "Report wall_time_s as null for byte-stable output");
  }

  struct Run {
    double solver_ratio = 0.0;
    double greedy_ratio = 0.0;
    bool feasible = false;
    bool mismatch = false;
    double wall_time_s = 0.0;
  };

  int run(std::ostream& out) const {
    if (brute_force_check && generator.n > 30) {
      throw UsageError("--brute-force needs --n <= 30");
    }
    const std::uint64_t base = resolve_seed(seed);
    std::vector<std::string> types = families;
    if (types.empty()) {
      for (const BenchmarkType& t : benchmark_types()) types.push_back(t.name);
    }
    // Validate names and flags up front.
    for (const std::string& t : types) {
      make_generated(t, generator, base, generator.spanner);
    }
    make_config(solver, base, false);

    std::vector<Run> runs(types.size() * count);
    parallel_for(runs.size(), resolve_jobs(jobs), [&](std::size_t k) {
      const std::size_t j = k % count;
      const Generated g = make_generated(types[k / count], generator,
                                         base + j, generator.spanner);
      const KnapsackInstance instance = generate(g.spec);
      const SolverConfig config = make_config(solver, base + j, false);
      const KnapsackSolution solution = solve(instance, config);
      const OracleResult exact = dp_exact(instance);
      const double optimum = exact.objective;
      Run& r = runs[k];
      r.feasible = solution.cost <= instance.budget();
      r.solver_ratio = optimum > 0.0 ? solution.objective / optimum : 1.0;
      r.greedy_ratio =
          optimum > 0.0 ? greedy(instance).objective / optimum : 1.0;
      r.wall_time_s = solution.wall_time_s;
      if (brute_force_check) {
        const OracleResult exhaustive = brute_force(instance, 30);
        r.mismatch = exhaustive.objective != exact.objective;
      }
    });

    Json doc;
    doc["n"] = generator.n;
    doc["count"] = count;
    doc["seed"] = base;
    doc["R"] = generator.range;
    doc["budget_fraction"] = generator.budget_fraction;
    doc["estimator"] = solver.estimator;
    Json blocks = Json::array();
    bool all_feasible = true;
    std::size_t mismatches_total = 0;
    for (std::size_t f = 0; f < types.size(); ++f) {
      double solver_sum = 0.0, greedy_sum = 0.0, time_sum = 0.0;
      double solver_min = std::numeric_limits<double>::infinity();
      double greedy_min = std::numeric_limits<double>::infinity();
      std::size_t feasible = 0, mismatches = 0;
      for (std::size_t j = 0; j < count; ++j) {
        const Run& r = runs[f * count + j];
        solver_sum += r.solver_ratio;
        greedy_sum += r.greedy_ratio;
        solver_min = std::min(solver_min, r.solver_ratio);
        greedy_min = std::min(greedy_min, r.greedy_ratio);
        feasible += r.feasible ? 1 : 0;
        mismatches += r.mismatch ? 1 : 0;
        time_sum += r.wall_time_s;
      }
      const double c = static_cast<double>(count);
      Json block;
      block["family"] = types[f];
      block["runs"] = count;
      block["feasible"] = feasible;
      block["solver_ratio"] = {{"mean", solver_sum / c}, {"min", solver_min}};
      block["greedy_ratio"] = {{"mean", greedy_sum / c}, {"min", greedy_min}};
      block["brute_force_mismatches"] =
          brute_force_check ? Json(mismatches) : Json(nullptr);
      block["wall_time_s"] = no_timing ? Json(nullptr) : Json(time_sum);
      blocks.push_back(block);
      all_feasible = all_feasible && feasible == count;
      mismatches_total += mismatches;
    }
    doc["families"] = blocks;
    doc["all_feasible"] = all_feasible;
    doc["passed"] = all_feasible && mismatches_total == 0;
    write_json(doc, out);
    return doc["passed"].get<bool>() ? kOk : kVerificationFailure;
  }
};

// ---------------------------------------------------------------------------
// bench

struct BenchCommand {
  GeneratorFlags generator;
  std::vector<std::string> families;
  SolverFlags solver;
  std::optional<std::uint64_t> seed;
  std::size_t repeat = 1;
  std::size_t jobs = 0;
  std::string json_path;
  bool no_timing = false;

  void attach(CLI::App* app) {
    generator.n = 1000000;
    add_generator_flags(app, generator, /*n_required=*/false, &families);
    add_solver_flags(app, solver);
    app->add_option("--seed", seed,
                    "Generator and solver seed (default: $KP_SEED or 0)");
    app->add_option("--repeat", repeat, "Runs per family")
        ->check(CLI::Range(std::size_t{1},
                           std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads (default: all cores)");
    app->add_option("--json", json_path,
                    "Also write the JSON document here ('-' replaces the "
                    "text table on stdout)");
    app->add_flag("--no-timing", no_timing,
                  "Report times as null for byte-stable output");
  }

  struct Row {
    RunReport solver;
    double greedy_objective = 0.0;
    double greedy_ratio = 0.0;
    double greedy_time_s = 0.0;
  };

  int run(std::ostream& out) const {
    const std::uint64_t s = resolve_seed(seed);
    std::vector<std::string> types = families;
    if (types.empty()) {
      for (const BenchmarkType& t : benchmark_types()) types.push_back(t.name);
    }
    for (const std::string& t : types) {
      make_generated(t, generator, s, generator.spanner);
    }
    const SolverConfig config = make_config(solver, s, false);

    std::vector<Row> rows(types.size() * repeat);
    parallel_for(rows.size(), resolve_jobs(jobs), [&](std::size_t k) {
      const Generated g =
          make_generated(types[k / repeat], generator, s, generator.spanner);
      const KnapsackInstance instance = generate(g.spec);
      const KnapsackSolution solution = solve(instance, config);
      Row& row = rows[k];
      row.solver = solver_report(describe(g, instance), instance, solution,
                                 config, std::nullopt, !no_timing);
      const auto start = std::chrono::steady_clock::now();
      const OracleResult g_result = greedy(instance);
      row.greedy_time_s = seconds_since(start);
      row.greedy_objective = g_result.objective;
      row.greedy_ratio = g_result.objective / dantzig_bound(instance);
    });

    Json doc;
    doc["n"] = generator.n;
    doc["seed"] = s;
    doc["repeat"] = repeat;
    Json items = Json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      Json item = to_json(rows[k].solver);
      item["repeat_index"] = k % repeat;
      item["greedy"] = {
          {"objective", rows[k].greedy_objective},
          {"ratio_to_bound", rows[k].greedy_ratio},
          {"wall_time_s",
           no_timing ? Json(nullptr) : Json(rows[k].greedy_time_s)}};
      items.push_back(item);
    }
    doc["runs"] = items;

    if (json_path == "-") {
      write_json(doc, out);
      return kOk;
    }
    if (!json_path.empty()) {
      std::ofstream file = open_output(json_path);
      write_json(doc, file);
    }
    write_table(rows, out);
    return kOk;
  }

  void write_table(const std::vector<Row>& rows, std::ostream& out) const {
    char line[256];
    std::snprintf(line, sizeof(line), "%-30s %9s %4s %10s %16s %8s %16s %8s\n",
                  "Type", "n", "Run", "Time (s)", "Objective", "Ratio",
                  "Greedy", "Ratio");
    out << line;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const Row& row = rows[k];
      const RunReport& r = row.solver;
      const std::string time =
          r.wall_time_s ? [&] {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", *r.wall_time_s);
            return std::string(buf);
          }()
                        : std::string("-");
      std::snprintf(line, sizeof(line),
                    "%-30s %9zu %4zu %10s %16s %8.4f %16s %8.4f\n",
                    r.instance.family.value_or("").c_str(), r.instance.n,
                    k % repeat + 1, time.c_str(),
                    format_number(r.objective).c_str(), r.ratio_to_bound,
                    format_number(row.greedy_objective).c_str(),
                    row.greedy_ratio);
      out << line;
    }
  }
};

}  // namespace

nlohmann::ordered_json to_json(const InstanceDescriptor& d) {
  Json j;
  j["family"] = optional_json(d.family);
  j["spanner"] = d.spanner ? Json::array({d.spanner->first, d.spanner->second})
                           : Json(nullptr);
  j["n"] = d.n;
  j["R"] = optional_json(d.range);
  j["seed"] = optional_json(d.seed);
  j["budget_fraction"] = optional_json(d.budget_fraction);
  j["budget"] = d.budget;
  j["path"] = optional_json(d.path);
  return j;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  Json j;
  j["instance"] = to_json(r.instance);
  j["method"] = r.method;
  j["objective"] = r.objective;
  j["cost"] = r.cost;
  j["feasible"] = r.feasible;
  j["ratio_to_bound"] = r.ratio_to_bound;
  j["ratio_to_optimum"] = optional_json(r.ratio_to_optimum);
  j["epochs"] = r.epochs;
  j["steps"] = r.steps;
  j["wall_time_s"] = optional_json(r.wall_time_s);
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Large-scale 0-1 knapsack by adaptive gradient ascent",
               "kpgrad"};
  app.require_subcommand(1);
  GenerateCommand generate_cmd;
  SolveCommand solve_cmd;
  VerifyCommand verify_cmd;
  BenchCommand bench_cmd;
  CLI::App* generate_app =
      app.add_subcommand("generate", "Write a benchmark instance as CSV");
  CLI::App* solve_app = app.add_subcommand("solve", "Solve one instance");
  CLI::App* verify_app =
      app.add_subcommand("verify", "Compare against exact oracles");
  CLI::App* bench_app =
      app.add_subcommand("bench", "Time the solver on benchmark families");
  generate_cmd.attach(generate_app);
  solve_cmd.attach(solve_app);
  verify_cmd.attach(verify_app);
  bench_cmd.attach(bench_app);

  std::vector<const char*> argv;
  argv.push_back("kpgrad");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*generate_app) return generate_cmd.run(out);
    if (*solve_app) return solve_cmd.run(out);
    if (*verify_app) return verify_cmd.run(out);
    return bench_cmd.run(out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace kpgrad::cli
