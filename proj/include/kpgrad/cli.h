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

// The `kpgrad` command line: generate | solve | verify | bench.
//
// Reports are single JSON documents with a fixed key order; traces are JSON
// lines. Exit codes are listed in ExitCode.

#ifndef KPGRAD_CLI_H_
#define KPGRAD_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace kpgrad::cli {

enum ExitCode : int {
  kOk = 0,
  kRuntimeError = 1,
  kUsageError = 2,
  kVerificationFailure = 3,
};

// Where an instance came from. Generator fields are empty for files.
struct InstanceDescriptor {
  std::optional<std::string> family;  // benchmark type name
  std::optional<std::pair<int, int>> spanner;  // (size, multiplier limit)
  std::size_t n = 0;
  std::optional<std::int64_t> range;
  std::optional<std::uint64_t> seed;
  std::optional<double> budget_fraction;
  double budget = 0.0;
  std::optional<std::string> path;
};

struct RunReport {
  InstanceDescriptor instance;
  std::string method;  // "gradient-ste", "gradient-pte", "dp", "greedy"
  double objective = 0.0;
  double cost = 0.0;
  bool feasible = false;
  double ratio_to_bound = 0.0;
  std::optional<double> ratio_to_optimum;
  std::int64_t epochs = 0;
  std::int64_t steps = 0;
  std::optional<double> wall_time_s;  // empty under --no-timing
};

nlohmann::ordered_json to_json(const InstanceDescriptor& descriptor);
nlohmann::ordered_json to_json(const RunReport& report);

// Runs the command line `args` (without the program name). Normal output
// goes to `out`, diagnostics to `err`. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace kpgrad::cli

#endif  // KPGRAD_CLI_H_
