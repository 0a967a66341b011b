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

// 0-1 knapsack instances: validation, benchmark-family generation and the
// CSV file format.

#ifndef KPGRAD_INSTANCE_H_
#define KPGRAD_INSTANCE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kpgrad {

enum class ValidationErrorKind {
  kNoItems,
  kLengthMismatch,
  kNonPositiveEntry,
  kNonPositiveBudget,
};

class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ValidationErrorKind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  ValidationErrorKind kind() const { return kind_; }

 private:
  ValidationErrorKind kind_;
};

// Malformed or invalid instance file. line() is 1-based; 0 when the problem
// is not tied to a particular line (e.g. a truncated file).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Immutable 0-1 knapsack instance: maximize sum v_i x_i subject to
// sum c_i x_i <= budget, x_i in {0, 1}.
class KnapsackInstance {
 public:
  // Throws ValidationError on empty input, length mismatch, a non-positive
  // (or non-finite) value or cost, or a non-positive budget.
  KnapsackInstance(std::vector<double> values, std::vector<double> costs,
                   double budget);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<const double> costs() const { return costs_; }
  double value(std::size_t i) const { return values_[i]; }
  double cost(std::size_t i) const { return costs_[i]; }
  double budget() const { return budget_; }

  double total_value() const;
  double total_cost() const;
  bool has_integral_costs() const;

  // Objective and cost of a selection. `x` must have size() entries.
  double objective_of(std::span<const std::uint8_t> x) const;
  double cost_of(std::span<const std::uint8_t> x) const;

  friend bool operator==(const KnapsackInstance&,
                         const KnapsackInstance&) = default;

 private:
  std::vector<double> values_;
  std::vector<double> costs_;
  double budget_;
};

enum class Family {
  kUncorrelated,
  kWeaklyCorrelated,
  kStronglyCorrelated,
  kInverseStronglyCorrelated,
};

// Items are multiples of a small base set: `size` base pairs, multipliers
// drawn from [1, multiplier_limit].
struct Spanner {
  int size = 2;
  int multiplier_limit = 10;
  friend bool operator==(const Spanner&, const Spanner&) = default;
};

struct GeneratorSpec {
  Family family = Family::kUncorrelated;
  std::optional<Spanner> spanner;
  std::size_t n = 0;
  std::int64_t range = 1000;
  double budget_fraction = 0.5;
  std::uint64_t seed = 0;

  // Throws std::invalid_argument.
  void validate() const;
};

// Deterministic benchmark instance. Coefficients are integers stored as
// doubles; budget = ceil(budget_fraction * sum of costs).
KnapsackInstance generate(const GeneratorSpec& spec);

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);

// A named benchmark type: a family, optionally in its span(2,10) variant.
struct BenchmarkType {
  std::string name;
  Family family;
  std::optional<Spanner> spanner;
};

// The six benchmark types, in report order.
const std::vector<BenchmarkType>& benchmark_types();

// Accepts the benchmark type names ("uncorrelated-span", ...) as well as any
// plain family name with an optional "-span" suffix.
std::optional<BenchmarkType> parse_benchmark_type(std::string_view name);

// CSV instance file: header `n,<n>,budget,<B>`, then one `<index>,<value>,
// <cost>` line per item with a 1-based index.
KnapsackInstance read_instance(std::istream& in);
KnapsackInstance read_instance(const std::filesystem::path& path);
void write_instance(const KnapsackInstance& instance, std::ostream& out);
void write_instance(const KnapsackInstance& instance,
                    const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

}  // namespace kpgrad

#endif  // KPGRAD_INSTANCE_H_
