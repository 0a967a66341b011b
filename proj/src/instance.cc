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

#include "kpgrad/instance.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <utility>

#include "kpgrad/random.h"

namespace kpgrad {

namespace {

bool is_positive(double x) { return std::isfinite(x) && x > 0.0; }

// One (value, cost) draw from a family with coefficient range [1, range].
std::pair<double, double> draw_pair(Family family, std::int64_t range,
                                    Rng& rng) {
  const std::int64_t band = range / 10;
  switch (family) {
    case Family::kUncorrelated: {
      const std::int64_t c = rng.uniform_int(1, range);
      const std::int64_t v = rng.uniform_int(1, range);
      return {static_cast<double>(v), static_cast<double>(c)};
    }
    case Family::kWeaklyCorrelated: {
      const std::int64_t c = rng.uniform_int(1, range);
      const std::int64_t v =
          rng.uniform_int(std::max<std::int64_t>(1, c - band), c + band);
      return {static_cast<double>(v), static_cast<double>(c)};
    }
    case Family::kStronglyCorrelated: {
      const std::int64_t c = rng.uniform_int(1, range);
      return {static_cast<double>(c + band), static_cast<double>(c)};
    }
    case Family::kInverseStronglyCorrelated: {
      const std::int64_t v = rng.uniform_int(1, range);
      return {static_cast<double>(v), static_cast<double>(v + band)};
    }
  }
  throw std::logic_error("unknown family");
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) {
    s.remove_suffix(1);
  }
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_real(std::string_view text, std::size_t line,
                  std::string_view what) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "invalid " + std::string(what) + " '" +
                               std::string(text) + "'");
  }
  return out;
}

std::size_t parse_count(std::string_view text, std::size_t line,
                        std::string_view what) {
  std::size_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, "invalid " + std::string(what) + " '" +
                               std::string(text) + "'");
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line == 0 ? what
                                   : "line " + std::to_string(line) + ": " +
                                         what),
      line_(line) {}

KnapsackInstance::KnapsackInstance(std::vector<double> values,
                                   std::vector<double> costs, double budget)
    : values_(std::move(values)), costs_(std::move(costs)), budget_(budget) {
  if (values_.size() != costs_.size()) {
    throw ValidationError(ValidationErrorKind::kLengthMismatch,
                          "values and costs differ in length (" +
                              std::to_string(values_.size()) + " vs " +
                              std::to_string(costs_.size()) + ")");
  }
  if (values_.empty()) {
    throw ValidationError(ValidationErrorKind::kNoItems, "no items");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!is_positive(values_[i]) || !is_positive(costs_[i])) {
      throw ValidationError(ValidationErrorKind::kNonPositiveEntry,
                            "item " + std::to_string(i + 1) +
                                " has a non-positive value or cost");
    }
  }
  if (!is_positive(budget_)) {
    throw ValidationError(ValidationErrorKind::kNonPositiveBudget,
                          "budget must be positive");
  }
}

double KnapsackInstance::total_value() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

double KnapsackInstance::total_cost() const {
  return std::accumulate(costs_.begin(), costs_.end(), 0.0);
}

bool KnapsackInstance::has_integral_costs() const {
  return std::all_of(costs_.begin(), costs_.end(),
                     [](double c) { return std::floor(c) == c; });
}

double KnapsackInstance::objective_of(std::span<const std::uint8_t> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (x[i]) total += values_[i];
  }
  return total;
}

double KnapsackInstance::cost_of(std::span<const std::uint8_t> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (x[i]) total += costs_[i];
  }
  return total;
}

void GeneratorSpec::validate() const {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (range < 10) throw std::invalid_argument("range must be at least 10");
  if (!(budget_fraction > 0.0 && budget_fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must lie in (0, 1]");
  }
  if (spanner && (spanner->size < 1 || spanner->multiplier_limit < 1)) {
    throw std::invalid_argument("spanner parameters must be at least 1");
  }
}

KnapsackInstance generate(const GeneratorSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::vector<double> values(spec.n);
  std::vector<double> costs(spec.n);
  if (spec.spanner) {
    const auto divisor = static_cast<double>(spec.spanner->multiplier_limit + 1);
    std::vector<std::pair<double, double>> base(spec.spanner->size);
    for (auto& [v, c] : base) {
      const auto [raw_v, raw_c] = draw_pair(spec.family, spec.range, rng);
      v = std::max(1.0, std::floor(raw_v / divisor));
      c = std::max(1.0, std::floor(raw_c / divisor));
    }
    for (std::size_t i = 0; i < spec.n; ++i) {
      const auto k = static_cast<std::size_t>(
          rng.uniform_int(1, spec.spanner->size) - 1);
      const auto a = static_cast<double>(
          rng.uniform_int(1, spec.spanner->multiplier_limit));
      values[i] = a * base[k].first;
      costs[i] = a * base[k].second;
    }
  } else {
    for (std::size_t i = 0; i < spec.n; ++i) {
      std::tie(values[i], costs[i]) = draw_pair(spec.family, spec.range, rng);
    }
  }
  const double total_cost = std::accumulate(costs.begin(), costs.end(), 0.0);
  const double budget = std::ceil(spec.budget_fraction * total_cost);
  return KnapsackInstance(std::move(values), std::move(costs), budget);
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::kUncorrelated:
      return "uncorrelated";
    case Family::kWeaklyCorrelated:
      return "weakly-correlated";
    case Family::kStronglyCorrelated:
      return "strongly-correlated";
    case Family::kInverseStronglyCorrelated:
      return "inverse-strongly-correlated";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f :
       {Family::kUncorrelated, Family::kWeaklyCorrelated,
        Family::kStronglyCorrelated, Family::kInverseStronglyCorrelated}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

const std::vector<BenchmarkType>& benchmark_types() {
  static const std::vector<BenchmarkType> kTypes = {
      {"uncorrelated-span", Family::kUncorrelated, Spanner{2, 10}},
      {"weakly-correlated-span", Family::kWeaklyCorrelated, Spanner{2, 10}},
      {"strongly-correlated-span", Family::kStronglyCorrelated, Spanner{2, 10}},
      {"strongly-correlated", Family::kStronglyCorrelated, std::nullopt},
      {"inverse-strongly-correlated", Family::kInverseStronglyCorrelated,
       std::nullopt},
      {"uncorrelated", Family::kUncorrelated, std::nullopt},
  };
  return kTypes;
}

std::optional<BenchmarkType> parse_benchmark_type(std::string_view name) {
  constexpr std::string_view kSpanSuffix = "-span";
  std::optional<Spanner> spanner;
  std::string_view base = name;
  if (base.size() > kSpanSuffix.size() && base.ends_with(kSpanSuffix)) {
    base.remove_suffix(kSpanSuffix.size());
    spanner = Spanner{2, 10};
  }
  const auto family = parse_family(base);
  if (!family) return std::nullopt;
  return BenchmarkType{std::string(name), *family, spanner};
}

KnapsackInstance read_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line()) throw ParseError(0, "empty instance file");
  const auto header = split_fields(trim(line));
  if (header.size() != 4 || header[0] != "n" || header[2] != "budget") {
    throw ParseError(line_no, "expected header 'n,<n>,budget,<B>'");
  }
  const std::size_t n = parse_count(header[1], line_no, "item count");
  const double budget = parse_real(header[3], line_no, "budget");
  if (!is_positive(budget)) {
    throw ParseError(line_no, "budget must be positive");
  }
  if (n == 0) throw ParseError(line_no, "no items");

  std::vector<double> values;
  std::vector<double> costs;
  values.reserve(n);
  costs.reserve(n);
  while (values.size() < n && next_line()) {
    const auto fields = split_fields(trim(line));
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected '<index>,<value>,<cost>'");
    }
    const std::size_t index = parse_count(fields[0], line_no, "index");
    if (index != values.size() + 1) {
      throw ParseError(line_no, "expected index " +
                                    std::to_string(values.size() + 1));
    }
    const double value = parse_real(fields[1], line_no, "value");
    const double cost = parse_real(fields[2], line_no, "cost");
    if (!is_positive(value)) throw ParseError(line_no, "value must be positive");
    if (!is_positive(cost)) throw ParseError(line_no, "cost must be positive");
    values.push_back(value);
    costs.push_back(cost);
  }
  if (values.empty()) throw ParseError(0, "no items");
  if (values.size() < n) {
    throw ParseError(0, "expected " + std::to_string(n) + " items, found " +
                            std::to_string(values.size()));
  }
  if (next_line()) throw ParseError(line_no, "unexpected trailing data");
  return KnapsackInstance(std::move(values), std::move(costs), budget);
}

KnapsackInstance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file " + path.string());
  }
  return read_instance(in);
}

void write_instance(const KnapsackInstance& instance, std::ostream& out) {
  std::ostringstream text;
  text << "n," << instance.size() << ",budget,"
       << format_number(instance.budget()) << '\n';
  for (std::size_t i = 0; i < instance.size(); ++i) {
    text << (i + 1) << ',' << format_number(instance.value(i)) << ','
         << format_number(instance.cost(i)) << '\n';
  }
  out << text.str();
}

void write_instance(const KnapsackInstance& instance,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write instance file " + path.string());
  }
  write_instance(instance, out);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string format_number(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, ptr);
}

}  // namespace kpgrad
