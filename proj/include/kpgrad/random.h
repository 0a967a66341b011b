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

#ifndef KPGRAD_RANDOM_H_
#define KPGRAD_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace kpgrad {

// Seedable random source whose output is identical on every platform.
//
// The engine is std::mt19937_64, whose raw output sequence is fixed by the
// C++ standard. The standard distributions are implementation-defined, so all
// derived draws (bounded integers, uniform reals, normals) are computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], by rejection sampling. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Uniform index in [0, n). Requires n > 0. Indices below 2^32 use one
  // 32-bit half of an engine output each.
  std::size_t index(std::size_t n) {
    if (n <= 0xffffffffu) {
      return static_cast<std::size_t>(bounded32(static_cast<std::uint32_t>(n)));
    }
    return static_cast<std::size_t>(bounded(n));
  }

  // Uniform real in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate (Box-Muller, one value per call).
  double normal();

 private:
  // Uniform in [0, range) for range > 0: Lemire's multiply-shift method,
  // which only divides on the rare draws that land in the biased low part.
  std::uint64_t bounded(std::uint64_t range) {
    using u128 = unsigned __int128;
    u128 product = static_cast<u128>(engine_()) * range;
    auto low = static_cast<std::uint64_t>(product);
    if (low < range) {
      // 2^64 mod range; products whose low half falls below it are rejected.
      const std::uint64_t threshold = (0 - range) % range;
      while (low < threshold) {
        product = static_cast<u128>(engine_()) * range;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // 32-bit variant of bounded() on 32-bit halves of engine outputs, low
  // half first.
  std::uint32_t bounded32(std::uint32_t range) {
    std::uint64_t product = std::uint64_t{next32()} * range;
    auto low = static_cast<std::uint32_t>(product);
    if (low < range) {
      const std::uint32_t threshold =
          static_cast<std::uint32_t>(0u - range) % range;
      while (low < threshold) {
        product = std::uint64_t{next32()} * range;
        low = static_cast<std::uint32_t>(product);
      }
    }
    return static_cast<std::uint32_t>(product >> 32);
  }

  std::uint32_t next32() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const std::uint64_t word = engine_();
    spare_ = static_cast<std::uint32_t>(word >> 32);
    has_spare_ = true;
    return static_cast<std::uint32_t>(word);
  }

  std::mt19937_64 engine_;
  std::uint32_t spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace kpgrad

#endif  // KPGRAD_RANDOM_H_
