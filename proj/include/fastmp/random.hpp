/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <random>

#include "fastmp/types.hpp"

namespace fastmp {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Deterministic per-trial seed: hash of (base, index).  Campaigns derive one
// seed per trial so trials can run concurrently and still reproduce.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

// mt19937_64 engine with hand-rolled distributions.  The standard
// distributions are implementation-defined, which would break seed-for-seed
// reproducibility of generated instances across library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // uniform in [0, 1), 53-bit resolution
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // uniform in [0, bound); rejection sampling, exactly unbiased
  std::size_t next_below(std::size_t bound);

  // circularly symmetric complex Gaussian with E|z|^2 = 1
  cplx next_complex_gaussian();

  // m distinct values from 1..n, sorted ascending
  std::vector<std::size_t> sample_one_based(std::size_t n, std::size_t m);

 private:
  std::mt19937_64 engine_;
};

}  // namespace fastmp
