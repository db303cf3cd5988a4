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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace fastmp {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

enum class TransformKind { Fourier, Hadamard };

const char* to_string(TransformKind kind) noexcept;

// Accepts "fourier" or "hadamard"; throws std::invalid_argument otherwise.
TransformKind parse_kind(const std::string& name);

constexpr bool is_power_of_two(std::size_t n) noexcept {
  return n > 0 && (n & (n - 1)) == 0;
}

// floor(log2 n) for n >= 1; exact when n is a power of two
constexpr std::size_t log2_floor(std::size_t n) noexcept {
  std::size_t p = 0;
  while (n >>= 1) ++p;
  return p;
}

double l2_norm(const cvec& v) noexcept;
double l2_distance(const cvec& a, const cvec& b);

}  // namespace fastmp
