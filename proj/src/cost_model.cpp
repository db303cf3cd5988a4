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

#include "fastmp/cost_model.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fastmp {

const char* to_string(CorrelationMode mode) noexcept {
  switch (mode) {
    case CorrelationMode::Conventional: return "conventional";
    case CorrelationMode::Fast: return "fast";
    case CorrelationMode::Adaptive: return "adaptive";
  }
  return "?";
}

CorrelationMode parse_mode(const std::string& name) {
  if (name == "conventional") return CorrelationMode::Conventional;
  if (name == "fast") return CorrelationMode::Fast;
  if (name == "adaptive") return CorrelationMode::Adaptive;
  throw std::invalid_argument("unknown correlation mode: " + name);
}

std::uint64_t conventional_iteration_flops(TransformKind kind, std::size_t n) {
  if (n == 0) throw std::invalid_argument("flops: n must be positive");
  const std::uint64_t nn = n;
  if (is_power_of_two(n)) {
    const std::uint64_t logn = log2_floor(n);
    // FFT: (N/2) log2 N complex muls + N log2 N complex adds = 5 N log2 N
    // FHT: N log2 N complex adds = 2 N log2 N
    return kind == TransformKind::Fourier ? 5 * nn * logn : 2 * nn * logn;
  }
  if (kind == TransformKind::Hadamard)
    throw std::invalid_argument("hadamard size must be a power of two");
  // dense fallback: N^2 complex muls + N(N-1) complex adds
  return 6 * nn * nn + 2 * nn * (nn - 1);
}

std::uint64_t fast_iteration_flops(TransformKind kind, std::size_t n,
                                   std::size_t t) {
  if (t == 0) throw std::invalid_argument("flops: t must be positive");
  if (t == 1) return conventional_iteration_flops(kind, n);
  const std::uint64_t atoms = t - 1;
  return (kind == TransformKind::Fourier ? 6 : 2) * std::uint64_t(n) * atoms;
}

std::size_t crossover_iteration(TransformKind kind, std::size_t n) {
  if (is_power_of_two(n)) {
    const std::size_t logn = log2_floor(n);
    // largest t with fast(t) <= conventional:
    //   Fourier : 6N(t-1) <= 5N log2 N  =>  t* = floor(5/6 log2 N) + 1
    //   Hadamard: 2N(t-1) <= 2N log2 N  =>  t* = log2 N + 1
    return kind == TransformKind::Fourier ? (5 * logn) / 6 + 1 : logn + 1;
  }
  const std::uint64_t conv = conventional_iteration_flops(kind, n);
  std::size_t t = 1;
  while (fast_iteration_flops(kind, n, t + 1) <= conv) ++t;
  return t;
}

std::uint64_t cosamp_fast_iteration_flops(TransformKind kind, std::size_t n,
                                          std::size_t k, std::size_t t) {
  if (t == 0) throw std::invalid_argument("flops: t must be positive");
  if (t == 1) return conventional_iteration_flops(kind, n);
  return (kind == TransformKind::Fourier ? 6 : 2) * std::uint64_t(n) *
         std::uint64_t(k);
}

double cosamp_relative_cost(std::size_t n, std::size_t k) {
  if (!is_power_of_two(n) || n < 2)
    throw std::invalid_argument("cosamp_relative_cost: n must be a power of two >= 2");
  return 6.0 * static_cast<double>(k) /
         (5.0 * static_cast<double>(log2_floor(n)));
}

bool adaptive_cosamp_uses_fast(TransformKind kind, std::size_t n,
                               std::size_t k) {
  if (k == 0) return true;
  return cosamp_fast_iteration_flops(kind, n, k, 2) <=
         conventional_iteration_flops(kind, n);
}

void CostReport::write_csv(std::ostream& os) const {
  os << "t,mode,analytic_flops,counted_flops,relative_vs_conventional\n";
  const double conv =
      static_cast<double>(conventional_iteration_flops(kind, n));
  char buf[64];
  for (const IterationCost& row : iterations) {
    std::snprintf(buf, sizeof(buf), "%.17g",
                  static_cast<double>(row.analytic_flops) / conv);
    os << row.t << ',' << to_string(row.mode_used) << ','
       << row.analytic_flops << ',' << row.counted.flops() << ',' << buf
       << '\n';
  }
  os << "# kernel_precompute_flops," << kernel_precompute_flops << '\n';
  os << "# least_squares_flops," << least_squares_flops << '\n';
  os << "# identification_flops," << identification_flops << '\n';
}

}  // namespace fastmp
