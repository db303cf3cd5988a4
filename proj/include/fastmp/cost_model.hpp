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

#include <iosfwd>

#include "fastmp/types.hpp"

namespace fastmp {

// Flop convention used throughout: one complex multiplication costs 6 flops
// (4 real multiplies + 2 real adds), one complex addition costs 2.
inline constexpr std::uint64_t kComplexMulFlops = 6;
inline constexpr std::uint64_t kComplexAddFlops = 2;

// Tallies of arithmetic actually executed.  Counters are always owned by the
// caller (per solve, never global), so concurrent solves do not interfere.
struct FlopCounter {
  std::uint64_t complex_mul = 0;
  std::uint64_t complex_add = 0;
  std::uint64_t real_mul = 0;
  std::uint64_t real_add = 0;

  std::uint64_t flops() const noexcept {
    return kComplexMulFlops * complex_mul + kComplexAddFlops * complex_add +
           real_mul + real_add;
  }
  void reset() noexcept { *this = FlopCounter{}; }

  FlopCounter& operator+=(const FlopCounter& o) noexcept {
    complex_mul += o.complex_mul;
    complex_add += o.complex_add;
    real_mul += o.real_mul;
    real_add += o.real_add;
    return *this;
  }
  friend FlopCounter operator-(FlopCounter a, const FlopCounter& b) noexcept {
    a.complex_mul -= b.complex_mul;
    a.complex_add -= b.complex_add;
    a.real_mul -= b.real_mul;
    a.real_add -= b.real_add;
    return a;
  }
};

enum class CorrelationMode { Conventional, Fast, Adaptive };

const char* to_string(CorrelationMode mode) noexcept;
CorrelationMode parse_mode(const std::string& name);

// Analytic per-iteration cost of the transform-based correlation:
// 5*N*log2(N) flops for the radix-2 FFT, 2*N*log2(N) for the FHT.
// Non-power-of-two Fourier sizes use the dense path and are costed as such.
std::uint64_t conventional_iteration_flops(TransformKind kind, std::size_t n);

// Analytic cost of the kernel-update correlation at iteration t: one atom per
// previously selected index, so 6*N*(t-1) flops (Fourier) or 2*N*(t-1)
// (Hadamard).  t = 1 is the initial transform and costs the conventional
// amount in every mode.
std::uint64_t fast_iteration_flops(TransformKind kind, std::size_t n,
                                   std::size_t t);

// Largest iteration for which the kernel update is no more expensive than one
// transform.  Fourier: floor(5/6 * log2 N) + 1.  Hadamard: log2 N + 1.
std::size_t crossover_iteration(TransformKind kind, std::size_t n);

// Kernel-update cost for a sparse estimate with k nonzeros (the pruned
// estimate keeps exactly k atoms, so the update cost is t-independent).
std::uint64_t cosamp_fast_iteration_flops(TransformKind kind, std::size_t n,
                                          std::size_t k, std::size_t t);

// Steady-state update/transform flop ratio 6k / (5 log2 n) for the Fourier
// kind, valid for iterations after the first.
double cosamp_relative_cost(std::size_t n, std::size_t k);

// Whether the t-independent kernel update beats one transform for this n, k.
bool adaptive_cosamp_uses_fast(TransformKind kind, std::size_t n,
                               std::size_t k);

struct IterationCost {
  std::size_t t = 0;
  CorrelationMode mode_used = CorrelationMode::Conventional;
  std::uint64_t analytic_flops = 0;
  FlopCounter counted;
  bool dense_fallback = false;
};

// Correlation-step costs of one solve.  Least-squares, identification and
// kernel set-up work is tallied separately and never mixed into the
// per-iteration rows, which compare like with like against the analytic
// model.
struct CostReport {
  TransformKind kind = TransformKind::Fourier;
  std::size_t n = 0;
  std::vector<IterationCost> iterations;
  std::uint64_t kernel_precompute_flops = 0;  // one-time, fast mode only
  std::uint64_t least_squares_flops = 0;      // includes residual updates
  std::uint64_t identification_flops = 0;     // magnitude scans

  // Rows "t,mode,analytic_flops,counted_flops,relative_vs_conventional"
  // followed by '#'-prefixed one-time totals.
  void write_csv(std::ostream& os) const;
};

}  // namespace fastmp
