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

#include "fastmp/transform.hpp"

namespace fastmp {

// M distinct row indices out of 1..N, kept sorted ascending.
struct RowSelection {
  std::size_t n = 0;
  std::vector<std::size_t> omega;

  std::size_t m() const noexcept { return omega.size(); }
};

// uniform without replacement, reproducible from the seed
RowSelection make_row_selection(std::size_t n, std::size_t m,
                                std::uint64_t seed);
// explicit row set (e.g. externally constructed); validated and sorted
RowSelection make_row_selection(std::size_t n, std::vector<std::size_t> rows);

// Phi = S_Omega U: keep the rows Omega of a structured unitary.  M x N with
// M <= N.  Immutable and shareable once built.
class SensingOperator {
 public:
  SensingOperator(StructuredUnitary unitary, RowSelection selection);

  const StructuredUnitary& unitary() const noexcept { return unitary_; }
  const RowSelection& selection() const noexcept { return selection_; }
  std::size_t n() const noexcept { return unitary_.size(); }
  std::size_t m() const noexcept { return selection_.omega.size(); }

  cvec apply(const cvec& x, FlopCounter* fc = nullptr) const;          // Phi x
  cvec apply_adjoint(const cvec& r, FlopCounter* fc = nullptr) const;  // Phi^H r

  // column j of Phi (M entries), evaluated in closed form
  cvec column(std::size_t j) const;

 private:
  StructuredUnitary unitary_;
  RowSelection selection_;
};

// A synthetic recovery problem y = Phi x + noise with K-sparse x.  The
// support is uniform without replacement, nonzeros are i.i.d. circular
// complex Gaussian with unit variance, and the noise is circular complex
// Gaussian with the requested per-component standard deviation.  Everything
// is reproducible from the seed.
struct ProblemInstance {
  TransformKind kind = TransformKind::Fourier;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> omega;  // 1-based, sorted
  cvec x_true;                     // length N
  cvec y;                          // length M
  cvec noise;                      // length M
};

ProblemInstance make_instance(const SensingOperator& op, std::size_t k,
                              double noise_stddev, std::uint64_t seed);

SensingOperator make_operator(const ProblemInstance& inst);

// Text format, lossless (17 significant digits):
//   line 1: N M K seed kind
//   line 2: Omega (M integers, 1-based)
//   line 3: x_true as N "re im" pairs
//   line 4: y as M "re im" pairs
void save_instance(const ProblemInstance& inst, std::ostream& os);
ProblemInstance load_instance(std::istream& is);

}  // namespace fastmp
