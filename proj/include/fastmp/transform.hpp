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

#include <optional>

#include "fastmp/cost_model.hpp"
#include "fastmp/types.hpp"

namespace fastmp {

// An N x N unitary matrix U whose entries all have magnitude 1/sqrt(N), whose
// first column is constant, and whose scaled columns {sqrt(N) u_n} are closed
// under element-wise multiplication.  Two families qualify:
//
//   Fourier : U[m][n] = exp(-2*pi*i*(m-1)(n-1)/N) / sqrt(N)
//   Hadamard: the Sylvester-ordered +-1 matrix scaled by 1/sqrt(N)
//             (N must be a power of two)
//
// Instances are immutable after construction and safe to share across
// threads.  All public row/column indices are 1-based; vectors are plain
// 0-based arrays.
class StructuredUnitary {
 public:
  StructuredUnitary(TransformKind kind, std::size_t n);

  TransformKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }

  // true when the O(N log N) butterfly path applies (power-of-two N);
  // otherwise Fourier transforms run through a dense O(N^2) fallback
  bool fast_path() const noexcept { return pow2_; }

  cvec forward(const cvec& v, FlopCounter* fc = nullptr) const;  // U v
  cvec adjoint(const cvec& v, FlopCounter* fc = nullptr) const;  // U^H v

  cplx entry(std::size_t row, std::size_t col) const;
  cvec column(std::size_t col) const;

  // Index k with sqrt(N) u_i .* sqrt(N) u_j = sqrt(N) u_k:
  //   Fourier : ((i-1) + (j-1)) mod N, plus 1
  //   Hadamard: ((i-1) XOR (j-1)), plus 1
  std::size_t product_index(std::size_t i, std::size_t j) const;

  // row-major N x N materialization (meant for small N)
  cvec dense() const;

 private:
  void fft_pow2(cvec& v, bool conjugate, FlopCounter* fc) const;
  void fht(cvec& v, FlopCounter* fc) const;
  cvec dense_fourier_apply(const cvec& v, bool conjugate, FlopCounter* fc) const;

  TransformKind kind_;
  std::size_t n_;
  bool pow2_;
  double inv_sqrt_n_;
  cvec twiddle_;  // Fourier roots exp(-2*pi*i*k/N); N/2 entries (pow2) or N (dense)
};

// Structural checks over an explicit dense matrix, so that a corrupted matrix
// can be diagnosed.  nullopt means the check passed.
struct CheckFailure {
  std::string check;     // short name of the failed check
  std::size_t row = 0;   // 1-based location of the offending entry, when known
  std::size_t col = 0;
  double error = 0.0;    // magnitude of the violation
};

// every |entry| equals 1/sqrt(N) within 1e-12
std::optional<CheckFailure> check_unit_modulus(const cvec& dense, std::size_t n);
// column 1 equals (1/sqrt(N), ..., 1/sqrt(N)) within 1e-12
std::optional<CheckFailure> check_constant_first_column(const cvec& dense,
                                                        std::size_t n);
// scaled columns closed under element-wise products within 1e-10 (exhaustive)
std::optional<CheckFailure> check_multiplicative_closure(const cvec& dense,
                                                         std::size_t n);
// U^H U = I within 1e-10
std::optional<CheckFailure> check_unitary_gram(const cvec& dense, std::size_t n);

}  // namespace fastmp
