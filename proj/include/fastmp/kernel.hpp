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

#include "fastmp/sensing.hpp"

namespace fastmp {

// c = U^H S^T S U e_1, the correlation signature of the row selection.  One
// forward plus one adjoint transform to build; reused for every kernel
// update afterwards.
//
// Structure enforced at construction:
//   Fourier : c is exactly conjugate-symmetric (it is U^H of a real vector),
//             so c(1) and, for even N, c(N/2+1) are real
//   Hadamard: N*c(j) is an integer with the same parity as M; entries are
//             snapped onto that lattice (exact, N being a power of two) and
//             the few distinct values are tabulated for the update sweep
struct CorrelationKernel {
  TransformKind kind = TransformKind::Fourier;
  std::size_t n = 0;
  std::size_t m = 0;
  cvec c;

  // Hadamard only: c[i] == values[value_index[i]]
  std::vector<double> values;
  std::vector<std::uint32_t> value_index;
};

CorrelationKernel compute_kernel(const SensingOperator& op,
                                 FlopCounter* fc = nullptr);

// c(1) = M/N, Fourier conjugate symmetry, Hadamard integer lattice/parity
std::optional<CheckFailure> check_kernel_invariants(const CorrelationKernel& k);

// The conjugation U^H D_lambda U with D_lambda = sqrt(N) diag(u_lambda) is a
// permutation.  Closed forms, 1-based:
//   Fourier : (P v)(i) = v(((i-1) - (lambda-1)) mod N, plus 1)   cyclic shift
//   Hadamard: (P v)(i) = v(((i-1) XOR (lambda-1)), plus 1)       involution
struct PermutationAction {
  TransformKind kind = TransformKind::Fourier;
  std::size_t n = 0;
  std::size_t lambda = 1;

  // source index sigma(i) with (P v)(i) = v(sigma(i)); both 1-based
  std::size_t map_index(std::size_t i) const;
};

cvec permute(const PermutationAction& action, const cvec& v);

// Dense verification that U^H D_lambda U is a permutation matrix: every
// entry within 1e-10 of {0, 1}, exactly one 1 per row and per column.
struct TheoremCheck {
  bool ok = false;
  std::vector<std::size_t> permutation;  // sigma as above, 1-based, row order
  std::size_t bad_row = 0;               // 1-based, set when !ok
  std::size_t bad_col = 0;
  double bad_error = 0.0;
  std::string detail;
};

TheoremCheck verify_permutation_property(const cvec& dense_u, std::size_t n,
                                         std::size_t lambda);
TheoremCheck verify_permutation_property(const StructuredUnitary& u,
                                         std::size_t lambda);

// Hadamard lambda decomposes into single-bit generators: the permutation for
// lambda is the composition of the permutations for (1 << b) + 1 over the set
// bits b of lambda-1.  Returns those bit positions, ascending.
std::vector<std::size_t> hadamard_generator_decomposition(std::size_t lambda,
                                                          std::size_t n);

struct FastUpdateOptions {
  // Fourier: halve the coefficient-kernel multiplications by sharing real
  // products between conjugate entry pairs.  Off by default; results match
  // the plain path to machine precision either way.
  bool fourier_symmetry = false;
};

// h = h0 - sum_tau coeffs[tau] * P_{support[tau]} c, the correlation vector
// of the residual y - Phi_support coeffs, rebuilt from h0 = Phi^H y without
// touching a transform.  Support indices are 1-based and must be distinct.
cvec fast_update(const cvec& h0, const CorrelationKernel& kernel,
                 const std::vector<std::size_t>& support, const cvec& coeffs,
                 const FastUpdateOptions& opts = {},
                 FlopCounter* fc = nullptr);

}  // namespace fastmp
