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
#include <stdexcept>

#include "fastmp/kernel.hpp"

namespace fastmp {

enum class LeastSquaresMethod { IncrementalQR, NormalEquations };

struct SolveConfig {
  std::size_t max_iterations = 1;
  double residual_tolerance = 0.0;  // absolute; halt when ||r|| <= this
  CorrelationMode correlation_mode = CorrelationMode::Conventional;
  LeastSquaresMethod ls_method = LeastSquaresMethod::IncrementalQR;
  bool fourier_symmetry = false;     // see FastUpdateOptions
  bool record_correlations = false;  // keep every correlation vector
  bool check_invariants = false;     // verify internal state each iteration
};

// customary defaults: k iterations, tolerance 1e-9 * ||y||
SolveConfig default_config(std::size_t k, double y_norm);

// Thrown by the least-squares paths when the selected columns are
// numerically dependent.  The greedy solvers catch it and return the last
// consistent state instead.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(std::size_t position, const std::string& what)
      : std::runtime_error(what), position_(position) {}
  // 0-based position within the support list at which the factorization broke
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

struct RecoveryResult {
  cvec x_hat;                        // length N, nonzero only on `support`
  std::vector<std::size_t> support;  // 1-based; OMP keeps selection order
  cvec coeffs;                       // aligned with `support`
  std::size_t iterations_run = 0;
  double residual_norm = 0.0;
  bool rank_deficient_abort = false;  // true when a partial result is returned
  CostReport costs;

  std::vector<std::vector<std::size_t>> support_history;  // after each iteration
  std::vector<cvec> correlation_history;  // only when record_correlations
};

// Orthogonal matching pursuit.  Per iteration: correlate, pick the largest
// |h(j)| (smallest index on ties), extend the support, re-fit by least
// squares, update the residual.  Halts after max_iterations or when
// ||r|| <= residual_tolerance.
RecoveryResult omp_solve(const SensingOperator& op, const cvec& y,
                         const SolveConfig& cfg);

// CoSaMP with sparsity k.  Per iteration: correlate, merge the 2k
// largest-magnitude proxy indices into the support, least-squares on the
// merged set, prune to the k largest coefficients, update the residual.
// Runs for max_iterations (2k is customary) or until the tolerance is met.
RecoveryResult cosamp_solve(const SensingOperator& op, const cvec& y,
                            std::size_t k, const SolveConfig& cfg);

// Least squares min ||y - Phi_support b|| over the given (1-based, distinct)
// support.  Throws RankDeficientError when the columns are dependent.
cvec least_squares(const SensingOperator& op,
                   const std::vector<std::size_t>& support, const cvec& y,
                   LeastSquaresMethod method = LeastSquaresMethod::NormalEquations,
                   FlopCounter* fc = nullptr);

// Thin QR of a growing column set via modified Gram-Schmidt with one
// reorthogonalization pass.  Used by the OMP path so each iteration costs
// O(M t) instead of refactoring from scratch.
class IncrementalQR {
 public:
  explicit IncrementalQR(std::size_t rows) : rows_(rows) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return q_.size(); }

  // false when the new column is numerically dependent on the current ones
  // (projection residual below 1e-10 of the column's norm); the column is
  // not inserted in that case
  bool push_column(const cvec& col, FlopCounter* fc = nullptr);

  // solve R b = Q^H rhs for the current columns
  cvec solve(const cvec& rhs, FlopCounter* fc = nullptr) const;

 private:
  std::size_t rows_;
  std::vector<cvec> q_;  // orthonormal columns
  std::vector<cvec> r_;  // r_[j]: column j of R, entries 0..j
};

// Result text format, same family as the instance format:
//   line 1: N S iterations residual_norm aborted kind
//   line 2: support (S integers, 1-based)
//   line 3: coefficients as S "re im" pairs
void save_result(const RecoveryResult& result, std::ostream& os);

}  // namespace fastmp
