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

#include "fastmp/solvers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace fastmp {

namespace {

// relative pivot floor for the normal-equations Cholesky; an exactly
// dependent column set shows up as a pivot near eps * diagonal, well below
constexpr double kCholeskyPivotTol = 1e-12;

// Identification ties must resolve identically whichever path computed the
// correlations, and exact magnitude ties are structural for Hadamard
// submatrices (distinct columns correlate to identical magnitudes), so the
// fast and conventional paths can round the same tie in opposite directions.
// Candidates within this relative band of a selection boundary are treated
// as equal and ranked by index alone; genuine gaps sit many orders above.
constexpr double kTieBandRel = 1e-9;

cplx dot_conj(const cvec& a, const cvec& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void count_dot(FlopCounter* fc, std::size_t len) {
  if (fc && len > 0) {
    fc->complex_mul += len;
    fc->complex_add += len - 1;
  }
}

double mag2(const cplx& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

// the `count` positions holding the largest values: positions clearing the
// rank-`count` boundary outright, then smallest positions among those tied
// with the boundary (tied = within kTieBandRel of it)
std::vector<std::size_t> select_largest(const std::vector<double>& m,
                                        std::size_t count) {
  const std::size_t n = m.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (count >= n) return order;
  std::partial_sort(order.begin(), order.begin() + count, order.end(),
                    [&m](std::size_t a, std::size_t b) {
                      if (m[a] != m[b]) return m[a] > m[b];
                      return a < b;
                    });
  const double boundary = m[order[count - 1]];
  const double hi = boundary * (1.0 + kTieBandRel);
  const double lo = boundary * (1.0 - kTieBandRel);
  std::vector<std::size_t> sure, tied;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[j] > hi)
      sure.push_back(j);
    else if (m[j] >= lo)
      tied.push_back(j);
  }
  assert(sure.size() < count && sure.size() + tied.size() >= count);
  sure.insert(sure.end(), tied.begin(), tied.begin() + (count - sure.size()));
  return sure;
}

// index (0-based) of the largest |h(j)|; candidates within the tie band of
// the maximum count as equal and the smallest index wins
std::size_t argmax_magnitude(const cvec& h, FlopCounter* fc) {
  double best = 0.0;
  for (const cplx& z : h) best = std::max(best, mag2(z));
  if (fc) {
    fc->real_mul += 2 * std::uint64_t(h.size());
    fc->real_add += h.size();
  }
  const double cut = best * (1.0 - kTieBandRel);
  for (std::size_t j = 0; j < h.size(); ++j)
    if (mag2(h[j]) >= cut) return j;
  return 0;  // unreachable: the maximum itself clears the cut
}

// the `count` atoms (1-based) with the largest |h|, smallest atom first on
// band ties; returned sorted ascending for merging
std::vector<std::size_t> top_atoms(const cvec& h, std::size_t count,
                                   FlopCounter* fc) {
  const std::size_t n = h.size();
  std::vector<double> m(n);
  for (std::size_t j = 0; j < n; ++j) m[j] = mag2(h[j]);
  if (fc) {
    fc->real_mul += 2 * std::uint64_t(n);
    fc->real_add += n;
  }
  std::vector<std::size_t> out = select_largest(m, count);
  for (std::size_t& a : out) ++a;
  std::sort(out.begin(), out.end());
  return out;
}

cvec normal_equations_solve(const std::vector<cvec>& cols, const cvec& y,
                            FlopCounter* fc) {
  const std::size_t s = cols.size();
  const std::size_t rows = y.size();
  std::vector<cvec> g(s, cvec(s));
  cvec b(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      g[i][j] = dot_conj(cols[i], cols[j]);
      g[j][i] = std::conj(g[i][j]);
      count_dot(fc, rows);
    }
    b[i] = dot_conj(cols[i], y);
    count_dot(fc, rows);
  }

  std::vector<double> diag(s);
  for (std::size_t i = 0; i < s; ++i) diag[i] = g[i][i].real();

  // in-place lower Cholesky of the Gram matrix
  std::vector<cvec> l(s, cvec(s, cplx(0.0)));
  for (std::size_t j = 0; j < s; ++j) {
    double d = g[j][j].real();
    for (std::size_t k = 0; k < j; ++k) d -= mag2(l[j][k]);
    if (!(d > kCholeskyPivotTol * diag[j]))
      throw RankDeficientError(
          j, "normal equations: dependent column at support position " +
                 std::to_string(j));
    const double ljj = std::sqrt(d);
    l[j][j] = ljj;
    for (std::size_t i = j + 1; i < s; ++i) {
      cplx v = g[i][j];
      for (std::size_t k = 0; k < j; ++k) v -= l[i][k] * std::conj(l[j][k]);
      l[i][j] = v / ljj;
    }
    if (fc) {
      fc->complex_mul += (s - j);
      fc->complex_add += (s - j) * (j + 1);
    }
  }

  cvec z(s), x(s);
  for (std::size_t i = 0; i < s; ++i) {
    cplx v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= l[i][k] * z[k];
    z[i] = v / l[i][i];
  }
  for (std::size_t ii = s; ii-- > 0;) {
    cplx v = z[ii];
    for (std::size_t k = ii + 1; k < s; ++k) v -= std::conj(l[k][ii]) * x[k];
    x[ii] = v / l[ii][ii];
  }
  if (fc) {
    fc->complex_mul += std::uint64_t(s) * s;
    fc->complex_add += std::uint64_t(s) * s;
  }
  return x;
}

// a = sum_j coeffs[j] * cols[j]; r = y - a
void update_residual(const std::vector<cvec>& cols, const cvec& coeffs,
                     const cvec& y, cvec& r, FlopCounter* fc) {
  const std::size_t rows = y.size();
  cvec a(rows, cplx(0.0));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) a[i] += coeffs[j] * cols[j][i];
  r.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) r[i] = y[i] - a[i];
  if (fc) {
    fc->complex_mul += std::uint64_t(cols.size()) * rows;
    fc->complex_add += std::uint64_t(cols.size() + 1) * rows;
  }
}

void check_residual_orthogonality(const std::vector<cvec>& cols, const cvec& r,
                                  double scale) {
  for (const cvec& col : cols) {
    const double g = std::abs(dot_conj(col, r));
    if (g > 1e-8 * scale)
      throw std::logic_error(
          "solver invariant violated: residual not orthogonal to the fitted "
          "columns");
  }
}

struct CorrelationPlan {
  CorrelationMode declared;
  std::size_t fast_until;  // fast path governs iterations t <= fast_until
};

bool plan_uses_fast(const CorrelationPlan& plan, std::size_t t) {
  return t <= plan.fast_until;
}

}  // namespace

SolveConfig default_config(std::size_t k, double y_norm) {
  SolveConfig cfg;
  cfg.max_iterations = std::max<std::size_t>(1, k);
  cfg.residual_tolerance = 1e-9 * y_norm;
  return cfg;
}

bool IncrementalQR::push_column(const cvec& col, FlopCounter* fc) {
  if (col.size() != rows_)
    throw std::invalid_argument("qr: column length mismatch");
  const double orig = l2_norm(col);
  cvec v = col;
  cvec rcol(q_.size() + 1, cplx(0.0));
  // two Gram-Schmidt passes; the second mops up the first's rounding
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < q_.size(); ++i) {
      const cplx s = dot_conj(q_[i], v);
      for (std::size_t row = 0; row < rows_; ++row) v[row] -= s * q_[i][row];
      rcol[i] += s;
      count_dot(fc, rows_);
      if (fc) {
        fc->complex_mul += rows_;
        fc->complex_add += rows_;
      }
    }
  }
  const double rho = l2_norm(v);
  if (fc) {
    fc->real_mul += 2 * rows_;
    fc->real_add += rows_;
  }
  if (rho <= 1e-10 * orig) return false;  // nothing left outside the span
  rcol[q_.size()] = rho;
  for (cplx& z : v) z /= rho;
  q_.push_back(std::move(v));
  r_.push_back(std::move(rcol));
  return true;
}

cvec IncrementalQR::solve(const cvec& rhs, FlopCounter* fc) const {
  if (rhs.size() != rows_) throw std::invalid_argument("qr: rhs length mismatch");
  const std::size_t t = q_.size();
  cvec z(t);
  for (std::size_t i = 0; i < t; ++i) {
    z[i] = dot_conj(q_[i], rhs);
    count_dot(fc, rows_);
  }
  cvec x(t);
  for (std::size_t jj = t; jj-- > 0;) {
    cplx v = z[jj];
    for (std::size_t k = jj + 1; k < t; ++k) v -= r_[k][jj] * x[k];
    x[jj] = v / r_[jj][jj];
  }
  if (fc && t > 0) {
    fc->complex_mul += std::uint64_t(t) * (t + 1) / 2;
    fc->complex_add += std::uint64_t(t) * (t - 1) / 2;
  }
  return x;
}

cvec least_squares(const SensingOperator& op,
                   const std::vector<std::size_t>& support, const cvec& y,
                   LeastSquaresMethod method, FlopCounter* fc) {
  if (y.size() != op.m())
    throw std::invalid_argument("least_squares: rhs length mismatch");
  std::vector<cvec> cols;
  cols.reserve(support.size());
  for (std::size_t atom : support) cols.push_back(op.column(atom));

  if (method == LeastSquaresMethod::NormalEquations)
    return normal_equations_solve(cols, y, fc);

  IncrementalQR qr(op.m());
  for (std::size_t j = 0; j < cols.size(); ++j)
    if (!qr.push_column(cols[j], fc))
      throw RankDeficientError(
          j, "qr: dependent column at support position " + std::to_string(j));
  return qr.solve(y, fc);
}

RecoveryResult omp_solve(const SensingOperator& op, const cvec& y,
                         const SolveConfig& cfg) {
  const std::size_t n = op.n();
  if (y.size() != op.m())
    throw std::invalid_argument("omp_solve: measurement length mismatch");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("omp_solve: max_iterations must be >= 1");
  if (!(cfg.residual_tolerance >= 0.0))
    throw std::invalid_argument("omp_solve: tolerance must be >= 0");

  RecoveryResult res;
  res.costs.kind = op.unitary().kind();
  res.costs.n = n;
  res.x_hat.assign(n, cplx(0.0));

  cvec r = y;
  double rn = l2_norm(r);
  res.residual_norm = rn;
  if (rn <= cfg.residual_tolerance) return res;

  CorrelationPlan plan{cfg.correlation_mode, 0};
  switch (cfg.correlation_mode) {
    case CorrelationMode::Conventional: plan.fast_until = 0; break;
    case CorrelationMode::Fast: plan.fast_until = SIZE_MAX; break;
    case CorrelationMode::Adaptive:
      plan.fast_until = crossover_iteration(op.unitary().kind(), n);
      break;
  }

  std::optional<CorrelationKernel> kernel;
  FlopCounter corr_fc, ls_fc, id_fc, kernel_fc;
  const FastUpdateOptions update_opts{cfg.fourier_symmetry};
  const double scale = std::max(1.0, rn);

  IncrementalQR qr(op.m());
  std::vector<cvec> cols;
  cvec h0;
  const bool dense = !op.unitary().fast_path();

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    const bool fast_row = plan_uses_fast(plan, t);
    IterationCost row;
    row.t = t;
    row.mode_used =
        fast_row ? CorrelationMode::Fast : CorrelationMode::Conventional;
    row.analytic_flops =
        fast_row ? fast_iteration_flops(op.unitary().kind(), n, t)
                 : conventional_iteration_flops(op.unitary().kind(), n);
    row.dense_fallback = dense && (!fast_row || t == 1);

    const FlopCounter before = corr_fc;
    cvec h;
    if (t == 1) {
      h = op.apply_adjoint(r, &corr_fc);
      if (plan.fast_until >= 2 && cfg.max_iterations >= 2) h0 = h;
    } else if (fast_row) {
      if (!kernel) kernel = compute_kernel(op, &kernel_fc);
      h = fast_update(h0, *kernel, res.support, res.coeffs, update_opts,
                      &corr_fc);
    } else {
      h = op.apply_adjoint(r, &corr_fc);
    }
    row.counted = corr_fc - before;
    res.costs.iterations.push_back(row);
    if (cfg.record_correlations) res.correlation_history.push_back(h);

    const std::size_t pick = argmax_magnitude(h, &id_fc);
    if (mag2(h[pick]) == 0.0) break;  // nothing left to select
    const std::size_t atom = pick + 1;
    if (std::find(res.support.begin(), res.support.end(), atom) !=
        res.support.end())
      break;  // stagnation guard; cannot happen with an exact fit

    res.support.push_back(atom);
    cols.push_back(op.column(atom));
    try {
      if (cfg.ls_method == LeastSquaresMethod::IncrementalQR) {
        if (!qr.push_column(cols.back(), &ls_fc))
          throw RankDeficientError(res.support.size() - 1,
                                   "qr: dependent column");
        res.coeffs = qr.solve(y, &ls_fc);
      } else {
        res.coeffs = normal_equations_solve(cols, y, &ls_fc);
      }
    } catch (const RankDeficientError&) {
      res.support.pop_back();
      cols.pop_back();
      res.rank_deficient_abort = true;
      break;
    }

    const double prev_rn = rn;
    update_residual(cols, res.coeffs, y, r, &ls_fc);
    rn = l2_norm(r);
    res.support_history.push_back(res.support);
    res.iterations_run = t;
    res.residual_norm = rn;

    if (cfg.check_invariants) {
      if (res.support.size() != t)
        throw std::logic_error("solver invariant violated: support size");
      check_residual_orthogonality(cols, r, scale);
      if (rn > prev_rn + 1e-12)
        throw std::logic_error(
            "solver invariant violated: residual norm increased");
    }
    if (rn <= cfg.residual_tolerance) break;
  }

  for (std::size_t j = 0; j < res.support.size(); ++j)
    res.x_hat[res.support[j] - 1] = res.coeffs[j];
  res.costs.kernel_precompute_flops = kernel_fc.flops();
  res.costs.least_squares_flops = ls_fc.flops();
  res.costs.identification_flops = id_fc.flops();
  return res;
}

RecoveryResult cosamp_solve(const SensingOperator& op, const cvec& y,
                            std::size_t k, const SolveConfig& cfg) {
  const std::size_t n = op.n();
  if (y.size() != op.m())
    throw std::invalid_argument("cosamp_solve: measurement length mismatch");
  if (cfg.max_iterations < 1)
    throw std::invalid_argument("cosamp_solve: max_iterations must be >= 1");
  if (!(cfg.residual_tolerance >= 0.0))
    throw std::invalid_argument("cosamp_solve: tolerance must be >= 0");

  RecoveryResult res;
  res.costs.kind = op.unitary().kind();
  res.costs.n = n;
  res.x_hat.assign(n, cplx(0.0));

  cvec r = y;
  double rn = l2_norm(r);
  res.residual_norm = rn;
  if (k == 0 || rn <= cfg.residual_tolerance) return res;

  const TransformKind kind = op.unitary().kind();
  bool fast_updates = false;
  switch (cfg.correlation_mode) {
    case CorrelationMode::Conventional: fast_updates = false; break;
    case CorrelationMode::Fast: fast_updates = true; break;
    case CorrelationMode::Adaptive:
      fast_updates = adaptive_cosamp_uses_fast(kind, n, k);
      break;
  }

  std::optional<CorrelationKernel> kernel;
  FlopCounter corr_fc, ls_fc, id_fc, kernel_fc;
  const FastUpdateOptions update_opts{cfg.fourier_symmetry};
  const std::size_t ident_count = std::min(2 * k, n);
  cvec h0;
  const bool dense = !op.unitary().fast_path();

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    IterationCost row;
    row.t = t;
    row.mode_used = fast_updates ? CorrelationMode::Fast
                                 : CorrelationMode::Conventional;
    row.analytic_flops =
        fast_updates ? cosamp_fast_iteration_flops(kind, n, k, t)
                     : conventional_iteration_flops(kind, n);
    row.dense_fallback = dense && (!fast_updates || t == 1);

    const FlopCounter before = corr_fc;
    cvec h;
    if (t == 1) {
      h = op.apply_adjoint(r, &corr_fc);
      if (fast_updates) h0 = h;
    } else if (fast_updates) {
      if (!kernel) kernel = compute_kernel(op, &kernel_fc);
      h = fast_update(h0, *kernel, res.support, res.coeffs, update_opts,
                      &corr_fc);
    } else {
      h = op.apply_adjoint(r, &corr_fc);
    }
    row.counted = corr_fc - before;
    res.costs.iterations.push_back(row);
    if (cfg.record_correlations) res.correlation_history.push_back(h);

    // merge the strongest proxy atoms into the current support
    const std::vector<std::size_t> picked = top_atoms(h, ident_count, &id_fc);
    std::vector<std::size_t> merged;
    merged.reserve(res.support.size() + picked.size());
    std::vector<std::size_t> sorted_support = res.support;
    std::sort(sorted_support.begin(), sorted_support.end());
    std::set_union(sorted_support.begin(), sorted_support.end(),
                   picked.begin(), picked.end(), std::back_inserter(merged));

    std::vector<cvec> merged_cols;
    merged_cols.reserve(merged.size());
    for (std::size_t atom : merged) merged_cols.push_back(op.column(atom));
    cvec b;
    try {
      b = normal_equations_solve(merged_cols, y, &ls_fc);
    } catch (const RankDeficientError&) {
      res.rank_deficient_abort = true;
      break;
    }

    // prune to the k strongest coefficients; merged is atom-ascending, so
    // band ties resolve to the smallest atom here too
    std::vector<double> mags(merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) mags[i] = mag2(b[i]);
    const std::size_t keep = std::min(k, merged.size());
    const std::vector<std::size_t> order = select_largest(mags, keep);
    id_fc.real_mul += 2 * std::uint64_t(merged.size());
    id_fc.real_add += merged.size();

    std::vector<std::pair<std::size_t, cplx>> kept;
    kept.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
      kept.emplace_back(merged[order[i]], b[order[i]]);
    std::sort(kept.begin(), kept.end(),
              [](const auto& a, const auto& bb) { return a.first < bb.first; });

    res.support.clear();
    res.coeffs.clear();
    std::vector<cvec> cols;
    for (const auto& [atom, coeff] : kept) {
      res.support.push_back(atom);
      res.coeffs.push_back(coeff);
      cols.push_back(op.column(atom));
    }

    update_residual(cols, res.coeffs, y, r, &ls_fc);
    rn = l2_norm(r);
    res.support_history.push_back(res.support);
    res.iterations_run = t;
    res.residual_norm = rn;

    if (cfg.check_invariants) {
      if (res.support.size() > k)
        throw std::logic_error("solver invariant violated: support exceeds k");
      for (std::size_t i = 1; i < res.support.size(); ++i)
        if (res.support[i] <= res.support[i - 1])
          throw std::logic_error(
              "solver invariant violated: support not sorted/distinct");
    }
    if (rn <= cfg.residual_tolerance) break;
  }

  for (std::size_t j = 0; j < res.support.size(); ++j)
    res.x_hat[res.support[j] - 1] = res.coeffs[j];
  res.costs.kernel_precompute_flops = kernel_fc.flops();
  res.costs.least_squares_flops = ls_fc.flops();
  res.costs.identification_flops = id_fc.flops();
  return res;
}

void save_result(const RecoveryResult& result, std::ostream& os) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", result.residual_norm);
  os << result.x_hat.size() << ' ' << result.support.size() << ' '
     << result.iterations_run << ' ' << buf << ' '
     << (result.rank_deficient_abort ? 1 : 0) << ' '
     << to_string(result.costs.kind) << '\n';
  for (std::size_t i = 0; i < result.support.size(); ++i)
    os << (i ? " " : "") << result.support[i];
  os << '\n';
  for (std::size_t i = 0; i < result.coeffs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", result.coeffs[i].real(),
                  result.coeffs[i].imag());
    os << (i ? " " : "") << buf;
  }
  os << '\n';
}

}  // namespace fastmp
