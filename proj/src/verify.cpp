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

#include "fastmp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "fastmp/kernel.hpp"
#include "fastmp/random.hpp"
#include "fastmp/sensing.hpp"
#include "fastmp/transform.hpp"

namespace fastmp {

namespace {

struct GroupResult {
  bool ok = true;
  std::string detail;

  void fail(const std::string& d) {
    if (ok) {
      ok = false;
      detail = d;
    }
  }
};

void report(std::ostream& log, const std::string& name, const GroupResult& g,
            bool& all_ok) {
  if (g.ok) {
    log << "[ ok ] " << name << "\n";
  } else {
    log << "[FAIL] " << name << ": " << g.detail << "\n";
    all_ok = false;
  }
}

std::string size_tag(std::size_t n) { return "n=" + std::to_string(n); }

cvec dense_matvec(const cvec& d, std::size_t n, const cvec& x) {
  cvec y(n, cplx(0.0));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) y[r] += d[r * n + c] * x[c];
  return y;
}

cvec random_vector(Rng& rng, std::size_t n) {
  cvec v(n);
  for (cplx& z : v) z = rng.next_complex_gaussian();
  return v;
}

// brute-force product column: scan for the column matching the scaled
// elementwise product of columns i and j
std::size_t brute_product_column(const cvec& d, std::size_t n, std::size_t i,
                                 std::size_t j) {
  const double sqrt_n = std::sqrt(double(n));
  cvec prod(n);
  for (std::size_t a = 0; a < n; ++a)
    prod[a] = sqrt_n * d[a * n + (i - 1)] * d[a * n + (j - 1)];
  for (std::size_t k = 0; k < n; ++k) {
    double worst = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      worst = std::max(worst, std::abs(prod[a] - d[a * n + k]));
    if (worst <= 1e-8) return k + 1;
  }
  return 0;
}

}  // namespace

bool run_verification(const VerifyOptions& opts, std::ostream& log) {
  bool all_ok = true;
  const TransformKind kinds[] = {TransformKind::Fourier,
                                 TransformKind::Hadamard};

  for (TransformKind kind : kinds) {
    std::vector<std::size_t> sizes;
    if (kind == TransformKind::Fourier) {
      for (std::size_t n = 2; n <= opts.max_n; ++n) sizes.push_back(n);
    } else {
      for (std::size_t n = 2; n <= opts.max_n; n *= 2) sizes.push_back(n);
    }
    const std::string prefix = to_string(kind);
    log << "verifying " << prefix << " (" << sizes.size() << " sizes up to "
        << opts.max_n << ")\n";

    GroupResult unit_modulus, first_column, closure, gram;
    GroupResult round_trip, product, permutation, kernel_group, update_group;

    for (std::size_t n : sizes) {
      const StructuredUnitary u(kind, n);
      cvec d = u.dense();
      if (opts.corrupt) d[0] += 1e-3;

      if (auto f = check_unit_modulus(d, n))
        unit_modulus.fail(size_tag(n) + " entry (" + std::to_string(f->row) +
                          "," + std::to_string(f->col) + ")");
      if (auto f = check_constant_first_column(d, n))
        first_column.fail(size_tag(n) + " row " + std::to_string(f->row));
      if (auto f = check_multiplicative_closure(d, n))
        closure.fail(size_tag(n) + " columns (" + std::to_string(f->row) +
                     "," + std::to_string(f->col) + ")");
      if (auto f = check_unitary_gram(d, n))
        gram.fail(size_tag(n) + " gram entry (" + std::to_string(f->row) +
                  "," + std::to_string(f->col) + ")");

      // transform round trips and agreement with the dense matrix
      Rng rng(derive_seed(opts.seed, n * 4 + (kind == TransformKind::Fourier
                                                  ? 0
                                                  : 1)));
      for (int trial = 0; trial < 2; ++trial) {
        const cvec x = random_vector(rng, n);
        const cvec fx = u.forward(x);
        const cvec back = u.adjoint(fx);
        const double ref = std::max(l2_norm(x), 1e-300);
        if (l2_distance(back, x) > 1e-10 * ref)
          round_trip.fail(size_tag(n) + " adjoint(forward(x)) != x");
        const cvec fd = dense_matvec(d, n, x);
        if (!opts.corrupt && l2_distance(fx, fd) > 1e-10 * ref)
          round_trip.fail(size_tag(n) + " fast transform != dense matvec");
      }

      // product indices against a brute-force search over columns
      if (!opts.corrupt) {
        for (std::size_t i = 1; i <= n && product.ok; ++i)
          for (std::size_t j = i; j <= n; ++j) {
            const std::size_t found = brute_product_column(d, n, i, j);
            const std::size_t expect = u.product_index(i, j);
            if (found != expect) {
              char buf[96];
              std::snprintf(buf, sizeof(buf),
                            "n=%zu (i=%zu,j=%zu): search %zu vs formula %zu",
                            n, i, j, found, expect);
              product.fail(buf);
              break;
            }
          }
      }

      // column-product permutation identity for every index, plus the
      // composition law on the induced index maps
      for (std::size_t lambda = 1; lambda <= n && permutation.ok; ++lambda) {
        const TheoremCheck chk = verify_permutation_property(u, lambda);
        if (!chk.ok) {
          permutation.fail(size_tag(n) + " lambda=" + std::to_string(lambda) +
                           ": " + chk.detail);
          break;
        }
        const PermutationAction act{kind, n, lambda};
        for (std::size_t i = 1; i <= n; ++i)
          if (chk.permutation[i - 1] != act.map_index(i)) {
            permutation.fail(size_tag(n) + " lambda=" +
                             std::to_string(lambda) +
                             ": extracted map mismatch at i=" +
                             std::to_string(i));
            break;
          }
      }
      if (permutation.ok && n <= 32) {
        for (std::size_t lam = 1; lam <= n && permutation.ok; ++lam)
          for (std::size_t mu = 1; mu <= n && permutation.ok; ++mu) {
            const PermutationAction a1{kind, n, lam};
            const PermutationAction a2{kind, n, mu};
            const PermutationAction comp{kind, n, u.product_index(lam, mu)};
            for (std::size_t i = 1; i <= n; ++i)
              if (a2.map_index(a1.map_index(i)) != comp.map_index(i)) {
                permutation.fail(size_tag(n) + " composition law at lambda=" +
                                 std::to_string(lam) + " mu=" +
                                 std::to_string(mu));
                break;
              }
          }
      }

      // correlation kernels for random row subsets: invariants, agreement
      // with the dense computation, and the full-rows identity kernel
      if (!opts.corrupt) {
        for (int trial = 0; trial < 3; ++trial) {
          const std::size_t m = std::max<std::size_t>(1, n / 4);
          const RowSelection sel = make_row_selection(
              n, m, derive_seed(opts.seed, 1000 + n * 8 + trial));
          const SensingOperator op(StructuredUnitary(kind, n), sel);
          const CorrelationKernel ker = compute_kernel(op);
          if (auto f = check_kernel_invariants(ker)) {
            kernel_group.fail(size_tag(n) + " " + f->check);
            break;
          }
          cvec cd(n, cplx(0.0));
          for (std::size_t row : sel.omega)
            for (std::size_t j = 0; j < n; ++j)
              cd[j] += std::conj(d[(row - 1) * n + j]) * d[(row - 1) * n];
          double worst = 0.0;
          for (std::size_t j = 0; j < n; ++j)
            worst = std::max(worst, std::abs(ker.c[j] - cd[j]));
          if (worst > 1e-12) {
            kernel_group.fail(size_tag(n) + " kernel vs dense, err=" +
                              std::to_string(worst));
            break;
          }
        }
        std::vector<std::size_t> all_rows(n);
        for (std::size_t i = 0; i < n; ++i) all_rows[i] = i + 1;
        const SensingOperator full(StructuredUnitary(kind, n),
                                   make_row_selection(n, all_rows));
        const CorrelationKernel ker = compute_kernel(full);
        for (std::size_t j = 0; j < n; ++j) {
          const cplx want = (j == 0) ? cplx(1.0) : cplx(0.0);
          if (std::abs(ker.c[j] - want) > 1e-12) {
            kernel_group.fail(size_tag(n) + " full-rows kernel != e1");
            break;
          }
        }
      }

      // fast correlation updates against the conventional transform path
      if (!opts.corrupt && n >= 4) {
        const std::size_t m = std::max<std::size_t>(2, n / 4);
        const std::size_t k = std::min<std::size_t>(3, m - 1);
        for (int sym = 0; sym < (kind == TransformKind::Fourier ? 2 : 1);
             ++sym) {
          Rng trng(derive_seed(opts.seed, 2000 + n * 2 + sym));
          const RowSelection sel = make_row_selection(n, m, trng.next_u64());
          const SensingOperator op(StructuredUnitary(kind, n), sel);
          const CorrelationKernel ker = compute_kernel(op);
          const cvec y = random_vector(trng, m);
          const std::vector<std::size_t> support =
              trng.sample_one_based(n, k);
          cvec coeffs(k);
          for (cplx& z : coeffs) z = trng.next_complex_gaussian();
          const cvec h0 = op.apply_adjoint(y);
          FastUpdateOptions uo;
          uo.fourier_symmetry = (sym == 1);
          const cvec hf = fast_update(h0, ker, support, coeffs, uo);
          cvec xs(n, cplx(0.0));
          for (std::size_t j = 0; j < k; ++j)
            xs[support[j] - 1] = coeffs[j];
          cvec resid = y;
          const cvec ax = op.apply(xs);
          for (std::size_t i = 0; i < m; ++i) resid[i] -= ax[i];
          const cvec hc = op.apply_adjoint(resid);
          const double ref = std::max(l2_norm(hc), 1e-300);
          if (l2_distance(hf, hc) > 1e-10 * ref)
            update_group.fail(size_tag(n) + (sym ? " (paired products)" : "") +
                              " fast update != conventional");
        }
      }
    }

    report(log, prefix + " unit-modulus entries", unit_modulus, all_ok);
    report(log, prefix + " constant first column", first_column, all_ok);
    report(log, prefix + " multiplicative closure", closure, all_ok);
    report(log, prefix + " unitary gram identity", gram, all_ok);
    report(log, prefix + " transform round trips", round_trip, all_ok);
    report(log, prefix + " product-index formula", product, all_ok);
    report(log, prefix + " column-product permutations", permutation, all_ok);
    report(log, prefix + " correlation kernels", kernel_group, all_ok);
    report(log, prefix + " fast correlation updates", update_group, all_ok);
  }

  log << (all_ok ? "verification passed\n" : "verification FAILED\n");
  return all_ok;
}

}  // namespace fastmp
