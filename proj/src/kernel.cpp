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

#include "fastmp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fastmp {

CorrelationKernel compute_kernel(const SensingOperator& op, FlopCounter* fc) {
  const std::size_t n = op.n();
  cvec e1(n, cplx(0.0));
  e1[0] = 1.0;

  CorrelationKernel kernel;
  kernel.kind = op.unitary().kind();
  kernel.n = n;
  kernel.m = op.m();
  kernel.c = op.apply_adjoint(op.apply(e1, fc), fc);

  if (kernel.kind == TransformKind::Fourier) {
    // c is the adjoint image of a real vector, hence exactly conjugate
    // symmetric; pin that down so paired entries share their products
    cvec& c = kernel.c;
    c[0] = cplx(c[0].real(), 0.0);
    if (n % 2 == 0 && n > 1) c[n / 2] = cplx(c[n / 2].real(), 0.0);
    for (std::size_t j = 1; 2 * j < n; ++j) {
      const cplx avg = 0.5 * (c[j] + std::conj(c[n - j]));
      c[j] = avg;
      c[n - j] = std::conj(avg);
    }
  } else {
    // entries are integers over N (and N is a power of two), so the snapped
    // values are exact; tabulating the few distinct ones turns every kernel
    // sweep into adds
    const double dn = static_cast<double>(n);
    std::vector<double> scaled(n);
    for (std::size_t j = 0; j < n; ++j) {
      scaled[j] = std::round(kernel.c[j].real() * dn);
      kernel.c[j] = cplx(scaled[j] / dn, 0.0);
    }
    std::vector<double> distinct = scaled;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    kernel.values.resize(distinct.size());
    for (std::size_t i = 0; i < distinct.size(); ++i)
      kernel.values[i] = distinct[i] / dn;
    kernel.value_index.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto it =
          std::lower_bound(distinct.begin(), distinct.end(), scaled[j]);
      kernel.value_index[j] =
          static_cast<std::uint32_t>(it - distinct.begin());
    }
  }
  return kernel;
}

std::optional<CheckFailure> check_kernel_invariants(
    const CorrelationKernel& k) {
  const double ratio =
      static_cast<double>(k.m) / static_cast<double>(k.n);
  const double head_err = std::abs(k.c[0] - cplx(ratio, 0.0));
  if (head_err > 1e-12)
    return CheckFailure{"kernel-head", 1, 0, head_err};

  if (k.kind == TransformKind::Fourier) {
    for (std::size_t j = 1; j < k.n; ++j) {
      const double err = std::abs(k.c[j] - std::conj(k.c[k.n - j]));
      if (err > 1e-12)
        return CheckFailure{"kernel-conjugate-symmetry", j + 1, 0, err};
    }
    return std::nullopt;
  }

  const double dn = static_cast<double>(k.n);
  for (std::size_t j = 0; j < k.n; ++j) {
    if (std::abs(k.c[j].imag()) > 1e-12)
      return CheckFailure{"kernel-real", j + 1, 0, std::abs(k.c[j].imag())};
    const double scaled = k.c[j].real() * dn;
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) > 1e-9)
      return CheckFailure{"kernel-integer-lattice", j + 1, 0,
                          std::abs(scaled - nearest)};
    const long long as_int = static_cast<long long>(nearest);
    if (((as_int - static_cast<long long>(k.m)) % 2 + 2) % 2 != 0)
      return CheckFailure{"kernel-parity", j + 1, 0,
                          static_cast<double>(as_int)};
    if (std::abs(k.c[j].real()) > ratio + 1e-12)
      return CheckFailure{"kernel-magnitude-bound", j + 1, 0,
                          std::abs(k.c[j].real())};
  }
  return std::nullopt;
}

std::size_t PermutationAction::map_index(std::size_t i) const {
  if (i < 1 || i > n || lambda < 1 || lambda > n)
    throw std::invalid_argument("permutation: index out of range");
  const std::size_t a = i - 1;
  const std::size_t l = lambda - 1;
  if (kind == TransformKind::Fourier) return (a + n - l) % n + 1;
  return (a ^ l) + 1;
}

cvec permute(const PermutationAction& action, const cvec& v) {
  if (v.size() != action.n)
    throw std::invalid_argument("permute: length mismatch");
  cvec out(action.n);
  for (std::size_t i = 1; i <= action.n; ++i)
    out[i - 1] = v[action.map_index(i) - 1];
  return out;
}

TheoremCheck verify_permutation_property(const cvec& dense_u, std::size_t n,
                                         std::size_t lambda) {
  TheoremCheck check;
  if (lambda < 1 || lambda > n)
    throw std::invalid_argument("verify: lambda out of range");
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  // B = D_lambda U with D_lambda = sqrt(N) diag(u_lambda)
  cvec b(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    const cplx d = sqrt_n * dense_u[r * n + (lambda - 1)];
    for (std::size_t col = 0; col < n; ++col)
      b[r * n + col] = d * dense_u[r * n + col];
  }

  const double tol = 1e-10;
  check.permutation.assign(n, 0);
  std::vector<std::size_t> column_hits(n, 0);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t ones = 0;
    for (std::size_t col = 0; col < n; ++col) {
      cplx p = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        p += std::conj(dense_u[r * n + row]) * b[r * n + col];
      const double dist0 = std::abs(p);
      const double dist1 = std::abs(p - cplx(1.0));
      if (dist0 > tol && dist1 > tol) {
        check.bad_row = row + 1;
        check.bad_col = col + 1;
        check.bad_error = std::min(dist0, dist1);
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "entry (%zu,%zu) is %.3e from {0,1}", row + 1, col + 1,
                      check.bad_error);
        check.detail = msg;
        return check;
      }
      if (dist1 <= tol) {
        ++ones;
        ++column_hits[col];
        check.permutation[row] = col + 1;
      }
    }
    if (ones != 1) {
      check.bad_row = row + 1;
      check.detail = "row " + std::to_string(row + 1) + " has " +
                     std::to_string(ones) + " unit entries";
      return check;
    }
  }
  for (std::size_t col = 0; col < n; ++col) {
    if (column_hits[col] != 1) {
      check.bad_col = col + 1;
      check.detail = "column " + std::to_string(col + 1) + " has " +
                     std::to_string(column_hits[col]) + " unit entries";
      return check;
    }
  }
  check.ok = true;
  return check;
}

TheoremCheck verify_permutation_property(const StructuredUnitary& u,
                                         std::size_t lambda) {
  return verify_permutation_property(u.dense(), u.size(), lambda);
}

std::vector<std::size_t> hadamard_generator_decomposition(std::size_t lambda,
                                                          std::size_t n) {
  if (!is_power_of_two(n))
    throw std::invalid_argument("generator decomposition needs power-of-two n");
  if (lambda < 1 || lambda > n)
    throw std::invalid_argument("generator decomposition: lambda out of range");
  std::vector<std::size_t> bits;
  const std::size_t l = lambda - 1;
  for (std::size_t b = 0; (std::size_t{1} << b) <= l; ++b)
    if (l & (std::size_t{1} << b)) bits.push_back(b);
  return bits;
}

cvec fast_update(const cvec& h0, const CorrelationKernel& kernel,
                 const std::vector<std::size_t>& support, const cvec& coeffs,
                 const FastUpdateOptions& opts, FlopCounter* fc) {
  const std::size_t n = kernel.n;
  if (h0.size() != n) throw std::invalid_argument("fast_update: h0 length");
  if (support.size() != coeffs.size())
    throw std::invalid_argument("fast_update: support/coefficient mismatch");
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 1 || support[i] > n)
      throw std::invalid_argument("fast_update: support index out of range");
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j])
        throw std::invalid_argument("fast_update: duplicate support index");
  }

  cvec h = h0;
  if (support.empty()) return h;

  if (kernel.kind == TransformKind::Hadamard) {
    // per atom: scale the few distinct kernel values once, then sweep adds
    const std::size_t d = kernel.values.size();
    cvec w(d);
    for (std::size_t tau = 0; tau < support.size(); ++tau) {
      const std::size_t shift = support[tau] - 1;
      const cplx x = coeffs[tau];
      for (std::size_t i = 0; i < d; ++i)
        w[i] = cplx(x.real() * kernel.values[i], x.imag() * kernel.values[i]);
      for (std::size_t a = 0; a < n; ++a)
        h[a] -= w[kernel.value_index[a ^ shift]];
    }
    if (fc) {
      fc->real_mul += 2 * std::uint64_t(d) * support.size();
      fc->complex_add += std::uint64_t(n) * support.size();
    }
    return h;
  }

  if (!opts.fourier_symmetry) {
    for (std::size_t tau = 0; tau < support.size(); ++tau) {
      const std::size_t shift = support[tau] - 1;
      const cplx x = coeffs[tau];
      for (std::size_t a = 0; a < n; ++a) {
        std::size_t src = a + n - shift;
        if (src >= n) src -= n;
        h[a] -= x * kernel.c[src];
      }
    }
    if (fc) {
      fc->complex_mul += std::uint64_t(n) * support.size();
      fc->complex_add += std::uint64_t(n) * support.size();
    }
    return h;
  }

  // Symmetric product table: the kernel satisfies c[n-j] = conj(c[j]), so
  // the four real products behind x*c[j] also produce x*c[n-j] with two more
  // real additions.  Booked as one complex multiply plus two real adds per
  // entry pair; the sweep itself is one complex add per entry.
  cvec p(n);
  std::uint64_t cm = 0, ra = 0, rm = 0;
  for (std::size_t tau = 0; tau < support.size(); ++tau) {
    const std::size_t shift = support[tau] - 1;
    const cplx x = coeffs[tau];
    const double xr = x.real(), xi = x.imag();

    p[0] = cplx(xr * kernel.c[0].real(), xi * kernel.c[0].real());
    rm += 2;
    if (n % 2 == 0 && n > 1) {
      const double mid = kernel.c[n / 2].real();
      p[n / 2] = cplx(xr * mid, xi * mid);
      rm += 2;
    }
    for (std::size_t j = 1; 2 * j < n; ++j) {
      const double cr = kernel.c[j].real(), ci = kernel.c[j].imag();
      const double rr = xr * cr, ii = xi * ci;
      const double ri = xr * ci, ir = xi * cr;
      p[j] = cplx(rr - ii, ri + ir);
      p[n - j] = cplx(rr + ii, ir - ri);
      cm += 1;
      ra += 2;
    }
    for (std::size_t a = 0; a < n; ++a) {
      std::size_t src = a + n - shift;
      if (src >= n) src -= n;
      h[a] -= p[src];
    }
  }
  if (fc) {
    fc->complex_mul += cm;
    fc->real_add += ra;
    fc->real_mul += rm;
    fc->complex_add += std::uint64_t(n) * support.size();
  }
  return h;
}

}  // namespace fastmp
