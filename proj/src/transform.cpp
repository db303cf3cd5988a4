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

#include "fastmp/transform.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace fastmp {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void bit_reverse_permute(cvec& v) {
  const std::size_t n = v.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(v[i], v[j]);
  }
}

int sign_bit(std::size_t a, std::size_t b) {
  return (std::popcount(a & b) & 1) ? -1 : 1;
}

}  // namespace

StructuredUnitary::StructuredUnitary(TransformKind kind, std::size_t n)
    : kind_(kind), n_(n), pow2_(is_power_of_two(n)) {
  if (n == 0) throw std::invalid_argument("transform size must be positive");
  if (kind == TransformKind::Hadamard && !pow2_)
    throw std::invalid_argument("hadamard size must be a power of two");
  inv_sqrt_n_ = 1.0 / std::sqrt(static_cast<double>(n));
  if (kind == TransformKind::Fourier) {
    // butterfly twiddles for the power-of-two path, full root table otherwise
    const std::size_t count = pow2_ ? (n > 1 ? n / 2 : 1) : n;
    twiddle_.resize(count);
    for (std::size_t k = 0; k < count; ++k)
      twiddle_[k] = std::polar(1.0, -kTwoPi * static_cast<double>(k) /
                                        static_cast<double>(n));
  }
}

void StructuredUnitary::fft_pow2(cvec& v, bool conjugate,
                                 FlopCounter* fc) const {
  bit_reverse_permute(v);
  std::uint64_t muls = 0, adds = 0;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t step = n_ / len;
    for (std::size_t base = 0; base < n_; base += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx tw = twiddle_[j * step];
        const cplx w = conjugate ? std::conj(tw) : tw;
        const cplx t = w * v[base + j + half];
        const cplx u = v[base + j];
        v[base + j] = u + t;
        v[base + j + half] = u - t;
      }
      muls += half;
      adds += 2 * half;
    }
  }
  if (fc) {
    fc->complex_mul += muls;
    fc->complex_add += adds;
  }
}

void StructuredUnitary::fht(cvec& v, FlopCounter* fc) const {
  std::uint64_t adds = 0;
  for (std::size_t half = 1; half < n_; half <<= 1) {
    for (std::size_t base = 0; base < n_; base += half << 1) {
      for (std::size_t j = base; j < base + half; ++j) {
        const cplx a = v[j];
        const cplx b = v[j + half];
        v[j] = a + b;
        v[j + half] = a - b;
      }
      adds += 2 * half;
    }
  }
  if (fc) fc->complex_add += adds;
}

cvec StructuredUnitary::dense_fourier_apply(const cvec& v, bool conjugate,
                                            FlopCounter* fc) const {
  cvec out(n_);
  for (std::size_t a = 0; a < n_; ++a) {
    cplx acc = 0.0;
    for (std::size_t b = 0; b < n_; ++b) {
      const cplx root = twiddle_[(a * b) % n_];
      acc += v[b] * (conjugate ? std::conj(root) : root);
    }
    out[a] = acc;
  }
  if (fc) {
    fc->complex_mul += std::uint64_t(n_) * n_;
    fc->complex_add += std::uint64_t(n_) * (n_ - 1);
  }
  return out;
}

cvec StructuredUnitary::forward(const cvec& v, FlopCounter* fc) const {
  if (v.size() != n_) throw std::invalid_argument("forward: length mismatch");
  cvec out;
  if (kind_ == TransformKind::Hadamard) {
    out = v;
    fht(out, fc);
  } else if (pow2_) {
    out = v;
    fft_pow2(out, /*conjugate=*/false, fc);
  } else {
    out = dense_fourier_apply(v, /*conjugate=*/false, fc);
  }
  for (cplx& z : out) z *= inv_sqrt_n_;
  if (fc) fc->real_mul += 2 * std::uint64_t(n_);
  return out;
}

cvec StructuredUnitary::adjoint(const cvec& v, FlopCounter* fc) const {
  if (v.size() != n_) throw std::invalid_argument("adjoint: length mismatch");
  cvec out;
  if (kind_ == TransformKind::Hadamard) {
    out = v;  // real symmetric, so the adjoint is the same butterfly pass
    fht(out, fc);
  } else if (pow2_) {
    out = v;
    fft_pow2(out, /*conjugate=*/true, fc);
  } else {
    out = dense_fourier_apply(v, /*conjugate=*/true, fc);
  }
  for (cplx& z : out) z *= inv_sqrt_n_;
  if (fc) fc->real_mul += 2 * std::uint64_t(n_);
  return out;
}

cplx StructuredUnitary::entry(std::size_t row, std::size_t col) const {
  if (row < 1 || row > n_ || col < 1 || col > n_)
    throw std::invalid_argument("entry: index out of range");
  const std::size_t a = row - 1, b = col - 1;
  if (kind_ == TransformKind::Hadamard)
    return cplx(sign_bit(a, b) * inv_sqrt_n_, 0.0);
  const std::size_t e = (a * b) % n_;
  return std::polar(inv_sqrt_n_,
                    -kTwoPi * static_cast<double>(e) / static_cast<double>(n_));
}

cvec StructuredUnitary::column(std::size_t col) const {
  if (col < 1 || col > n_)
    throw std::invalid_argument("column: index out of range");
  cvec out(n_);
  for (std::size_t row = 1; row <= n_; ++row) out[row - 1] = entry(row, col);
  return out;
}

std::size_t StructuredUnitary::product_index(std::size_t i,
                                             std::size_t j) const {
  if (i < 1 || i > n_ || j < 1 || j > n_)
    throw std::invalid_argument("product_index: index out of range");
  if (kind_ == TransformKind::Fourier) return ((i - 1) + (j - 1)) % n_ + 1;
  return ((i - 1) ^ (j - 1)) + 1;
}

cvec StructuredUnitary::dense() const {
  cvec out(n_ * n_);
  for (std::size_t row = 1; row <= n_; ++row)
    for (std::size_t col = 1; col <= n_; ++col)
      out[(row - 1) * n_ + (col - 1)] = entry(row, col);
  return out;
}

std::optional<CheckFailure> check_unit_modulus(const cvec& dense,
                                               std::size_t n) {
  const double expect = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const double err = std::abs(std::abs(dense[a * n + b]) - expect);
      if (err > 1e-12)
        return CheckFailure{"entry-modulus", a + 1, b + 1, err};
    }
  return std::nullopt;
}

std::optional<CheckFailure> check_constant_first_column(const cvec& dense,
                                                        std::size_t n) {
  const double expect = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    const double err = std::abs(dense[a * n] - cplx(expect, 0.0));
    if (err > 1e-12) return CheckFailure{"constant-first-column", a + 1, 1, err};
  }
  return std::nullopt;
}

std::optional<CheckFailure> check_multiplicative_closure(const cvec& dense,
                                                         std::size_t n) {
  const double sqrt_n = std::sqrt(static_cast<double>(n));
  cvec prod(n);
  // products commute, so unordered pairs suffice
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t a = 0; a < n; ++a)
        prod[a] = double(n) * dense[a * n + i] * dense[a * n + j];
      bool found = false;
      for (std::size_t k = 0; k < n && !found; ++k) {
        double worst = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          const double d = std::abs(prod[a] - sqrt_n * dense[a * n + k]);
          if (d > worst) worst = d;
          if (worst > 1e-10) break;
        }
        found = worst <= 1e-10;
      }
      if (!found)
        return CheckFailure{"column-product-closure", i + 1, j + 1, 0.0};
    }
  }
  return std::nullopt;
}

std::optional<CheckFailure> check_unitary_gram(const cvec& dense,
                                               std::size_t n) {
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      cplx g = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        g += std::conj(dense[r * n + a]) * dense[r * n + b];
      const double err = std::abs(g - (a == b ? cplx(1.0) : cplx(0.0)));
      if (err > 1e-10) return CheckFailure{"unitary-gram", a + 1, b + 1, err};
    }
  return std::nullopt;
}

}  // namespace fastmp
