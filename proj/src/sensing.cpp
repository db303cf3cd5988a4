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

#include "fastmp/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "fastmp/random.hpp"

namespace fastmp {

namespace {

void validate_selection(std::size_t n, const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw std::invalid_argument("row selection must be non-empty");
  if (rows.size() > n)
    throw std::invalid_argument("row selection larger than the transform size");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 1 || rows[i] > n)
      throw std::invalid_argument("row index out of range");
    if (i > 0 && rows[i] == rows[i - 1])
      throw std::invalid_argument("row indices must be distinct");
  }
}

void append_pairs(std::ostream& os, const cvec& v) {
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", v[i].real(), v[i].imag());
    os << (i ? " " : "") << buf;
  }
  os << '\n';
}

cvec read_pairs(std::istream& is, std::size_t count, const char* what) {
  cvec v(count);
  for (std::size_t i = 0; i < count; ++i) {
    double re, im;
    if (!(is >> re >> im))
      throw std::runtime_error(std::string("instance parse: bad ") + what);
    v[i] = cplx(re, im);
  }
  return v;
}

}  // namespace

RowSelection make_row_selection(std::size_t n, std::size_t m,
                                std::uint64_t seed) {
  if (m == 0 || m > n)
    throw std::invalid_argument("row selection needs 1 <= m <= n");
  Rng rng(seed);
  RowSelection sel;
  sel.n = n;
  sel.omega = rng.sample_one_based(n, m);
  return sel;
}

RowSelection make_row_selection(std::size_t n, std::vector<std::size_t> rows) {
  std::sort(rows.begin(), rows.end());
  validate_selection(n, rows);
  RowSelection sel;
  sel.n = n;
  sel.omega = std::move(rows);
  return sel;
}

SensingOperator::SensingOperator(StructuredUnitary unitary,
                                 RowSelection selection)
    : unitary_(std::move(unitary)), selection_(std::move(selection)) {
  if (selection_.n != unitary_.size())
    throw std::invalid_argument("row selection size does not match transform");
  validate_selection(selection_.n, selection_.omega);
}

cvec SensingOperator::apply(const cvec& x, FlopCounter* fc) const {
  if (x.size() != n()) throw std::invalid_argument("apply: length mismatch");
  const cvec full = unitary_.forward(x, fc);
  cvec out(m());
  for (std::size_t i = 0; i < m(); ++i)
    out[i] = full[selection_.omega[i] - 1];
  return out;
}

cvec SensingOperator::apply_adjoint(const cvec& r, FlopCounter* fc) const {
  if (r.size() != m())
    throw std::invalid_argument("apply_adjoint: length mismatch");
  cvec scattered(n(), cplx(0.0));
  for (std::size_t i = 0; i < m(); ++i)
    scattered[selection_.omega[i] - 1] = r[i];
  return unitary_.adjoint(scattered, fc);
}

cvec SensingOperator::column(std::size_t j) const {
  if (j < 1 || j > n()) throw std::invalid_argument("column: index out of range");
  cvec out(m());
  for (std::size_t i = 0; i < m(); ++i)
    out[i] = unitary_.entry(selection_.omega[i], j);
  return out;
}

ProblemInstance make_instance(const SensingOperator& op, std::size_t k,
                              double noise_stddev, std::uint64_t seed) {
  if (k >= op.m())
    throw std::invalid_argument("sparsity k must be below the row count m");
  if (noise_stddev < 0.0)
    throw std::invalid_argument("noise stddev must be non-negative");

  Rng rng(seed);
  ProblemInstance inst;
  inst.kind = op.unitary().kind();
  inst.n = op.n();
  inst.m = op.m();
  inst.k = k;
  inst.seed = seed;
  inst.omega = op.selection().omega;

  inst.x_true.assign(inst.n, cplx(0.0));
  if (k > 0) {
    const std::vector<std::size_t> support = rng.sample_one_based(inst.n, k);
    for (std::size_t idx : support)
      inst.x_true[idx - 1] = rng.next_complex_gaussian();
  }

  inst.noise.assign(inst.m, cplx(0.0));
  if (noise_stddev > 0.0) {
    // next_complex_gaussian has per-component stddev 1/sqrt(2)
    const double scale = noise_stddev * std::sqrt(2.0);
    for (std::size_t i = 0; i < inst.m; ++i)
      inst.noise[i] = rng.next_complex_gaussian() * scale;
  }

  inst.y = op.apply(inst.x_true);
  for (std::size_t i = 0; i < inst.m; ++i) inst.y[i] += inst.noise[i];
  return inst;
}

SensingOperator make_operator(const ProblemInstance& inst) {
  return SensingOperator(StructuredUnitary(inst.kind, inst.n),
                         make_row_selection(inst.n, inst.omega));
}

void save_instance(const ProblemInstance& inst, std::ostream& os) {
  os << inst.n << ' ' << inst.m << ' ' << inst.k << ' ' << inst.seed << ' '
     << to_string(inst.kind) << '\n';
  for (std::size_t i = 0; i < inst.omega.size(); ++i)
    os << (i ? " " : "") << inst.omega[i];
  os << '\n';
  append_pairs(os, inst.x_true);
  append_pairs(os, inst.y);
}

ProblemInstance load_instance(std::istream& is) {
  ProblemInstance inst;
  std::string kind;
  if (!(is >> inst.n >> inst.m >> inst.k >> inst.seed >> kind))
    throw std::runtime_error("instance parse: bad header");
  inst.kind = parse_kind(kind);
  if (inst.n == 0 || inst.m == 0 || inst.m > inst.n)
    throw std::runtime_error("instance parse: bad dimensions");
  inst.omega.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i)
    if (!(is >> inst.omega[i]))
      throw std::runtime_error("instance parse: bad row indices");
  inst.x_true = read_pairs(is, inst.n, "x_true");
  inst.y = read_pairs(is, inst.m, "y");

  // the stored measurement already contains the noise; recover it so the
  // loaded instance satisfies y = Phi x + noise like a freshly built one
  const SensingOperator op = make_operator(inst);
  const cvec clean = op.apply(inst.x_true);
  inst.noise.resize(inst.m);
  for (std::size_t i = 0; i < inst.m; ++i)
    inst.noise[i] = inst.y[i] - clean[i];
  return inst;
}

}  // namespace fastmp
