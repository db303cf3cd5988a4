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

#include "fastmp/types.hpp"

#include <cmath>
#include <stdexcept>

namespace fastmp {

const char* to_string(TransformKind kind) noexcept {
  return kind == TransformKind::Fourier ? "fourier" : "hadamard";
}

TransformKind parse_kind(const std::string& name) {
  if (name == "fourier") return TransformKind::Fourier;
  if (name == "hadamard") return TransformKind::Hadamard;
  throw std::invalid_argument("unknown transform kind: " + name);
}

double l2_norm(const cvec& v) noexcept {
  double s = 0.0;
  for (const cplx& z : v) s += z.real() * z.real() + z.imag() * z.imag();
  return std::sqrt(s);
}

double l2_distance(const cvec& a, const cvec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("l2_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx d = a[i] - b[i];
    s += d.real() * d.real() + d.imag() * d.imag();
  }
  return std::sqrt(s);
}

}  // namespace fastmp
