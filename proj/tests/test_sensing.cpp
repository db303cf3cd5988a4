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

#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "fastmp/random.hpp"
#include "fastmp/sensing.hpp"
#include "oracles.hpp"

using namespace fastmp;

TEST_CASE("row selections are sorted, distinct, reproducible") {
  const RowSelection a = make_row_selection(128, 32, 7);
  const RowSelection b = make_row_selection(128, 32, 7);
  const RowSelection c = make_row_selection(128, 32, 8);
  REQUIRE(a.m() == 32);
  CHECK(a.omega == b.omega);
  CHECK(a.omega != c.omega);
  CHECK(std::is_sorted(a.omega.begin(), a.omega.end()));
  for (std::size_t i = 1; i < a.omega.size(); ++i)
    CHECK(a.omega[i] > a.omega[i - 1]);
  CHECK(a.omega.front() >= 1);
  CHECK(a.omega.back() <= 128);

  CHECK_THROWS(make_row_selection(16, 0, 1));
  CHECK_THROWS(make_row_selection(16, 17, 1));
  CHECK_THROWS(make_row_selection(16, {3, 3, 5}));
  CHECK_THROWS(make_row_selection(16, {0, 4}));
  CHECK_THROWS(make_row_selection(16, {4, 17}));
  const RowSelection e = make_row_selection(16, {9, 2, 5});
  CHECK(e.omega == std::vector<std::size_t>{2, 5, 9});
}

TEST_CASE("partial operators match the dense restriction") {
  Rng rng(31);
  for (TransformKind kind : {TransformKind::Fourier, TransformKind::Hadamard}) {
    const std::size_t n = 32, m = 8;
    const StructuredUnitary u(kind, n);
    const oracle::cvec d =
        kind == TransformKind::Fourier ? oracle::dense_fourier(n)
                                       : oracle::dense_hadamard(n);
    const RowSelection sel = make_row_selection(n, m, 5);
    const SensingOperator op(StructuredUnitary(kind, n), sel);
    REQUIRE(op.m() == m);

    cvec x(n), y(m);
    for (cplx& z : x) z = rng.next_complex_gaussian();
    for (cplx& z : y) z = rng.next_complex_gaussian();

    CHECK(l2_distance(op.apply(x), oracle::partial_apply(d, n, sel.omega, x)) <
          1e-10 * l2_norm(x));
    CHECK(l2_distance(op.apply_adjoint(y),
                      oracle::partial_adjoint(d, n, sel.omega, y)) <
          1e-10 * l2_norm(y));

    for (std::size_t j : {std::size_t(1), std::size_t(17), n}) {
      const cvec col = op.column(j);
      REQUIRE(col.size() == m);
      for (std::size_t i = 0; i < m; ++i)
        CHECK(std::abs(col[i] - d[(sel.omega[i] - 1) * n + (j - 1)]) < 1e-12);
    }
  }
}

TEST_CASE("instances are reproducible and correctly shaped") {
  const std::size_t n = 64, m = 16, k = 3;
  const SensingOperator op(StructuredUnitary(TransformKind::Fourier, n),
                           make_row_selection(n, m, 2));
  const ProblemInstance a = make_instance(op, k, 0.0, 9);
  const ProblemInstance b = make_instance(op, k, 0.0, 9);
  CHECK(a.y == b.y);
  CHECK(a.x_true == b.x_true);

  std::size_t nonzeros = 0;
  for (const cplx& z : a.x_true)
    if (z != cplx(0.0)) ++nonzeros;
  CHECK(nonzeros == k);

  // noiseless means y is exactly the image of the signal
  const cvec ax = op.apply(a.x_true);
  CHECK(l2_distance(a.y, ax) == 0.0);
  for (const cplx& z : a.noise) CHECK(z == cplx(0.0));

  const ProblemInstance c = make_instance(op, k, 0.5, 9);
  CHECK(l2_distance(c.y, op.apply(c.x_true)) > 0.0);
  CHECK(c.x_true == a.x_true);  // same seed, same support and coefficients

  CHECK_THROWS(make_instance(op, m, 0.0, 1));  // k must stay below m
  CHECK_THROWS(make_instance(op, k, -1.0, 1));
  CHECK(make_instance(op, 0, 0.0, 1).x_true == cvec(n, cplx(0.0)));
}

TEST_CASE("instance files round trip exactly") {
  const std::size_t n = 32, m = 8, k = 2;
  const SensingOperator op(StructuredUnitary(TransformKind::Hadamard, n),
                           make_row_selection(n, m, 4));
  const ProblemInstance inst = make_instance(op, k, 0.25, 77);

  std::ostringstream os;
  save_instance(inst, os);
  std::istringstream is(os.str());
  const ProblemInstance back = load_instance(is);

  CHECK(back.kind == inst.kind);
  CHECK(back.n == inst.n);
  CHECK(back.m == inst.m);
  CHECK(back.k == inst.k);
  CHECK(back.seed == inst.seed);
  CHECK(back.omega == inst.omega);
  CHECK(back.x_true == inst.x_true);
  CHECK(back.y == inst.y);
  // noise is reconstructed as y - (sensing of x_true)
  CHECK(l2_distance(back.noise, inst.noise) < 1e-12);

  std::ostringstream os2;
  save_instance(back, os2);
  CHECK(os.str() == os2.str());

  std::istringstream truncated(os.str().substr(0, os.str().size() / 2));
  CHECK_THROWS(load_instance(truncated));
  std::istringstream garbage("not an instance\n");
  CHECK_THROWS(load_instance(garbage));
}
