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
#include <cmath>

#include "doctest.h"
#include "fastmp/random.hpp"

using namespace fastmp;

TEST_CASE("generators are deterministic per seed") {
  Rng a(42), b(42), c(43);
  bool diverged = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_u64();
    CHECK(va == b.next_u64());
    if (va != c.next_u64()) diverged = true;
  }
  CHECK(diverged);
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(7, 9) == derive_seed(7, 9));
}

TEST_CASE("bounded draws stay in range") {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    CHECK(rng.next_below(7) < 7);
    CHECK(rng.next_below(1) == 0);
    const double u = rng.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sampled index sets are sorted, distinct, in range") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s = rng.sample_one_based(100, 13);
    REQUIRE(s.size() == 13);
    CHECK(std::is_sorted(s.begin(), s.end()));
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= 1);
      CHECK(s[i] <= 100);
      if (i) CHECK(s[i] > s[i - 1]);
    }
  }
  CHECK(rng.sample_one_based(5, 5).size() == 5);
  CHECK(rng.sample_one_based(5, 0).empty());
  CHECK_THROWS(rng.sample_one_based(5, 6));
}

TEST_CASE("complex gaussian has unit second moment") {
  Rng rng(123);
  double sum = 0.0;
  const int draws = 200000;
  for (int i = 0; i < draws; ++i) {
    const cplx z = rng.next_complex_gaussian();
    sum += std::norm(z);
  }
  CHECK(std::abs(sum / draws - 1.0) < 0.02);
}
