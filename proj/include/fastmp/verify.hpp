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

#include "fastmp/types.hpp"

namespace fastmp {

struct VerifyOptions {
  std::size_t max_n = 64;     // largest size checked (dense work is O(N^4))
  std::uint64_t seed = 1;     // for the randomized kernel/round-trip checks
  // corrupt one entry of the first materialized matrix before checking; the
  // suite must then fail and name the violated property.  Exercises the
  // failure path end to end.
  bool corrupt = false;
};

// Runs the structural checks (entry modulus, constant first column,
// multiplicative closure, unitarity), the permutation property for every
// lambda, the closed-form index maps against brute force, and the kernel
// invariants, for every admissible size up to max_n of both kinds.  Prints
// one line per check group.  Returns true when everything passed.
bool run_verification(const VerifyOptions& opts, std::ostream& log);

}  // namespace fastmp
