// Copyright 2026 The qdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QDISC_ORACLE_H_
#define QDISC_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qdisc/objectives.h"
#include "qdisc/problem.h"

namespace qdisc {

// Grid search over POVMs built from J - 1 free rank-1 elements (J = 2 uses
// orthogonal projections instead) plus the remainder I - sum.
struct SearchSpec {
  int outcomes = 2;
  int angle_resolution = 720;
  int weight_resolution = 64;
  int refine_iters = 3;

  // Resolutions that keep a search around a second on one core.
  static SearchSpec defaults(int outcomes);
  void validate() const;
};

struct OracleResult {
  double value = 0.0;
  Povm povm = Povm::identity();
  std::size_t evaluations = 0;
};

OracleResult brute_force_optimum(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                 const SearchSpec& spec);

// Random eligible measurements with J drawn from {2, 3, 4}.
std::vector<Povm> eligible_continuum_sample(const DiscriminationProblem& problem, std::size_t n,
                                            std::uint64_t seed = 0);

// Random POVMs with full-rank elements, E_j = S^-1/2 A_j S^-1/2 for random
// A_j = L_j L_j^T and S = sum A_j. None of them is eligible for `problem`.
std::vector<Povm> random_povm_sample(const DiscriminationProblem& problem, std::size_t n,
                                     std::uint64_t seed = 0);

}  // namespace qdisc

#endif  // QDISC_ORACLE_H_
