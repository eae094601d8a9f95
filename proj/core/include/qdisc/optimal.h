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

#ifndef QDISC_OPTIMAL_H_
#define QDISC_OPTIMAL_H_

#include <string_view>

#include "qdisc/objectives.h"
#include "qdisc/problem.h"

namespace qdisc {

enum class Regime {
  kProjection,             // two-outcome projection
  kThreeElement,           // two certain outcomes plus one inconclusive
  kVerySkewedProjection,   // projection with one certain outcome
  kTrivial,                // identical states; only the identity is left
};

std::string_view to_string(Regime r);

struct OptimalSolution {
  Povm povm;
  double value = 0.0;
  OutcomeDistribution distribution;
  Regime regime = Regime::kProjection;
};

// Minimum error probability, 1/2 [1 - sqrt(1 - 4 pi (1 - pi) c^2)].
double helstrom(const DiscriminationProblem& problem);

// b(pi) c: the value every eligible measurement attains for b.
double bhattacharyya_floor(const DiscriminationProblem& problem);

// Error-optimal projection; value is its error probability.
OptimalSolution min_error_projection(const DiscriminationProblem& problem);

// Optimal unambiguous measurement; value is the inconclusive probability.
// Very skewed problems get the projection with a single certain outcome.
OptimalSolution unambiguous_povm(const DiscriminationProblem& problem);

// Optimal expected objective for an admissible g. Throws
// UnsupportedObjectiveError when g is neither convex- nor concave-admissible
// and OutOfScopeError("very-skewed") for concave g on very skewed problems.
OptimalSolution theorem_pure_value(const DiscriminationProblem& problem, const ObjectiveFn& g);
OptimalSolution theorem_pure_value(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                   ConvexityClass cls);

// Minimax rule: the Bayes solution under the uniform prior.
OptimalSolution minimax_value(double overlap, const ObjectiveFn& g);

}  // namespace qdisc

#endif  // QDISC_OPTIMAL_H_
