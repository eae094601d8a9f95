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

#include "qdisc/optimal.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "qdisc/errors.h"

namespace qdisc {
namespace {

constexpr double kQuarterTurn = std::numbers::pi / 2.0;

OptimalSolution finish(const DiscriminationProblem& problem, Povm povm, Regime regime) {
  OutcomeDistribution dist = outcome_distribution(problem, povm);
  return OptimalSolution{std::move(povm), 0.0, std::move(dist), regime};
}

OptimalSolution trivial(const DiscriminationProblem& problem) {
  return finish(problem, Povm::identity(), Regime::kTrivial);
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kProjection:
      return "projection";
    case Regime::kThreeElement:
      return "three-element";
    case Regime::kVerySkewedProjection:
      return "very-skewed-projection";
    case Regime::kTrivial:
      return "trivial";
  }
  return "projection";
}

double helstrom(const DiscriminationProblem& problem) {
  const double pi = problem.prior();
  const double c = problem.overlap();
  const double x = 4.0 * pi * (1.0 - pi) * c * c;
  return 0.5 * x / (1.0 + std::sqrt(1.0 - x));
}

double bhattacharyya_floor(const DiscriminationProblem& problem) {
  return bhattacharyya(problem.prior()) * problem.overlap();
}

OptimalSolution min_error_projection(const DiscriminationProblem& problem) {
  if (problem.overlap() >= 1.0) {
    OptimalSolution s = trivial(problem);
    s.value = expected_objective(s.distribution, error_probability);
    return s;
  }
  const double theta = problem.angle();
  const double phi = std::atan2((1.0 - 2.0 * problem.prior()) * std::cos(theta), std::sin(theta));
  Povm povm({PovmElement::rank_one(1.0, -0.5 * kQuarterTurn + 0.5 * phi),
             PovmElement::rank_one(1.0, 0.5 * kQuarterTurn + 0.5 * phi)});
  OptimalSolution s = finish(problem, std::move(povm), Regime::kProjection);
  s.value = expected_objective(s.distribution, error_probability);
  return s;
}

OptimalSolution unambiguous_povm(const DiscriminationProblem& problem) {
  const double pi = problem.prior();
  const double c = problem.overlap();
  if (c >= 1.0) {
    OptimalSolution s = trivial(problem);
    s.value = expected_objective(s.distribution, ambiguity);
    return s;
  }
  const double theta = problem.angle();
  const double sin2 = std::sin(theta) * std::sin(theta);
  // psi0 is orthogonal to s1 and certifies X = 0; psi1 likewise for X = 1.
  const double psi0 = 0.5 * theta - kQuarterTurn;
  const double psi1 = kQuarterTurn - 0.5 * theta;

  if (!problem.not_too_skewed()) {
    Povm povm({PovmElement::rank_one(1.0, psi0), PovmElement::rank_one(1.0, 0.5 * theta)});
    OptimalSolution s = finish(problem, std::move(povm), Regime::kVerySkewedProjection);
    s.value = expected_objective(s.distribution, ambiguity);
    return s;
  }

  const double a0 = std::max(0.0, (1.0 - std::sqrt(pi / (1.0 - pi)) * c) / sin2);
  const double a1 = std::max(0.0, (1.0 - std::sqrt((1.0 - pi) / pi) * c) / sin2);
  const PovmElement e0 = PovmElement::rank_one(a0, psi0);
  const PovmElement e1 = PovmElement::rank_one(a1, psi1);
  const Sym2 rest = Sym2::identity() - e0.matrix() - e1.matrix();
  const auto eig = rest.eigenvalues();
  if (eig[0] < -1e-10) {
    throw NumericalError("inconclusive element of the unambiguous measurement is not PSD");
  }
  const PovmElement e2 = PovmElement::rank_one(std::max(0.0, eig[1]), rest.principal_angle());
  OptimalSolution s = finish(problem, Povm({e0, e1, e2}), Regime::kThreeElement);
  s.value = expected_objective(s.distribution, ambiguity);
  return s;
}

OptimalSolution theorem_pure_value(const DiscriminationProblem& problem, const ObjectiveFn& g) {
  return theorem_pure_value(problem, g, classify(g));
}

OptimalSolution theorem_pure_value(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                   ConvexityClass cls) {
  const double b_star = bhattacharyya_floor(problem);
  switch (cls) {
    case ConvexityClass::kConvexAdmissible: {
      OptimalSolution s = min_error_projection(problem);
      s.value = g(inverse_bhattacharyya(b_star));
      return s;
    }
    case ConvexityClass::kConcaveAdmissible: {
      if (!problem.not_too_skewed()) {
        throw OutOfScopeError("very-skewed",
                              "concave objective on a very skewed problem (pi/(1-pi) < c^2)");
      }
      OptimalSolution s = unambiguous_povm(problem);
      s.value = 2.0 * b_star * g.value_at_half();
      return s;
    }
    case ConvexityClass::kNeither:
      break;
  }
  throw UnsupportedObjectiveError("objective '" + g.name() +
                                  "' is neither convex- nor concave-admissible");
}

OptimalSolution minimax_value(double overlap, const ObjectiveFn& g) {
  return theorem_pure_value(DiscriminationProblem(0.5, overlap), g);
}

}  // namespace qdisc
