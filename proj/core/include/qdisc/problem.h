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

#ifndef QDISC_PROBLEM_H_
#define QDISC_PROBLEM_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qdisc/linalg.h"

namespace qdisc {

inline constexpr double kPovmTolerance = 1e-9;
inline constexpr double kDropProbability = 1e-12;
inline constexpr double kEligibilityTolerance = 1e-8;
// Transition probabilities below this are rounding residue of an exact zero.
inline constexpr double kZeroTransition = 1e-20;

// Two pure states with prior pi = Pr(X = 1) <= 1/2 and real overlap c.
class DiscriminationProblem {
 public:
  DiscriminationProblem(double prior, double overlap);

  double prior() const { return prior_; }
  double overlap() const { return overlap_; }
  double angle() const;  // theta with cos(theta) = c

  // pi / (1 - pi) >= c^2
  bool not_too_skewed() const;

 private:
  double prior_;
  double overlap_;
};

// s0 and s1 at angles -theta/2 and +theta/2.
std::pair<Vec2, Vec2> state_vectors(const DiscriminationProblem& problem);

struct Rank1 {
  double weight = 0.0;
  double angle = 0.0;  // in [0, pi)
};

class PovmElement {
 public:
  explicit PovmElement(const Sym2& matrix);
  static PovmElement rank_one(double weight, double angle);

  const Sym2& matrix() const { return matrix_; }
  const std::optional<Rank1>& rank1() const { return rank1_; }

 private:
  Sym2 matrix_;
  std::optional<Rank1> rank1_;
};

// Validated on construction: every element PSD and the elements sum to I.
class Povm {
 public:
  explicit Povm(std::vector<PovmElement> elements, double tol = kPovmTolerance);
  static Povm identity();

  std::span<const PovmElement> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const PovmElement& operator[](std::size_t j) const { return elements_[j]; }

 private:
  std::vector<PovmElement> elements_;
};

struct Outcome {
  double probability = 0.0;
  double posterior = 0.0;  // Pr(X = 1 | outcome)
  std::size_t element = 0;  // index into the generating POVM
};

struct OutcomeDistribution {
  std::vector<Outcome> entries;

  double total_probability() const;
  double mean_posterior() const;
};

// q[j] = {<s0|E_j|s0>, <s1|E_j|s1>} for every element, including empty ones.
std::vector<std::array<double, 2>> transition_probabilities(const DiscriminationProblem& problem,
                                                            const Povm& povm);

OutcomeDistribution outcome_distribution(const DiscriminationProblem& problem, const Povm& povm);

template <typename G>
double expected_objective(const OutcomeDistribution& dist, const G& g) {
  double total = 0.0;
  for (const Outcome& o : dist.entries) total += o.probability * g(o.posterior);
  return total;
}

bool is_eligible(const DiscriminationProblem& problem, const Povm& povm,
                 double tol = kEligibilityTolerance);

}  // namespace qdisc

#endif  // QDISC_PROBLEM_H_
