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

#include "qdisc/problem.h"

#include <cmath>
#include <numbers>
#include <string>

#include "qdisc/errors.h"
#include "qdisc/numeric.h"

namespace qdisc {

DiscriminationProblem::DiscriminationProblem(double prior, double overlap)
    : prior_(prior), overlap_(overlap) {
  if (!(prior > 0.0 && prior <= 0.5)) {
    throw ValidationError("prior must lie in (0, 1/2]; swap the state labels for priors above 1/2");
  }
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw ValidationError("overlap must lie in [0, 1]");
  }
}

double DiscriminationProblem::angle() const { return std::acos(overlap_); }

bool DiscriminationProblem::not_too_skewed() const {
  return prior_ / (1.0 - prior_) >= overlap_ * overlap_;
}

std::pair<Vec2, Vec2> state_vectors(const DiscriminationProblem& problem) {
  const double half = 0.5 * problem.angle();
  const double c = std::cos(half);
  const double s = std::sin(half);
  return {Vec2{c, -s}, Vec2{c, s}};
}

PovmElement::PovmElement(const Sym2& matrix) : matrix_(matrix) {}

PovmElement PovmElement::rank_one(double weight, double angle) {
  if (!(weight >= 0.0) || !std::isfinite(angle)) {
    throw ValidationError("rank-1 element needs a nonnegative weight and finite angle");
  }
  angle = std::fmod(angle, std::numbers::pi);
  if (angle < 0.0) angle += std::numbers::pi;
  PovmElement e(Sym2::outer(Vec2::from_angle(angle), weight));
  e.rank1_ = Rank1{weight, angle};
  return e;
}

Povm::Povm(std::vector<PovmElement> elements, double tol) : elements_(std::move(elements)) {
  if (elements_.empty()) throw ValidationError("POVM needs at least one element");
  Sym2 sum;
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const Sym2& m = elements_[j].matrix();
    if (!std::isfinite(m.xx) || !std::isfinite(m.xy) || !std::isfinite(m.yy)) {
      throw ValidationError("POVM element " + std::to_string(j) + " is not finite");
    }
    if (m.eigenvalues()[0] < -tol) {
      throw ValidationError("POVM element " + std::to_string(j) + " is not positive semidefinite");
    }
    sum += m;
  }
  if ((sum - Sym2::identity()).max_abs() > tol) {
    throw ValidationError("POVM elements do not sum to the identity");
  }
}

Povm Povm::identity() { return Povm({PovmElement(Sym2::identity())}); }

double OutcomeDistribution::total_probability() const {
  CompensatedSum s;
  for (const Outcome& o : entries) s.add(o.probability);
  return s.value();
}

double OutcomeDistribution::mean_posterior() const {
  CompensatedSum s;
  for (const Outcome& o : entries) s.add(o.probability * o.posterior);
  return s.value();
}

std::vector<std::array<double, 2>> transition_probabilities(const DiscriminationProblem& problem,
                                                            const Povm& povm) {
  const auto [s0, s1] = state_vectors(problem);
  std::vector<std::array<double, 2>> q;
  q.reserve(povm.size());
  for (const PovmElement& e : povm.elements()) {
    std::array<double, 2> row{e.matrix().form(s0), e.matrix().form(s1)};
    if (const auto& r = e.rank1()) {
      // Squaring the overlap keeps an orthogonal state at rounding^2 rather
      // than rounding, so it snaps to zero.
      const Vec2 v = Vec2::from_angle(r->angle);
      const double a0 = dot(s0, v), a1 = dot(s1, v);
      row = {r->weight * a0 * a0, r->weight * a1 * a1};
    }
    for (double& v : row) {
      if (v < kZeroTransition) v = 0.0;
    }
    q.push_back(row);
  }
  return q;
}

OutcomeDistribution outcome_distribution(const DiscriminationProblem& problem, const Povm& povm) {
  const double pi = problem.prior();
  const auto q = transition_probabilities(problem, povm);
  OutcomeDistribution dist;
  for (std::size_t j = 0; j < q.size(); ++j) {
    const double weighted1 = pi * q[j][1];
    const double qj = (1.0 - pi) * q[j][0] + weighted1;
    if (qj < kDropProbability) continue;
    dist.entries.push_back({qj, std::min(1.0, weighted1 / qj), j});
  }
  return dist;
}

bool is_eligible(const DiscriminationProblem& problem, const Povm& povm, double tol) {
  const auto [s0, s1] = state_vectors(problem);
  for (const PovmElement& e : povm.elements()) {
    const double q0 = e.matrix().form(s0);
    const double q1 = e.matrix().form(s1);
    const double x = e.matrix().form(s0, s1);
    if (std::abs(q0 * q1 - x * x) > tol || x < -tol) return false;
  }
  return true;
}

}  // namespace qdisc
