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

#include "gtest/gtest.h"
#include "qdisc/errors.h"
#include "qdisc/objectives.h"
#include "qdisc/optimal.h"
#include "reference.h"

namespace qdisc {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ProblemTest, RejectsOutOfRangeParameters) {
  EXPECT_THROW(DiscriminationProblem(0.0, 0.5), ValidationError);
  EXPECT_THROW(DiscriminationProblem(0.6, 0.5), ValidationError);
  EXPECT_THROW(DiscriminationProblem(0.3, -0.1), ValidationError);
  EXPECT_THROW(DiscriminationProblem(0.3, 1.1), ValidationError);
  EXPECT_THROW(DiscriminationProblem(0.3, std::nan("")), ValidationError);
  EXPECT_NO_THROW(DiscriminationProblem(0.5, 1.0));
}

TEST(ProblemTest, StateVectors) {
  {
    const auto [s0, s1] = state_vectors(DiscriminationProblem(0.5, 1.0));
    EXPECT_NEAR(s0.x, s1.x, 1e-15);
    EXPECT_NEAR(s0.y, s1.y, 1e-15);
  }
  {
    const DiscriminationProblem p(0.5, 0.0);
    EXPECT_NEAR(p.angle(), kPi / 2, 1e-15);
    const auto [s0, s1] = state_vectors(p);
    EXPECT_NEAR(dot(s0, s1), 0.0, 1e-15);
  }
  {
    const DiscriminationProblem p(0.3, 0.6);
    EXPECT_NEAR(p.angle(), 0.927295218001612, 1e-12);
    const auto [s0, s1] = state_vectors(p);
    EXPECT_NEAR(dot(s0, s1), 0.6, 1e-15);
    EXPECT_NEAR(dot(s0, s0), 1.0, 1e-15);
  }
}

TEST(ProblemTest, NotTooSkewedBoundary) {
  EXPECT_TRUE(DiscriminationProblem(0.5, 0.99).not_too_skewed());
  EXPECT_FALSE(DiscriminationProblem(0.1, 0.9).not_too_skewed());
  EXPECT_TRUE(DiscriminationProblem(0.2, 0.5).not_too_skewed());  // 0.25 >= 0.25
}

TEST(PovmTest, ValidatesPsdAndCompleteness) {
  EXPECT_THROW(Povm({PovmElement::rank_one(1.0, 0.0)}), ValidationError);
  EXPECT_THROW(Povm({PovmElement(Sym2{1.5, 0.0, 1.0}), PovmElement(Sym2{-0.5, 0.0, 0.0})}),
               ValidationError);
  EXPECT_THROW(Povm(std::vector<PovmElement>{}), ValidationError);
  EXPECT_THROW(PovmElement::rank_one(-0.1, 0.0), ValidationError);
  EXPECT_NO_THROW(
      Povm({PovmElement::rank_one(1.0, 0.3), PovmElement::rank_one(1.0, 0.3 + kPi / 2)}));
}

TEST(PovmTest, RankOneAngleIsWrapped) {
  const PovmElement e = PovmElement::rank_one(0.5, -0.25);
  ASSERT_TRUE(e.rank1().has_value());
  EXPECT_NEAR(e.rank1()->angle, kPi - 0.25, 1e-15);
  EXPECT_NEAR(e.matrix().trace(), 0.5, 1e-15);
}

TEST(OutcomeDistributionTest, IdentityGivesPriorBack) {
  const DiscriminationProblem p(0.3, 0.6);
  const OutcomeDistribution d = outcome_distribution(p, Povm::identity());
  ASSERT_EQ(d.entries.size(), 1u);
  EXPECT_NEAR(d.entries[0].probability, 1.0, 1e-15);
  EXPECT_NEAR(d.entries[0].posterior, 0.3, 1e-15);
  EXPECT_NEAR(expected_objective(d, bhattacharyya), bhattacharyya(0.3), 1e-15);
}

TEST(OutcomeDistributionTest, OrthogonalStatesAreResolved) {
  for (double pi : {0.1, 0.25, 0.5}) {
    const DiscriminationProblem p(pi, 0.0);
    // s0 at -pi/4, s1 at +pi/4
    const Povm povm({PovmElement::rank_one(1.0, -kPi / 4), PovmElement::rank_one(1.0, kPi / 4)});
    const OutcomeDistribution d = outcome_distribution(p, povm);
    ASSERT_EQ(d.entries.size(), 2u);
    EXPECT_NEAR(d.entries[0].probability, 1.0 - pi, 1e-15);
    EXPECT_EQ(d.entries[0].posterior, 0.0);
    EXPECT_NEAR(d.entries[1].probability, pi, 1e-15);
    EXPECT_EQ(d.entries[1].posterior, 1.0);
    EXPECT_EQ(expected_objective(d, error_probability), 0.0);
  }
}

TEST(OutcomeDistributionTest, ExpectedObjectiveOfGivenEntries) {
  OutcomeDistribution d;
  d.entries = {{0.5, 0.2, 0}, {0.5, 0.8, 1}};
  EXPECT_NEAR(expected_objective(d, error_probability), 0.2, 1e-15);
  EXPECT_NEAR(d.total_probability(), 1.0, 1e-15);
  EXPECT_NEAR(d.mean_posterior(), 0.5, 1e-15);
}

TEST(OutcomeDistributionTest, MatchesReferenceOnRandomMeasurements) {
  for (double pi : {0.05, 0.3, 0.5}) {
    for (double c : {0.0, 0.4, 0.9}) {
      const DiscriminationProblem p(pi, c);
      for (double a : {0.1, 0.7, 1.3, 2.9}) {
        const Povm povm({PovmElement::rank_one(0.6, a), PovmElement::rank_one(0.4, a),
                         PovmElement::rank_one(1.0, a + kPi / 2)});
        std::vector<std::array<double, 3>> m;
        for (const auto& e : povm.elements()) m.push_back({e.matrix().xx, e.matrix().xy, e.matrix().yy});
        const auto want = reference::outcomes(pi, c, m);
        const auto got = outcome_distribution(p, povm);
        ASSERT_EQ(got.entries.size(), want.size());
        for (std::size_t j = 0; j < want.size(); ++j) {
          EXPECT_NEAR(got.entries[j].probability, static_cast<double>(want[j].probability), 1e-14);
          EXPECT_NEAR(got.entries[j].posterior, static_cast<double>(want[j].posterior), 1e-13);
        }
      }
    }
  }
}

TEST(OutcomeDistributionTest, MinErrorPosteriorsAreComplementary) {
  const DiscriminationProblem p(0.3, 0.6);
  const OutcomeDistribution d = min_error_projection(p).distribution;
  ASSERT_EQ(d.entries.size(), 2u);
  EXPECT_NEAR(d.entries[0].posterior + d.entries[1].posterior, 1.0, 1e-12);
}

TEST(EligibilityTest, KnownMeasurements) {
  const DiscriminationProblem p(0.3, 0.6);
  EXPECT_TRUE(is_eligible(p, min_error_projection(p).povm));
  EXPECT_TRUE(is_eligible(p, unambiguous_povm(p).povm));
  // One basis vector strictly between the states.
  const Povm between({PovmElement::rank_one(1.0, 0.0), PovmElement::rank_one(1.0, kPi / 2)});
  EXPECT_FALSE(is_eligible(p, between));
}

}  // namespace
}  // namespace qdisc
