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


#include "qdisc/numeric.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"

namespace qdisc {
namespace {

TEST(CompensatedSumTest, RecoversCancelledTerms) {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

TEST(PairwiseSumTest, OrderFixedAndAccurate) {
  std::vector<double> v(100001, 0.1);
  const double s = pairwise_sum(v);
  EXPECT_NEAR(s, 10000.1, 1e-9);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(SampleStatsTest, KnownValues) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const SampleStats s = sample_stats(v);
  EXPECT_DOUBLE_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std_dev, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_NEAR(s.std_error, std::sqrt(5.0 / 3.0) / 2.0, 1e-15);
}

}  // namespace
}  // namespace qdisc
