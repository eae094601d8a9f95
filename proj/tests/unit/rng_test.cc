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


#include "qdisc/rng.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"

namespace qdisc {
namespace {

// Known-answer vectors published with the Random123 distribution.
TEST(PhiloxTest, KnownAnswerZero) {
  const auto out = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(PhiloxTest, KnownAnswerOnes) {
  const auto out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(PhiloxTest, KnownAnswerPi) {
  const auto out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(RandomStreamTest, UniformRange) {
  RandomStream r(7, 3);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(r.blocks_drawn(), 50000u);
}

TEST(RandomStreamTest, StreamsAreReproducibleAndDistinct) {
  RandomStream a(42, 5), b(42, 5), c(42, 6), d(43, 5);
  std::set<double> seen;
  for (int i = 0; i < 16; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    seen.insert(x);
    seen.insert(c.uniform());
    seen.insert(d.uniform());
  }
  EXPECT_EQ(seen.size(), 48u);
}

TEST(RandomStreamTest, MeanAndVariance) {
  RandomStream r(1, 0);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    s += u;
    s2 += u * u;
  }
  const double mean = s / n;
  EXPECT_NEAR(mean, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(s2 / n - mean * mean, 1.0 / 12.0, 2e-3);
}

}  // namespace
}  // namespace qdisc
