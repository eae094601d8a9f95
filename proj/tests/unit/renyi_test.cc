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


#include "qdisc/renyi.h"

#include <cmath>
#include <limits>
#include <vector>

#include "gtest/gtest.h"
#include "qdisc/errors.h"
#include "reference.h"

namespace qdisc {
namespace {

using reference::Rational;

double to_double(const Rational& r) { return static_cast<double>(r); }

TEST(PkPolynomialTest, SmallOrdersVanish) {
  for (int k = 0; k <= 2; ++k) {
    const PkPolynomial pk(k);
    for (const BigInt& c : pk.coefficients()) EXPECT_EQ(c, 0) << "k=" << k;
    for (double a : {0.0, 0.3, 1.0, 2.0, 7.5}) {
      EXPECT_LE(std::abs(pk(a)), 1e-15 * pk.scale(a)) << k << " " << a;
    }
  }
}

TEST(PkPolynomialTest, KnownValues) {
  EXPECT_EQ(pk_eval(3, 2.0), 20.0);
  EXPECT_EQ(pk_eval(5, 1.0), 0.0);
  EXPECT_EQ(PkPolynomial(3).exact(2), 20);
  EXPECT_GE(pk_eval(3, 0.0), 0.0);
}

TEST(PkPolynomialTest, MatchesExactRationalsAtIntegers) {
  for (int k = 0; k <= 40; ++k) {
    const PkPolynomial pk(k);
    for (long a : {0L, 1L, 2L, 3L, 7L, 10L}) {
      const Rational want = reference::pk_exact(k, Rational(a));
      EXPECT_EQ(Rational(pk.exact(a)), want) << "k=" << k << " a=" << a;
    }
  }
}

TEST(PkPolynomialTest, FloatingEvaluationsMatchExactRationals) {
  for (int k = 3; k <= 40; ++k) {
    const PkPolynomial pk(k);
    for (int num : {1, 3, 5, 9, 17, 33, 77}) {
      const Rational a(num, 8);
      const double ad = static_cast<double>(a);
      const double want = to_double(reference::pk_exact(k, a));
      const double scale = pk.scale(ad);
      EXPECT_NEAR(pk(ad), want, 1e-14 * scale) << k << " " << ad;
      EXPECT_NEAR(pk.eval_expanded(ad), want, 1e-15 * std::abs(want) + 1e-300) << k << " " << ad;
      EXPECT_NEAR((ad - 1.0) * pk.eval_quotient(ad), want, 1e-13 * std::abs(want) + 1e-300)
          << k << " " << ad;
    }
  }
}

TEST(PkPolynomialTest, RootAtOne) {
  for (int k = 3; k <= 40; ++k) {
    const PkPolynomial pk(k);
    EXPECT_EQ(pk.exact(1), 0);
    // Synthetic division left no remainder, so deg Q = deg P - 1.
    EXPECT_EQ(pk.quotient().size() + 1, pk.coefficients().size());
  }
}

TEST(PkPolynomialTest, RejectsNegativeOrder) { EXPECT_THROW(PkPolynomial(-1), ValidationError); }

TEST(PhiTest, ZeroAtOriginAndNonnegative) {
  for (double a : {0.0, 0.25, 1.0, 2.0, 5.0}) {
    EXPECT_NEAR(phi_eval(a, 0.0), 0.0, 1e-15);
    for (double t : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      EXPECT_GE(phi_eval(a, t), -1e-12 * phi_scale(a, t)) << a << " " << t;
    }
  }
}

TEST(PhiTest, AgreesWithTruncatedSeries) {
  const double t = 0.1;
  for (double a : {0.5, 2.0, 3.0}) {
    double series = 0.0, term_scale = 1.0;
    for (int k = 0; k <= 20; ++k) {
      series += to_double(reference::pk_exact(k, Rational(a))) * term_scale;
      term_scale *= t / (k + 1);
    }
    EXPECT_NEAR(phi_eval(a, t), series, 1e-10) << a;
  }
}

TEST(PhiTest, OverflowIsReported) { EXPECT_THROW(phi_eval(400.0, 5.0), NumericalError); }

TEST(PhiSeriesTest, MatchesExactTaylorCoefficients) {
  for (double a : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    const std::vector<double> coeffs = phi_series_coeffs(a, 25);
    double factorial = 1.0;
    for (int k = 0; k <= 25; ++k) {
      if (k > 0) factorial *= k;
      const Rational exact = reference::phi_taylor_exact(k, Rational(a));
      // Both oracles agree on what the coefficients are.
      EXPECT_EQ(exact, reference::pk_exact(k, Rational(a))) << k << " " << a;
      const double want = to_double(exact) / factorial;
      // At a root the float value is rounding noise on the size of the terms.
      const double noise = PkPolynomial(k).scale(a) / factorial;
      EXPECT_NEAR(coeffs[k], want, 1e-13 * (std::abs(want) + noise)) << k << " " << a;
    }
  }
}

TEST(PhiSeriesTest, LowOrdersVanishAndRootAtOne) {
  const std::vector<double> c = phi_series_coeffs(2.0, 10);
  EXPECT_NEAR(c[0], 0.0, 1e-30);
  EXPECT_NEAR(c[1], 0.0, 1e-30);
  EXPECT_NEAR(c[2], 0.0, 1e-30);
  EXPECT_NEAR(c[3], 10.0 / 3.0, 1e-14);
  const std::vector<double> one = phi_series_coeffs(1.0, 10);
  for (int k = 3; k <= 10; ++k) EXPECT_NEAR(one[k], 0.0, 1e-30) << k;
}

TEST(VerifyPkTest, DeskScaleGrid) {
  std::vector<double> grid = reference::linspace(0.0, 10.0, 401);
  const PkReport r = verify_pk_nonneg(40, grid, /*keep_rows=*/true);
  EXPECT_TRUE(r.ok) << "worst k=" << r.worst_k << " alpha=" << r.worst_alpha;
  EXPECT_EQ(r.checked, 38u * grid.size());
  EXPECT_EQ(r.rows.size(), r.checked);
  for (const PkRow& row : r.rows) {
    if (row.alpha == 1.0) EXPECT_EQ(row.value, 0.0) << row.k;
  }
  EXPECT_THROW(verify_pk_nonneg(2, grid), ValidationError);
}

TEST(RenyiDerivativeRatioTest, MatchesLongDoubleReference) {
  for (double a : {0.0, 0.25, 0.5, 0.9, 1.0, 1.5, 2.0, 10.0,
                   std::numeric_limits<double>::infinity()}) {
    for (double p : reference::linspace(0.01, 0.49, 49)) {
      if (a == 0.0) continue;  // no derivative for the indicator
      const double want = static_cast<double>(reference::renyi_ratio(a, p));
      EXPECT_NEAR(renyi_derivative_ratio(a, p), want, 1e-9 * (1.0 + std::abs(want)))
          << a << " " << p;
    }
  }
}

TEST(RelativeConvexityTest, OrderedFamily) {
  const std::vector<double> grid = reference::linspace(0.001, 0.499, 499);
  EXPECT_TRUE(verify_relative_convexity(2.0, 0.5, grid));
  EXPECT_TRUE(verify_relative_convexity(1.3, 1.3, grid));
  EXPECT_FALSE(verify_relative_convexity(0.5, 2.0, grid));
  EXPECT_TRUE(verify_relative_convexity(std::numeric_limits<double>::infinity(), 1.0, grid));
  for (double a : {1.0, 1.5, 4.0}) EXPECT_TRUE(verify_relative_convexity(a, 0.5, grid)) << a;
}

}  // namespace
}  // namespace qdisc
