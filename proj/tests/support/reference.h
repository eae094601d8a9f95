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


// Test-side reference values, computed without going through the library's
// formulas: trace norms for the minimum error, exact rationals for the
// polynomial coefficients, long double closed forms for derivative ratios.

#ifndef QDISC_TESTS_SUPPORT_REFERENCE_H_
#define QDISC_TESTS_SUPPORT_REFERENCE_H_

#include <array>
#include <functional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qdisc::reference {

using Rational = boost::multiprecision::cpp_rational;

// 1/2 (1 - || (1 - pi) |s0><s0| - pi |s1><s1| ||_1) for states with overlap c.
long double min_error_trace_norm(double pi, double c);

// The polynomial as printed, term by term, plus the linear tail of the
// generating function that only reaches orders 0 and 1.
Rational pk_exact(int k, const Rational& alpha);

// k! times the t^k coefficient of the generating function, expanded from
// its exponentials.
Rational phi_taylor_exact(int k, const Rational& alpha);

// Closed-form h''/h' in long double. alpha = +inf is the min-entropy.
long double renyi_ratio(long double alpha, long double p);
long double bhattacharyya_ratio(long double p);

// Root in [0, 1/2] of sqrt(p (1 - p)) = b.
long double inverse_b(long double b);

struct Outcome {
  long double probability;
  long double posterior;
};

// Outcomes of a measurement given as symmetric 2x2 matrices {xx, xy, yy},
// with transition probabilities below `zero` treated as exact zeros.
std::vector<Outcome> outcomes(double pi, double c, const std::vector<std::array<double, 3>>& m,
                              long double zero = 1e-20L);

long double expected(const std::vector<Outcome>& out, const std::function<double(double)>& g);

std::vector<double> linspace(double a, double b, int n);

}  // namespace qdisc::reference

#endif  // QDISC_TESTS_SUPPORT_REFERENCE_H_
