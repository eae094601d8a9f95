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

#ifndef QDISC_RENYI_H_
#define QDISC_RENYI_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qdisc {

using BigInt = boost::multiprecision::cpp_int;

// k-th Taylor coefficient (times k!) of Phi_alpha(t) at t = 0, as a
// polynomial in alpha:
//
//   P_k(a) = k(a-1)(2a)^(k-1) + k a (2a-1)^(k-1) - (2a)^k - (2a-1)^k
//            + (a+1)^k - (a-1)^k - 2k a^(k-1) + k a + 1
//
// The linear tail (a-1)t + 1 of Phi adds 1 at k = 0 and (a-1) at k = 1,
// which the display above leaves out; with it P_0 = P_1 = 0.
class PkPolynomial {
 public:
  static constexpr std::size_t kTerms = 9;

  explicit PkPolynomial(int k);

  int k() const { return k_; }

  std::array<double, kTerms> terms(double alpha) const;
  double operator()(double alpha) const;  // compensated sum of terms()
  double scale(double alpha) const;       // sum of |terms()|

  BigInt exact(long alpha) const;  // integer arithmetic, term by term

  // Monomial coefficients c[i] of alpha^i.
  const std::vector<BigInt>& coefficients() const { return coefficients_; }
  // Q_k = P_k / (alpha - 1) by synthetic division; throws if the
  // remainder is nonzero.
  const std::vector<BigInt>& quotient() const { return quotient_; }
  // Horner evaluation of the monomial forms in 100-digit floating point.
  double eval_expanded(double alpha) const;
  double eval_quotient(double alpha) const;

 private:
  int k_;
  std::vector<BigInt> coefficients_;
  std::vector<BigInt> quotient_;
};

double pk_eval(int k, double alpha);

// Phi_alpha(t) evaluated from its closed form. Throws NumericalError when
// an exponential overflows.
double phi_eval(double alpha, double t);
// Sum of the magnitudes of the terms phi_eval adds up.
double phi_scale(double alpha, double t);

// Taylor coefficients of Phi_alpha at 0, orders 0..K, accumulated from the
// exponential series in 50-digit floating point.
std::vector<double> phi_series_coeffs(double alpha, int K);

struct PkRow {
  int k = 0;
  double alpha = 0.0;
  double value = 0.0;
  double margin = 0.0;  // value / scale
};

struct PkReport {
  bool ok = true;
  double worst_margin = 0.0;
  int worst_k = 0;
  double worst_alpha = 0.0;
  std::size_t checked = 0;
  std::vector<PkRow> rows;  // filled only when requested
};

inline constexpr double kPkTolerance = 1e-9;

PkReport verify_pk_nonneg(int k_max, std::span<const double> alpha_grid, bool keep_rows = false);

// h_alpha'' / h_alpha' on (0, 1/2) in closed form; alpha = 1 and
// alpha = inf use their limits.
double renyi_derivative_ratio(double alpha, double p);

// True iff h_alpha''/h_alpha' >= h_beta''/h_beta' on every grid point in
// (0, 1/2); points outside are ignored.
bool verify_relative_convexity(double alpha, double beta, std::span<const double> p_grid);

}  // namespace qdisc

#endif  // QDISC_RENYI_H_
