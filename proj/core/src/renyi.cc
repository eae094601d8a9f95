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
#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qdisc/errors.h"
#include "qdisc/numeric.h"

namespace qdisc {
namespace {

using Float100 = boost::multiprecision::cpp_bin_float_100;
using Float50 = boost::multiprecision::cpp_bin_float_50;
using Poly = std::vector<BigInt>;

double ipow(double x, int n) {
  double r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

BigInt ipow(BigInt x, int n) {
  BigInt r = 1;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

Poly multiply(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// (c0 + c1 a)^n
Poly linear_power(long c0, long c1, int n) {
  Poly r{1};
  const Poly base{c0, c1};
  for (int i = 0; i < n; ++i) r = multiply(r, base);
  return r;
}

void accumulate(Poly& acc, const Poly& p, const BigInt& factor) {
  if (acc.size() < p.size()) acc.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) acc[i] += factor * p[i];
}

Poly expand(int k) {
  Poly acc;
  const BigInt kk = k;
  if (k >= 1) {
    accumulate(acc, multiply(Poly{-1, 1}, linear_power(0, 2, k - 1)), kk);
    accumulate(acc, multiply(Poly{0, 1}, linear_power(-1, 2, k - 1)), kk);
    accumulate(acc, linear_power(0, 1, k - 1), -2 * kk);
  }
  accumulate(acc, linear_power(0, 2, k), -1);
  accumulate(acc, linear_power(-1, 2, k), -1);
  accumulate(acc, linear_power(1, 1, k), 1);
  accumulate(acc, linear_power(-1, 1, k), -1);
  accumulate(acc, Poly{1, kk}, 1);
  if (k == 0) accumulate(acc, Poly{1}, 1);
  if (k == 1) accumulate(acc, Poly{-1, 1}, 1);
  while (acc.size() > 1 && acc.back() == 0) acc.pop_back();
  return acc;
}

template <typename F>
F horner(const Poly& c, const F& x) {
  F r = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + F(*it);
  return r;
}

struct PhiTerms {
  std::array<double, 7> v;
};

PhiTerms phi_terms(double a, double t) {
  const double e2a = std::exp(2.0 * a * t);
  const double e2a1 = std::exp((2.0 * a - 1.0) * t);
  const double ea1 = std::exp((a + 1.0) * t);
  const double ea = std::exp(a * t);
  const double eam1 = std::exp((a - 1.0) * t);
  const double e1 = std::exp(t);
  PhiTerms p{{((a - 1.0) * t - 1.0) * e2a, (a * t - 1.0) * e2a1, ea1, -2.0 * t * ea, -eam1,
              (a * t + 1.0) * e1, (a - 1.0) * t + 1.0}};
  for (double x : p.v) {
    if (!std::isfinite(x)) {
      throw NumericalError("Phi_alpha(t) overflows at alpha=" + std::to_string(a) +
                           ", t=" + std::to_string(t));
    }
  }
  return p;
}

}  // namespace

PkPolynomial::PkPolynomial(int k) : k_(k) {
  if (k < 0) throw ValidationError("P_k needs k >= 0");
  coefficients_ = expand(k);
  // Synthetic division by (alpha - 1), highest degree first.
  const std::size_t n = coefficients_.size();
  if (n == 1) {
    if (coefficients_[0] != 0) throw NumericalError("P_k(1) != 0");
    quotient_ = {0};
    return;
  }
  quotient_.assign(n - 1, 0);
  BigInt carry = 0;
  for (std::size_t i = n; i-- > 1;) {
    carry = coefficients_[i] + carry;
    quotient_[i - 1] = carry;
  }
  if (coefficients_[0] + carry != 0) {
    throw NumericalError("P_" + std::to_string(k) + " is not divisible by (alpha - 1)");
  }
}

std::array<double, PkPolynomial::kTerms> PkPolynomial::terms(double a) const {
  const int k = k_;
  const double kd = k;
  std::array<double, kTerms> t{};
  if (k >= 1) {
    t[0] = kd * (a - 1.0) * ipow(2.0 * a, k - 1);
    t[1] = kd * a * ipow(2.0 * a - 1.0, k - 1);
    t[6] = -2.0 * kd * ipow(a, k - 1);
  }
  t[2] = -ipow(2.0 * a, k);
  t[3] = -ipow(2.0 * a - 1.0, k);
  t[4] = ipow(a + 1.0, k);
  t[5] = -ipow(a - 1.0, k);
  t[7] = kd * a + 1.0;
  if (k == 0) t[8] = 1.0;
  if (k == 1) t[8] = a - 1.0;
  return t;
}

double PkPolynomial::operator()(double alpha) const {
  CompensatedSum s;
  for (double x : terms(alpha)) s.add(x);
  return s.value();
}

double PkPolynomial::scale(double alpha) const {
  double s = 0.0;
  for (double x : terms(alpha)) s += std::abs(x);
  return s;
}

BigInt PkPolynomial::exact(long alpha) const {
  const int k = k_;
  const BigInt a = alpha;
  BigInt r = 0;
  if (k >= 1) {
    r += k * (a - 1) * ipow(BigInt(2 * a), k - 1);
    r += k * a * ipow(BigInt(2 * a - 1), k - 1);
    r -= 2 * k * ipow(a, k - 1);
  }
  r -= ipow(BigInt(2 * a), k);
  r -= ipow(BigInt(2 * a - 1), k);
  r += ipow(BigInt(a + 1), k);
  r -= ipow(BigInt(a - 1), k);
  r += k * a + 1;
  if (k == 0) r += 1;
  if (k == 1) r += a - 1;
  return r;
}

double PkPolynomial::eval_expanded(double alpha) const {
  return static_cast<double>(horner(coefficients_, Float100(alpha)));
}

double PkPolynomial::eval_quotient(double alpha) const {
  return static_cast<double>(horner(quotient_, Float100(alpha)));
}

double pk_eval(int k, double alpha) { return PkPolynomial(k)(alpha); }

double phi_eval(double alpha, double t) {
  CompensatedSum s;
  for (double x : phi_terms(alpha, t).v) s.add(x);
  return s.value();
}

double phi_scale(double alpha, double t) {
  double s = 0.0;
  for (double x : phi_terms(alpha, t).v) s += std::abs(x);
  return s;
}

std::vector<double> phi_series_coeffs(double alpha, int K) {
  if (K < 0) throw ValidationError("series order must be nonnegative");
  const Float50 a = alpha;
  struct Term {
    Float50 gamma, constant, linear;  // (constant + linear t) exp(gamma t)
  };
  const Term terms[] = {
      {2 * a, -1, a - 1}, {2 * a - 1, -1, a}, {a + 1, 1, 0},
      {a, 0, -2},         {a - 1, -1, 0},     {Float50(1), 1, a},
  };
  std::vector<Float50> acc(K + 1, Float50(0));
  acc[0] += 1;
  if (K >= 1) acc[1] += a - 1;
  for (const Term& term : terms) {
    Float50 prev = 0;  // gamma^(k-1) / (k-1)!
    Float50 cur = 1;   // gamma^k / k!
    for (int k = 0; k <= K; ++k) {
      if (k > 0) {
        prev = cur;
        cur = cur * term.gamma / k;
      }
      acc[k] += term.constant * cur + term.linear * prev;
    }
  }
  std::vector<double> out(K + 1);
  for (int k = 0; k <= K; ++k) out[k] = static_cast<double>(acc[k]);
  return out;
}

PkReport verify_pk_nonneg(int k_max, std::span<const double> alpha_grid, bool keep_rows) {
  if (k_max < 3) throw ValidationError("k_max must be at least 3");
  PkReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (int k = 3; k <= k_max; ++k) {
    const PkPolynomial pk(k);
    for (double alpha : alpha_grid) {
      const double value = pk(alpha);
      const double scale = pk.scale(alpha);
      const double margin = scale > 0.0 ? value / scale : 0.0;
      ++report.checked;
      if (margin < report.worst_margin) {
        report.worst_margin = margin;
        report.worst_k = k;
        report.worst_alpha = alpha;
      }
      if (margin < -kPkTolerance) report.ok = false;
      if (keep_rows) report.rows.push_back({k, alpha, value, margin});
    }
  }
  return report;
}

double renyi_derivative_ratio(double alpha, double p) {
  if (std::isinf(alpha)) return 1.0 / (1.0 - p);
  if (std::abs(alpha - 1.0) < 1e-6) return -1.0 / (p * (1.0 - p) * std::log((1.0 - p) / p));
  const double n = std::pow(p, alpha - 1.0) - std::pow(1.0 - p, alpha - 1.0);
  const double dn = (alpha - 1.0) * (std::pow(p, alpha - 2.0) + std::pow(1.0 - p, alpha - 2.0));
  const double s = std::pow(p, alpha) + std::pow(1.0 - p, alpha);
  return dn / n - alpha * n / s;
}

bool verify_relative_convexity(double alpha, double beta, std::span<const double> p_grid) {
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 0.5)) continue;
    const double ra = renyi_derivative_ratio(alpha, p);
    const double rb = renyi_derivative_ratio(beta, p);
    if (ra < rb - 1e-9 * (1.0 + std::abs(ra) + std::abs(rb))) return false;
  }
  return true;
}

}  // namespace qdisc
