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

#ifndef QDISC_LINALG_H_
#define QDISC_LINALG_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qdisc {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  static Vec2 from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

// Real symmetric 2x2 matrix [[xx, xy], [xy, yy]].
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;

  static Sym2 identity() { return {1.0, 0.0, 1.0}; }
  static Sym2 outer(const Vec2& v, double weight = 1.0) {
    return {weight * v.x * v.x, weight * v.x * v.y, weight * v.y * v.y};
  }

  Sym2& operator+=(const Sym2& o) {
    xx += o.xx;
    xy += o.xy;
    yy += o.yy;
    return *this;
  }
  Sym2& operator-=(const Sym2& o) {
    xx -= o.xx;
    xy -= o.xy;
    yy -= o.yy;
    return *this;
  }
  friend Sym2 operator+(Sym2 a, const Sym2& b) { return a += b; }
  friend Sym2 operator-(Sym2 a, const Sym2& b) { return a -= b; }
  friend Sym2 operator*(double s, const Sym2& m) { return {s * m.xx, s * m.xy, s * m.yy}; }

  double trace() const { return xx + yy; }
  double det() const { return xx * yy - xy * xy; }
  double max_abs() const { return std::max({std::abs(xx), std::abs(xy), std::abs(yy)}); }

  // a^T M b
  double form(const Vec2& a, const Vec2& b) const {
    return a.x * (xx * b.x + xy * b.y) + a.y * (xy * b.x + yy * b.y);
  }
  double form(const Vec2& a) const { return form(a, a); }

  // Eigenvalues, ascending.
  std::array<double, 2> eigenvalues() const {
    const double mean = 0.5 * (xx + yy);
    const double half_gap = std::hypot(0.5 * (xx - yy), xy);
    return {mean - half_gap, mean + half_gap};
  }

  // Angle in [0, pi) of the eigenvector belonging to the larger eigenvalue.
  double principal_angle() const {
    double angle = 0.5 * std::atan2(2.0 * xy, xx - yy);
    if (angle < 0.0) angle += std::numbers::pi;
    return angle;
  }
};

}  // namespace qdisc

#endif  // QDISC_LINALG_H_
