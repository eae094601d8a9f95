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

#include "qdisc/objectives.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "qdisc/errors.h"
#include "qdisc/numeric.h"

namespace qdisc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kMargin = 1e-3;       // classify grid keeps this far from 0 and 1/2
constexpr double kStep = 1e-5;         // finite-difference step
constexpr double kFlatSlope = 1e-12;   // |g'| below this has no usable ratio
constexpr double kScaleMismatch = 0.1;

std::string format_alpha(double alpha) {
  if (std::isinf(alpha)) return "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), alpha);
  return std::string(buf, res.ptr);
}

ClassifyReport tally(ClassifyMethod method, std::size_t convex, std::size_t concave,
                     std::size_t neutral) {
  ClassifyReport r;
  r.method = method;
  r.convex_points = convex;
  r.concave_points = concave;
  r.neutral_points = neutral;
  if (concave == 0) {
    r.result = ConvexityClass::kConvexAdmissible;
  } else if (convex == 0) {
    r.result = ConvexityClass::kConcaveAdmissible;
  } else {
    r.result = ConvexityClass::kNeither;
  }
  return r;
}

// Supporting-line test on [0, 1/2]: g is convex in b iff chord slopes
// (g(x) - g(m)) / (b(x) - b(m)) to the left of every m never exceed the ones
// to its right.
ClassifyReport classify_by_chords(const ObjectiveFn& g, std::size_t n) {
  std::vector<double> gv(n), bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = 0.5 * static_cast<double>(i) / static_cast<double>(n - 1);
    gv[i] = g(x);
    bv[i] = bhattacharyya(x);
  }
  std::size_t convex = 0, concave = 0, neutral = 0;
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double left_max = -HUGE_VAL, left_min = HUGE_VAL;
    double right_max = -HUGE_VAL, right_min = HUGE_VAL;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = (gv[i] - gv[m]) / (bv[i] - bv[m]);
      left_max = std::max(left_max, s);
      left_min = std::min(left_min, s);
    }
    for (std::size_t i = m + 1; i < n; ++i) {
      const double s = (gv[i] - gv[m]) / (bv[i] - bv[m]);
      right_max = std::max(right_max, s);
      right_min = std::min(right_min, s);
    }
    const double tol =
        1e-9 * (1.0 + std::max({std::abs(left_max), std::abs(left_min), std::abs(right_max),
                                std::abs(right_min)}));
    const bool convex_ok = left_max <= right_min + tol;
    const bool concave_ok = left_min >= right_max - tol;
    if (convex_ok && concave_ok) {
      ++neutral;
    } else if (convex_ok) {
      ++convex;
    } else if (concave_ok) {
      ++concave;
    } else {
      ++convex;
      ++concave;
    }
  }
  return tally(ClassifyMethod::kChordSlopes, convex, concave, neutral);
}

struct Derivatives {
  double d1, d2;
};

Derivatives central(const ObjectiveFn& g, double p, double h, double g0) {
  const double up = g(p + h);
  const double down = g(p - h);
  return {(up - down) / (2.0 * h), (up - 2.0 * g0 + down) / (h * h)};
}

}  // namespace

ObjectiveFn::ObjectiveFn(std::string name, std::function<double(double)> eval)
    : name_(std::move(name)), eval_(std::move(eval)) {
  if (!eval_) throw ValidationError("objective needs a callable");
  value_at_half_ = eval_(0.5);
}

std::string_view to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::kConvexAdmissible:
      return "convex-admissible";
    case ConvexityClass::kConcaveAdmissible:
      return "concave-admissible";
    case ConvexityClass::kNeither:
      return "neither";
  }
  return "neither";
}

double bhattacharyya(double p) { return std::sqrt(std::max(0.0, p * (1.0 - p))); }

double error_probability(double p) { return std::min(p, 1.0 - p); }

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double ambiguity(double p) { return (p > 0.0 && p < 1.0) ? 1.0 : 0.0; }

double renyi_entropy(double alpha, double p) {
  if (!(alpha >= 0.0)) throw ValidationError("Renyi order must be nonnegative");
  if (alpha == 0.0) return ambiguity(p);
  if (std::abs(alpha - 1.0) < 1e-6) return binary_entropy(p);
  if (p <= 0.0 || p >= 1.0) return 0.0;
  if (std::isinf(alpha)) return -std::log1p(-error_probability(p));
  return std::log(std::pow(p, alpha) + std::pow(1.0 - p, alpha)) / (1.0 - alpha);
}

ObjectiveFn bhattacharyya_objective() { return ObjectiveFn("bhattacharyya", bhattacharyya); }
ObjectiveFn error_objective() { return ObjectiveFn("error", error_probability); }
ObjectiveFn entropy_objective() { return ObjectiveFn("entropy", binary_entropy); }
ObjectiveFn ambiguity_objective() { return ObjectiveFn("ambiguity", ambiguity); }

ObjectiveFn renyi_objective(double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("Renyi order must be nonnegative");
  return ObjectiveFn("renyi:" + format_alpha(alpha),
                     [alpha](double p) { return renyi_entropy(alpha, p); });
}

ObjectiveFn builtin_objective(std::string_view spec) {
  if (spec == "error") return error_objective();
  if (spec == "entropy") return entropy_objective();
  if (spec == "ambiguity") return ambiguity_objective();
  if (spec == "bhattacharyya") return bhattacharyya_objective();
  constexpr std::string_view kRenyi = "renyi:";
  if (spec.starts_with(kRenyi)) {
    const std::string_view arg = spec.substr(kRenyi.size());
    if (arg == "inf") return renyi_objective(std::numeric_limits<double>::infinity());
    double alpha = 0.0;
    const auto res = std::from_chars(arg.data(), arg.data() + arg.size(), alpha);
    if (res.ec != std::errc() || res.ptr != arg.data() + arg.size() || arg.empty()) {
      throw ValidationError("bad Renyi order '" + std::string(arg) + "'");
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
      throw ValidationError("Renyi order must be a nonnegative number or 'inf'");
    }
    return renyi_objective(alpha);
  }
  throw ValidationError("unknown objective '" + std::string(spec) + "'");
}

AdmissibilityReport check_admissible(const ObjectiveFn& g, std::size_t grid_size) {
  if (grid_size < 3) throw ValidationError("admissibility grid needs at least 3 points");
  AdmissibilityReport report;
  auto flag = [&report](bool& field, std::string message) {
    if (field) report.violations.push_back(std::move(message));
    field = false;
  };
  std::vector<double> values(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double p = static_cast<double>(i) / static_cast<double>(grid_size - 1);
    values[i] = g(p);
    if (!std::isfinite(values[i])) flag(report.bounded, "non-finite value at p=" + std::to_string(p));
  }
  if (!std::isfinite(g.value_at_half())) flag(report.bounded, "g(1/2) is not finite");
  if (std::abs(values.front()) > 1e-12) flag(report.normalized, "g(0) != 0");
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double mirror = values[grid_size - 1 - i];
    if (std::abs(values[i] - mirror) > 1e-9 * (1.0 + std::abs(values[i]))) {
      const double p = static_cast<double>(i) / static_cast<double>(grid_size - 1);
      flag(report.symmetric, "g(p) != g(1-p) at p=" + std::to_string(p));
      break;
    }
  }
  for (std::size_t i = 0; 2 * (i + 1) <= grid_size - 1; ++i) {
    if (values[i + 1] < values[i] - 1e-12 * (1.0 + std::abs(values[i]))) {
      const double p = static_cast<double>(i + 1) / static_cast<double>(grid_size - 1);
      flag(report.monotone, "g decreases on [0, 1/2] near p=" + std::to_string(p));
      break;
    }
  }
  return report;
}

double bhattacharyya_derivative_ratio(double p) {
  return -1.0 / (2.0 * p * (1.0 - p) * (1.0 - 2.0 * p));
}

ClassifyReport classify_detailed(const ObjectiveFn& g, std::size_t grid_size) {
  if (grid_size < 3) throw ValidationError("classification grid needs at least 3 points");
  const AdmissibilityReport adm = check_admissible(g, grid_size);
  if (!adm.admissible()) {
    throw ValidationError("objective '" + g.name() + "' is not admissible: " + adm.violations[0]);
  }

  struct Point {
    double ratio_gap;
    double noise;
  };
  std::vector<Point> points;
  points.reserve(grid_size);
  const double h = kStep;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double p =
        kMargin + (0.5 - 2.0 * kMargin) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double g0 = g(p);
    const Derivatives fine = central(g, p, h, g0);
    const Derivatives twice = central(g, p, 2.0 * h, g0);
    const Derivatives coarse = central(g, p, 10.0 * h, g0);
    if (std::abs(fine.d1) <= kFlatSlope ||
        std::abs(fine.d1 - coarse.d1) > kScaleMismatch * std::abs(fine.d1)) {
      return classify_by_chords(g, grid_size);
    }
    const double slope = std::abs(fine.d1);
    const double round_d2 = 8.0 * kEps * (std::abs(g0) + 1e-300) / (h * h);
    const double round_d1 = 4.0 * kEps * std::abs(g0) / h;
    const double err_d2 = round_d2 + std::abs(fine.d2 - twice.d2);
    const double err_d1 = round_d1 + std::abs(fine.d1 - twice.d1);
    const double ratio_g = fine.d2 / slope;
    const double ratio_b = bhattacharyya_derivative_ratio(p);
    const double noise = err_d2 / slope + std::abs(fine.d2) * err_d1 / (slope * slope) +
                         1e-9 * (std::abs(ratio_g) + std::abs(ratio_b));
    points.push_back({ratio_g - ratio_b, noise});
  }
  std::size_t convex = 0, concave = 0, neutral = 0;
  for (const Point& pt : points) {
    if (pt.ratio_gap > pt.noise) {
      ++convex;
    } else if (pt.ratio_gap < -pt.noise) {
      ++concave;
    } else {
      ++neutral;
    }
  }
  return tally(ClassifyMethod::kDerivativeRatio, convex, concave, neutral);
}

ConvexityClass classify(const ObjectiveFn& g, std::size_t grid_size) {
  return classify_detailed(g, grid_size).result;
}

double inverse_bhattacharyya(double b) {
  if (!(b >= 0.0 && b <= 0.5 + 1e-15)) throw ValidationError("Bhattacharyya value must lie in [0, 1/2]");
  const double disc = std::sqrt(std::max(0.0, 1.0 - 4.0 * b * b));
  return std::min(0.5, 2.0 * b * b / (1.0 + disc));
}

double jensen_bound_convex(const ObjectiveFn& g, double mean_b) {
  if (!(mean_b >= 0.0 && mean_b <= 0.5 + 1e-15)) {
    throw ValidationError("mean Bhattacharyya value must lie in [0, 1/2]");
  }
  return g(inverse_bhattacharyya(mean_b));
}

double jensen_bound_concave(const ObjectiveFn& g, double mean_b) {
  return 2.0 * g.value_at_half() * mean_b;
}

InverseJensenResult inverse_jensen(const std::function<double(double)>& phi,
                                   std::span<const double> samples, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("inverse Jensen needs lo < hi");
  if (samples.empty()) throw ValidationError("inverse Jensen needs at least one sample");
  std::vector<double> phis;
  phis.reserve(samples.size());
  for (double x : samples) {
    if (!(x >= lo && x <= hi)) throw ValidationError("sample outside [lo, hi]");
    phis.push_back(phi(x));
  }
  const double n = static_cast<double>(samples.size());
  const double mean_x = pairwise_sum(samples) / n;
  InverseJensenResult r;
  r.empirical = pairwise_sum(phis) / n;
  r.bound = ((mean_x - lo) * phi(hi) + (hi - mean_x) * phi(lo)) / (hi - lo);
  r.holds = r.empirical <= r.bound + 1e-12 * (1.0 + std::abs(r.bound));
  return r;
}

}  // namespace qdisc
