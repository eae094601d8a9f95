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

#ifndef QDISC_OBJECTIVES_H_
#define QDISC_OBJECTIVES_H_

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdisc {

// Objective g(p) of the posterior p = Pr(X = 1 | outcome). Lower is better.
class ObjectiveFn {
 public:
  ObjectiveFn(std::string name, std::function<double(double)> eval);

  double operator()(double p) const { return eval_(p); }
  const std::string& name() const { return name_; }
  double value_at_half() const { return value_at_half_; }

 private:
  std::string name_;
  std::function<double(double)> eval_;
  double value_at_half_;
};

enum class ConvexityClass { kConvexAdmissible, kConcaveAdmissible, kNeither };

std::string_view to_string(ConvexityClass c);

double bhattacharyya(double p);
double error_probability(double p);
double binary_entropy(double p);  // nats
double ambiguity(double p);
// Binary Renyi entropy of order alpha in [0, inf], nats.
double renyi_entropy(double alpha, double p);

ObjectiveFn bhattacharyya_objective();
ObjectiveFn error_objective();
ObjectiveFn entropy_objective();
ObjectiveFn ambiguity_objective();
ObjectiveFn renyi_objective(double alpha);

// error | entropy | ambiguity | bhattacharyya | renyi:<alpha|inf>
ObjectiveFn builtin_objective(std::string_view spec);

struct AdmissibilityReport {
  bool symmetric = true;
  bool normalized = true;
  bool monotone = true;
  bool bounded = true;
  std::vector<std::string> violations;

  bool admissible() const { return symmetric && normalized && monotone && bounded; }
};

AdmissibilityReport check_admissible(const ObjectiveFn& g, std::size_t grid_size = 1001);

enum class ClassifyMethod { kDerivativeRatio, kChordSlopes };

struct ClassifyReport {
  ConvexityClass result = ConvexityClass::kNeither;
  ClassifyMethod method = ClassifyMethod::kDerivativeRatio;
  std::size_t convex_points = 0;   // evidence for g convex relative to b
  std::size_t concave_points = 0;  // evidence for g concave relative to b
  std::size_t neutral_points = 0;  // within numerical noise
};

// Relative convexity of g with respect to b on (0, 1/2). Throws
// ValidationError if g is not admissible.
ClassifyReport classify_detailed(const ObjectiveFn& g, std::size_t grid_size = 1001);
ConvexityClass classify(const ObjectiveFn& g, std::size_t grid_size = 1001);

// b''/b' in closed form.
double bhattacharyya_derivative_ratio(double p);

// Root p <= 1/2 of b(p) = b, computed without cancellation.
double inverse_bhattacharyya(double b);

double jensen_bound_convex(const ObjectiveFn& g, double mean_b);
double jensen_bound_concave(const ObjectiveFn& g, double mean_b);

struct InverseJensenResult {
  double bound = 0.0;      // ((E X - a) phi(b) + (b - E X) phi(a)) / (b - a)
  double empirical = 0.0;  // sample mean of phi(X)
  bool holds = false;
};

// Upper bound on E phi(X) for convex phi and X supported on [lo, hi].
InverseJensenResult inverse_jensen(const std::function<double(double)>& phi,
                                   std::span<const double> samples, double lo, double hi);

}  // namespace qdisc

#endif  // QDISC_OBJECTIVES_H_
