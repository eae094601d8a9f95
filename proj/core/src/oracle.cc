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

#include "qdisc/oracle.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qdisc/errors.h"
#include "qdisc/rng.h"

namespace qdisc {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFeasibilitySlack = 1e-12;
constexpr int kMaxFree = 3;

double wrap_angle(double a) {
  a = std::fmod(a, kPi);
  return a < 0.0 ? a + kPi : a;
}

double largest_eigenvalue(const Sym2& m) { return m.eigenvalues()[1]; }

double snap(double q) { return q < kZeroTransition ? 0.0 : q; }

// Everything the objective needs to know about one rank-1 direction.
struct Direction {
  double angle = 0.0;
  double q0 = 0.0;  // <s0|v>^2
  double q1 = 0.0;
  Sym2 projector;
};

struct Params {
  int free = 0;  // J - 1; zero marks "no candidate yet"
  std::array<double, kMaxFree> angle{};
  std::array<double, kMaxFree> weight{};
};

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  Params params;
};

class Evaluator {
 public:
  Evaluator(const DiscriminationProblem& problem, const ObjectiveFn& g)
      : pi_(problem.prior()), g_(g) {
    const auto [s0, s1] = state_vectors(problem);
    s0_ = s0;
    s1_ = s1;
  }

  Direction direction(double angle) const {
    const Vec2 v = Vec2::from_angle(angle);
    const double a = dot(s0_, v);
    const double b = dot(s1_, v);
    return {angle, snap(a * a), snap(b * b), Sym2::outer(v)};
  }

  double outcome_probability(double q0, double q1) const { return (1.0 - pi_) * q0 + pi_ * q1; }

  // q * g(posterior) for an outcome with transition probabilities q0, q1.
  double term(double q0, double q1) const { return raw_term(snap(q0), snap(q1)); }

  // The remainder I - sum only sees its transition probabilities as 1 - sum,
  // so a zero there is cancellation noise. Never let it count as certain.
  double remainder_term(double q0, double q1) const {
    constexpr double kNoise = 1e-300;
    return raw_term(std::max(q0, kNoise), std::max(q1, kNoise));
  }

  double raw_term(double q0, double q1) const {
    const double q = outcome_probability(q0, q1);
    if (q < kDropProbability) return 0.0;
    return q * g_(std::min(1.0, pi_ * q1 / q));
  }

  // Per-unit-weight contribution of a direction; the posterior does not
  // depend on the weight.
  double unit_term(const Direction& d) const {
    const double q = outcome_probability(d.q0, d.q1);
    if (q < kDropProbability) return 0.0;
    return q * g_(std::min(1.0, pi_ * d.q1 / q));
  }

  double projection(double angle) const {
    const Direction a = direction(angle);
    const Direction b = direction(angle + 0.5 * kPi);
    return term(a.q0, a.q1) + term(b.q0, b.q1);
  }

  // Free rank-1 elements plus the remainder I - sum; infinity if the
  // remainder is not PSD.
  double free_elements(const Params& p, double* top = nullptr) const {
    Sym2 m;
    double q0 = 0.0, q1 = 0.0, total = 0.0;
    for (int j = 0; j < p.free; ++j) {
      const Direction d = direction(p.angle[j]);
      const double w = p.weight[j];
      m += w * d.projector;
      q0 += w * d.q0;
      q1 += w * d.q1;
      if (w * outcome_probability(d.q0, d.q1) >= kDropProbability) total += w * unit_term(d);
    }
    const double lmax = largest_eigenvalue(m);
    if (top != nullptr) *top = lmax;
    if (lmax > 1.0 + kFeasibilitySlack) return HUGE_VAL;
    return total + remainder_term(1.0 - q0, 1.0 - q1);
  }

  // p itself, then the same angles with the weights scaled until the
  // remainder is singular. Concave objectives want that boundary, and a
  // box grid only creeps towards it.
  void consider(const Params& p, Candidate& best) const {
    double top = 0.0;
    const double v = free_elements(p, &top);
    if (v < best.value) best = {v, p};
    if (!(top > 0.0 && top < 1.0)) return;
    Params scaled = p;
    for (int j = 0; j < p.free; ++j) scaled.weight[j] = std::min(1.0, p.weight[j] / top);
    const double w = free_elements(scaled);
    if (w < best.value) best = {w, scaled};
  }

 private:
  double pi_;
  const ObjectiveFn& g_;
  Vec2 s0_, s1_;
};

std::vector<double> angle_grid(const DiscriminationProblem& problem, int resolution) {
  std::vector<double> angles;
  angles.reserve(resolution + 8);
  for (int i = 0; i < resolution; ++i) angles.push_back(kPi * i / resolution);
  // State directions, their perpendiculars and the two bisectors.
  const double half = 0.5 * problem.angle();
  for (double a : {-half, half, 0.5 * kPi - half, 0.5 * kPi + half, 0.0, 0.5 * kPi}) {
    angles.push_back(wrap_angle(a));
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
  return angles;
}

// Zero is left out: a weightless element has no preferred angle, and such
// candidates all collapse onto the same projection seed. Refinement can
// still drive a weight to zero.
std::vector<double> weight_grid(int resolution) {
  std::vector<double> w(resolution - 1);
  for (int i = 1; i < resolution; ++i) w[i - 1] = static_cast<double>(i) / (resolution - 1);
  return w;
}

// First strictly better candidate wins, scanning in index order.
void keep_better(Candidate& best, const Candidate& c) {
  if (c.value < best.value) best = c;
}

struct CoarseScan {
  const Evaluator& eval;
  const std::vector<Direction>& dirs;
  const std::vector<double>& unit;  // unit_term per direction
  const std::vector<double>& weights;
  int free;

  // Depth-first over nondecreasing angle indices with all weight choices.
  void descend(int level, std::size_t first_angle, const Sym2& m, double q0, double q1,
               double partial, Params& params, Candidate& best, std::size_t& evaluations) const {
    if (level == free) {
      evaluations += 2;
      const double value = partial + eval.remainder_term(1.0 - q0, 1.0 - q1);
      if (value < best.value) best = {value, params};
      const double top = largest_eigenvalue(m);
      if (top > 0.0 && top < 1.0) {
        const double t = 1.0 / top;
        const double edge = t * partial + eval.remainder_term(1.0 - t * q0, 1.0 - t * q1);
        if (edge < best.value) {
          best = {edge, params};
          for (int j = 0; j < free; ++j) best.params.weight[j] = std::min(1.0, params.weight[j] * t);
        }
      }
      return;
    }
    for (std::size_t a = first_angle; a < dirs.size(); ++a) {
      const Direction& d = dirs[a];
      params.angle[level] = d.angle;
      for (double w : weights) {
        const Sym2 next = m + w * d.projector;
        if (largest_eigenvalue(next) > 1.0 + kFeasibilitySlack) break;  // weights ascend
        params.weight[level] = w;
        const double contrib =
            w * eval.outcome_probability(d.q0, d.q1) >= kDropProbability ? w * unit[a] : 0.0;
        descend(level + 1, a, next, q0 + w * d.q0, q1 + w * d.q1, partial + contrib, params, best,
                evaluations);
      }
    }
  }
};

OracleResult finish(const DiscriminationProblem& problem, const ObjectiveFn& g, const Params& p,
                    double projection_angle, std::size_t evaluations) {
  std::vector<PovmElement> elements;
  if (p.free == 0) {
    elements.push_back(PovmElement::rank_one(1.0, projection_angle));
    elements.push_back(PovmElement::rank_one(1.0, projection_angle + 0.5 * kPi));
  } else {
    Sym2 m;
    for (int j = 0; j < p.free; ++j) {
      elements.push_back(PovmElement::rank_one(p.weight[j], p.angle[j]));
      m += elements.back().matrix();
    }
    const Sym2 rest = Sym2::identity() - m;
    const auto eig = rest.eigenvalues();
    if (eig[0] <= 1e-12) {
      elements.push_back(PovmElement::rank_one(std::max(0.0, eig[1]), rest.principal_angle()));
    } else {
      elements.emplace_back(rest);
    }
  }
  Povm povm(std::move(elements));
  const double value = expected_objective(outcome_distribution(problem, povm), g);
  return OracleResult{value, std::move(povm), evaluations};
}

OracleResult search_projections(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                const SearchSpec& spec) {
  const Evaluator eval(problem, g);
  std::size_t evaluations = 0;
  double best_angle = 0.0;
  double best = HUGE_VAL;
  for (double a : angle_grid(problem, spec.angle_resolution)) {
    ++evaluations;
    const double v = eval.projection(a);
    if (v < best) {
      best = v;
      best_angle = a;
    }
  }
  double step = kPi / spec.angle_resolution;
  for (int pass = 0; pass < spec.refine_iters; ++pass) {
    const double center = best_angle;
    for (int i = -8; i <= 8; ++i) {
      if (i == 0) continue;
      const double a = wrap_angle(center + i * step / 4.0);
      ++evaluations;
      const double v = eval.projection(a);
      if (v < best) {
        best = v;
        best_angle = a;
      }
    }
    step /= 4.0;
  }
  return finish(problem, g, Params{}, best_angle, evaluations);
}

Candidate refine(const Evaluator& eval, Candidate best, const SearchSpec& spec,
                 std::size_t& evaluations) {
  const int free = best.params.free;
  // Local refinement: a (2r+1)^(2 free) grid spanning +-r/4 of the previous
  // step in every coordinate, then the step shrinks by 4.
  const int reach = free <= 2 ? 6 : 3;
  const int dims = 2 * free;
  const int side = 2 * reach + 1;
  long cells = 1;
  for (int i = 0; i < dims; ++i) cells *= side;
  double angle_step = kPi / spec.angle_resolution;
  double weight_step = 1.0 / (spec.weight_resolution - 1);
  for (int pass = 0; pass < spec.refine_iters; ++pass) {
    const Params center = best.params;
    std::vector<Candidate> slot(side);
#pragma omp parallel for schedule(static)
    for (int lead = 0; lead < side; ++lead) {
      Candidate& mine = slot[lead];
      const long inner = cells / side;
      for (long cell = 0; cell < inner; ++cell) {
        Params p = center;
        long rest = cell;
        bool valid = true;
        for (int d = 0; d < dims; ++d) {
          int offset;
          if (d == 0) {
            offset = lead - reach;
          } else {
            offset = static_cast<int>(rest % side) - reach;
            rest /= side;
          }
          const int j = d / 2;
          if (d % 2 == 0) {
            p.angle[j] = wrap_angle(center.angle[j] + offset * angle_step / 4.0);
          } else {
            const double w = center.weight[j] + offset * weight_step / 4.0;
            if (w < 0.0 || w > 1.0) valid = false;
            p.weight[j] = std::clamp(w, 0.0, 1.0);
          }
        }
        if (!valid) continue;
        eval.consider(p, mine);
      }
    }
    for (const Candidate& c : slot) keep_better(best, c);
    evaluations += 2 * static_cast<std::size_t>(cells);
    angle_step /= 4.0;
    weight_step /= 4.0;
  }
  return best;
}

OracleResult search_free_elements(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                  const SearchSpec& spec) {
  const Evaluator eval(problem, g);
  const int free = spec.outcomes - 1;
  const std::vector<double> angles = angle_grid(problem, spec.angle_resolution);
  const std::vector<double> weights = weight_grid(spec.weight_resolution);
  std::vector<Direction> dirs;
  std::vector<double> unit;
  for (double a : angles) {
    dirs.push_back(eval.direction(a));
    unit.push_back(eval.unit_term(dirs.back()));
  }

  // One slot per leading angle so the reduction order is fixed.
  std::vector<Candidate> local(dirs.size());
  std::vector<std::size_t> counts(dirs.size(), 0);
  const CoarseScan scan{eval, dirs, unit, weights, free};
  const long n_lead = static_cast<long>(dirs.size());
#pragma omp parallel for schedule(dynamic)
  for (long lead = 0; lead < n_lead; ++lead) {
    Params params;
    params.free = free;
    const Direction& d = dirs[lead];
    params.angle[0] = d.angle;
    for (double w : weights) {
      const Sym2 m = w * d.projector;
      if (largest_eigenvalue(m) > 1.0 + kFeasibilitySlack) break;
      params.weight[0] = w;
      const double contrib =
          w * eval.outcome_probability(d.q0, d.q1) >= kDropProbability ? w * unit[lead] : 0.0;
      scan.descend(1, static_cast<std::size_t>(lead), m, w * d.q0, w * d.q1, contrib, params,
                   local[lead], counts[lead]);
    }
  }
  std::size_t evaluations = 0;
  for (std::size_t count : counts) evaluations += count;
  // Refinement is local, so the best few coarse basins each get a pass.
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i].params.free != 0) order.push_back(i);
  }
  if (order.empty()) throw ValidationError("no feasible POVM at this search resolution");
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return local[x].value < local[y].value; });
  const std::size_t seeds = std::min<std::size_t>(free <= 2 ? 6 : 3, order.size());
  Candidate best;
  for (std::size_t i = 0; i < seeds; ++i) {
    keep_better(best, refine(eval, local[order[i]], spec, evaluations));
  }
  return finish(problem, g, best.params, 0.0, evaluations);
}

Povm projection_povm(double angle) {
  return Povm({PovmElement::rank_one(1.0, angle), PovmElement::rank_one(1.0, angle + 0.5 * kPi)});
}

}  // namespace

SearchSpec SearchSpec::defaults(int outcomes) {
  switch (outcomes) {
    case 2:
      return {2, 720, 64, 3};
    case 3:
      return {3, 72, 20, 4};
    case 4:
      return {4, 18, 10, 3};
    default:
      throw ValidationError("oracle supports 2 to 4 outcomes");
  }
}

void SearchSpec::validate() const {
  if (outcomes < 2 || outcomes > 4) throw ValidationError("oracle supports 2 to 4 outcomes");
  if (angle_resolution < 8 || weight_resolution < 8) {
    throw ValidationError("search resolutions must be at least 8");
  }
  if (refine_iters < 0) throw ValidationError("refinement passes must be nonnegative");
}

OracleResult brute_force_optimum(const DiscriminationProblem& problem, const ObjectiveFn& g,
                                 const SearchSpec& spec) {
  spec.validate();
  if (spec.outcomes == 2) return search_projections(problem, g, spec);
  OracleResult projections = search_projections(problem, g, SearchSpec::defaults(2));
  // Projections are a face of every larger outcome set.
  OracleResult general = search_free_elements(problem, g, spec);
  general.evaluations += projections.evaluations;
  if (projections.value <= general.value) {
    projections.evaluations = general.evaluations;
    return projections;
  }
  return general;
}

std::vector<Povm> eligible_continuum_sample(const DiscriminationProblem& problem, std::size_t n,
                                            std::uint64_t seed) {
  std::vector<Povm> out;
  if (n == 0) return out;
  if (problem.overlap() >= 1.0) {
    throw ValidationError("identical states admit only the trivial eligible measurement");
  }
  const double half = 0.5 * problem.angle();
  // A direction is allowed iff <s0|v> and <s1|v> share a sign, i.e. its
  // angle lies in [-(pi/2 - half), pi/2 - half] modulo pi.
  const double reach = 0.5 * kPi - half;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream rng(seed, i);
    const int outcomes = 2 + static_cast<int>(rng.uniform() * 3.0);
    bool done = false;
    // Doubled-angle picture: w v v^T = (w/2)(I + R(2 psi)), so completeness
    // means the weighted unit vectors at 2 psi cancel and the weights sum to 2.
    for (int attempt = 0; attempt < 2000 && outcomes > 2 && !done; ++attempt) {
      std::vector<double> psi(outcomes), w(outcomes);
      double rx = 0.0, ry = 0.0;
      for (int j = 0; j + 1 < outcomes; ++j) {
        psi[j] = -reach + 2.0 * reach * rng.uniform();
        w[j] = 0.05 + rng.uniform();
        rx += w[j] * std::cos(2.0 * psi[j]);
        ry += w[j] * std::sin(2.0 * psi[j]);
      }
      const double r = std::hypot(rx, ry);
      if (r < 1e-9) continue;
      const double last = 0.5 * std::atan2(-ry, -rx);
      // Distance to the allowed arc, modulo pi.
      double centred = std::remainder(last, kPi);
      if (std::abs(centred) > reach) continue;
      psi.back() = centred;
      w.back() = r;
      double total = 0.0;
      for (double x : w) total += x;
      std::vector<PovmElement> elements;
      for (int j = 0; j < outcomes; ++j) {
        elements.push_back(PovmElement::rank_one(2.0 * w[j] / total, psi[j]));
      }
      out.emplace_back(std::move(elements));
      done = true;
    }
    if (!done) {
      // Projections onto a basis with both vectors allowed: psi in
      // [half, pi/2 - half] (or its perpendicular copy).
      const double psi = half + (reach - half) * rng.uniform();
      out.push_back(projection_povm(psi));
    }
  }
  return out;
}

std::vector<Povm> random_povm_sample(const DiscriminationProblem& problem, std::size_t n,
                                     std::uint64_t seed) {
  std::vector<Povm> out;
  out.reserve(n);
  std::uint64_t stream = 0;
  while (out.size() < n) {
    RandomStream rng(seed, stream++);
    const int outcomes = 2 + static_cast<int>(rng.uniform() * 3.0);
    std::vector<Sym2> a(outcomes);
    Sym2 sum;
    for (int j = 0; j < outcomes; ++j) {
      // Lower-triangular factor with positive diagonal.
      const double l11 = 0.05 + rng.uniform();
      const double l21 = 2.0 * rng.uniform() - 1.0;
      const double l22 = 0.05 + rng.uniform();
      a[j] = {l11 * l11, l11 * l21, l21 * l21 + l22 * l22};
      sum += a[j];
    }
    // S^-1/2 through the eigendecomposition of S.
    const auto eig = sum.eigenvalues();
    const double t = sum.principal_angle();
    const Vec2 u_big = Vec2::from_angle(t);
    const Vec2 u_small = Vec2::from_angle(t + 0.5 * kPi);
    const Sym2 root_inv =
        Sym2::outer(u_big, 1.0 / std::sqrt(eig[1])) + Sym2::outer(u_small, 1.0 / std::sqrt(eig[0]));
    std::vector<PovmElement> elements;
    for (const Sym2& m : a) {
      // R M R for symmetric R and M.
      const double xx = root_inv.xx, xy = root_inv.xy, yy = root_inv.yy;
      const double rm_xx = xx * m.xx + xy * m.xy, rm_xy = xx * m.xy + xy * m.yy;
      const double rm_yx = xy * m.xx + yy * m.xy, rm_yy = xy * m.xy + yy * m.yy;
      elements.emplace_back(Sym2{rm_xx * xx + rm_xy * xy, rm_xx * xy + rm_xy * yy,
                                 rm_yx * xy + rm_yy * yy});
    }
    Povm povm(std::move(elements));
    if (!is_eligible(problem, povm)) out.push_back(std::move(povm));
  }
  return out;
}

}  // namespace qdisc
