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


#include <cmath>
#include <vector>

#include "benchmark/benchmark.h"
#include "qdisc/dolinar.h"
#include "qdisc/objectives.h"
#include "qdisc/oracle.h"
#include "qdisc/problem.h"
#include "qdisc/renyi.h"
#include "qdisc/rng.h"

namespace qdisc {
namespace {

void BM_OutcomeDistribution(benchmark::State& state) {
  const DiscriminationProblem problem(0.3, 0.6);
  const Povm povm({PovmElement::rank_one(0.5, 0.2), PovmElement::rank_one(0.5, 1.1),
                   PovmElement(Sym2::identity() - PovmElement::rank_one(0.5, 0.2).matrix() -
                               PovmElement::rank_one(0.5, 1.1).matrix())});
  for (auto _ : state) benchmark::DoNotOptimize(outcome_distribution(problem, povm));
}
BENCHMARK(BM_OutcomeDistribution);

void BM_Oracle(benchmark::State& state) {
  const DiscriminationProblem problem(0.3, 0.6);
  const ObjectiveFn g = ambiguity_objective();
  const SearchSpec spec = SearchSpec::defaults(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimum(problem, g, spec));
}
BENCHMARK(BM_Oracle)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Classify(benchmark::State& state) {
  const ObjectiveFn g = renyi_objective(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(classify(g));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMicrosecond);

void BM_VerifyPk(benchmark::State& state) {
  std::vector<double> alphas(201);
  for (std::size_t i = 0; i < alphas.size(); ++i) alphas[i] = 0.05 * i;
  for (auto _ : state) benchmark::DoNotOptimize(verify_pk_nonneg(40, alphas));
}
BENCHMARK(BM_VerifyPk)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const WaveformPair w = WaveformPair::constant(0.5, 0.0, 1.0);
  SimConfig cfg;
  cfg.tau = 1e-3;
  cfg.trials = 1000;
  cfg.strategy = state.range(0) == 0 ? Strategy::kConvexOptimal : Strategy::kConcaveOptimal;
  const ObjectiveFn g = state.range(0) == 0 ? error_objective() : ambiguity_objective();
  for (auto _ : state) benchmark::DoNotOptimize(simulate(w, 0.5, cfg, g));
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Philox(benchmark::State& state) {
  RandomStream rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.uniform());
}
BENCHMARK(BM_Philox);

}  // namespace
}  // namespace qdisc

BENCHMARK_MAIN();
