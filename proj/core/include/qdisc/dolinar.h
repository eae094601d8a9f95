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

#ifndef QDISC_DOLINAR_H_
#define QDISC_DOLINAR_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdisc/numeric.h"
#include "qdisc/objectives.h"

namespace qdisc {

// Piecewise-constant real amplitudes s0(t) <= s1(t) on [0, T].
struct WaveformSegment {
  double start = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
};

class WaveformPair {
 public:
  WaveformPair(double duration, std::vector<WaveformSegment> segments);
  static WaveformPair constant(double duration, double s0, double s1);

  // "T <duration>" followed by "t s0 s1" lines; '#' starts a comment.
  static WaveformPair parse(std::istream& in);
  static WaveformPair load(const std::filesystem::path& path);

  double duration() const { return duration_; }
  const std::vector<WaveformSegment>& segments() const { return segments_; }
  std::pair<double, double> at(double t) const;
  // Integral of (s1 - s0)^2 over [0, T].
  double energy() const;

 private:
  double duration_;
  std::vector<WaveformSegment> segments_;
};

// Values at the midpoints of K = round(T / tau) steps.
struct SampledWaveform {
  double tau = 0.0;
  std::vector<double> s0;
  std::vector<double> s1;

  std::size_t steps() const { return s0.size(); }
};

SampledWaveform discretize(const WaveformPair& w, double tau);

// delta[k] = sum_{j<k} (s1[j] - s0[j])^2 tau, k = 0..K.
std::vector<double> energy_gap(const SampledWaveform& w);

// |<s0|s1>| = exp(-energy / 2).
double coherent_overlap(const WaveformPair& w);

// Local oscillator for posterior p = Pr(X = 1): (s1 p - s0 (1 - p)) / (1 - 2p).
// A photon under this signal moves the posterior to 1 - p.
double dolinar_signal(double s0, double s1, double p);

// Binary-channel Bayes step with Pr(photon | X = i) = lambda_i tau.
double posterior_update(double p, double lambda0, double lambda1, double tau, bool photon);

// Bayes step with Pr(click | X = i) = 1 - exp(-lambda_i tau).
double click_posterior_update(double p, double lambda0, double lambda1, double tau, bool photon);

// First-order decrease rate of b(p) per unit time under local oscillator
// ell, (lambda_bar / b(p)) (sqrt((1-p) p1) - sqrt(p (1-p1)))^2 with p1 the
// photon posterior. Bounded by b(p)(s1 - s0)^2; b itself decays at half
// this rate.
double local_delta_b(double p, double s0, double s1, double ell);

struct ConvexState {
  double prior = 0.5;
  double energy = 0.0;  // delta[k]
  int photons = 0;
  double delta_guard = 1e-6;
};

// Posterior the convex-optimal receiver is at: the root of
// b(p) = b(prior) exp(-energy / 2) below 1/2 for even photon counts, above
// for odd, kept at least delta_guard away from 1/2.
double convex_strategy_posterior(const ConvexState& state);
double convex_strategy_step(const ConvexState& state, double s0, double s1);

struct ConcaveState {
  double prior = 0.5;
  double energy = 0.0;
  std::size_t stage_b_steps = 0;  // steps already spent in stage (b)
};

struct ConcaveStep {
  double signal = 0.0;
  bool stage_b = false;
  double halt_posterior = 0.0;  // posterior after a photon
};

// Stage (a) nulls s1 until energy reaches log((1 - prior) / prior); stage
// (b) alternates nulling s0 and s1 every step.
ConcaveStep concave_strategy_step(const ConcaveState& state, double s0, double s1);

enum class Strategy { kConvexOptimal, kConcaveOptimal, kCustom };

struct StepContext {
  std::size_t step = 0;
  double time = 0.0;
  double s0 = 0.0;
  double s1 = 0.0;
  double posterior = 0.0;
  int photons = 0;
};

using SignalFn = std::function<double(const StepContext&)>;

// "t ell_even [ell_odd]" lines: piecewise-constant signal chosen by photon
// parity.
SignalFn parse_signal_table(std::istream& in);
SignalFn load_signal_table(const std::filesystem::path& path);

struct SimConfig {
  double tau = 1e-3;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::kConvexOptimal;
  SignalFn custom;
  double delta_guard = 1e-6;
  std::size_t record_trajectories = 0;  // first n trials keep every step
};

struct StepRecord {
  double time = 0.0;
  double signal = 0.0;
  int photon = 0;
  double posterior = 0.0;  // after the step
};

struct Trajectory {
  std::vector<StepRecord> steps;
  double terminal_posterior = 0.0;
  bool halted = false;
};

struct SimReport {
  double estimate = 0.0;  // mean g(p(T))
  double std_error = 0.0;
  std::optional<double> theory;
  std::string theory_note;  // why theory is absent
  std::size_t n_trials = 0;
  double tau = 0.0;
  std::size_t steps = 0;
  double energy = 0.0;  // delta[K] of the sampled waveform
  std::vector<std::size_t> terminal_histogram;  // 20 bins over [0, 1]
  SampleStats posterior;                        // of p(T)
  SampleStats bhattacharyya;                    // of b(p(T))
  double halted_fraction = 0.0;
  std::vector<double> terminal_posteriors;
  std::vector<Trajectory> trajectories;
};

SimReport simulate(const WaveformPair& w, double prior, const SimConfig& cfg, const ObjectiveFn& g);

// Best achievable E g(p(T)) given the energy gap. Throws
// UnsupportedObjectiveError for objectives of neither class and
// OutOfScopeError("insufficient-energy") for concave objectives when
// energy < log((1 - prior) / prior).
double theoretical_bound(const WaveformPair& w, double prior, const ObjectiveFn& g);
double theoretical_bound(double energy, double prior, const ObjectiveFn& g, ConvexityClass cls);

}  // namespace qdisc

#endif  // QDISC_DOLINAR_H_
