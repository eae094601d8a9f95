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

#include "qdisc/dolinar.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "qdisc/errors.h"
#include "qdisc/rng.h"

namespace qdisc {
namespace {

constexpr std::size_t kHistogramBins = 20;

// Non-empty, comment-stripped lines with their 1-based line numbers.
std::vector<std::pair<int, std::string>> content_lines(std::istream& in) {
  std::vector<std::pair<int, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.emplace_back(number, line);
  }
  return out;
}

[[noreturn]] void bad_line(int number, const std::string& what) {
  throw ValidationError("line " + std::to_string(number) + ": " + what);
}

void check_prior(double prior) {
  if (!(prior > 0.0 && prior <= 0.5)) throw ValidationError("prior must lie in (0, 1/2]");
}

void check_rate(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("rates must be finite and nonnegative");
}

// Per-step click statistics of one local-oscillator choice.
struct Channel {
  double signal = 0.0;
  double click0 = 0.0;  // Pr(click | X = 0)
  double click1 = 0.0;
  double quiet0 = 1.0;  // Pr(no click | X = 0)
  double quiet1 = 1.0;
  int halt = -1;        // posterior a click halts at, or -1

  static Channel make(double s0, double s1, double ell, double tau) {
    if (!std::isfinite(ell)) throw NumericalError("local oscillator is not finite");
    const double l0 = (s0 + ell) * (s0 + ell) * tau;
    const double l1 = (s1 + ell) * (s1 + ell) * tau;
    return {ell, -std::expm1(-l0), -std::expm1(-l1), std::exp(-l0), std::exp(-l1), -1};
  }

  // Returns the updated posterior and whether a click happened.
  std::pair<double, bool> step(double p, double u) const {
    const double click = (1.0 - p) * click0 + p * click1;
    if (u < click) return {std::min(1.0, p * click1 / click), true};
    const double quiet = (1.0 - p) * quiet0 + p * quiet1;
    return {std::min(1.0, p * quiet1 / quiet), false};
  }
};

}  // namespace

WaveformPair::WaveformPair(double duration, std::vector<WaveformSegment> segments)
    : duration_(duration), segments_(std::move(segments)) {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ValidationError("duration must be positive");
  if (segments_.empty()) throw ValidationError("waveform needs at least one segment");
  if (segments_.front().start > 0.0) throw ValidationError("waveform must start at t = 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const WaveformSegment& s = segments_[i];
    if (!std::isfinite(s.start) || !std::isfinite(s.s0) || !std::isfinite(s.s1)) {
      throw ValidationError("waveform values must be finite");
    }
    if (s.s1 < s.s0) throw ValidationError("waveform needs s1(t) >= s0(t); swap the labels");
    if (i > 0 && !(s.start > segments_[i - 1].start)) {
      throw ValidationError("waveform times must be strictly increasing");
    }
  }
}

WaveformPair WaveformPair::constant(double duration, double s0, double s1) {
  return WaveformPair(duration, {{0.0, s0, s1}});
}

WaveformPair WaveformPair::parse(std::istream& in) {
  const auto lines = content_lines(in);
  if (lines.empty()) throw ValidationError("empty waveform file");
  double duration = 0.0;
  {
    std::istringstream head(lines[0].second);
    std::string tag;
    if (!(head >> tag >> duration) || tag != "T") bad_line(lines[0].first, "expected 'T <duration>'");
  }
  std::vector<WaveformSegment> segments;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i].second);
    WaveformSegment s;
    std::string extra;
    if (!(row >> s.start >> s.s0 >> s.s1) || (row >> extra)) {
      bad_line(lines[i].first, "expected 't s0 s1'");
    }
    segments.push_back(s);
  }
  return WaveformPair(duration, std::move(segments));
}

WaveformPair WaveformPair::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open waveform file " + path.string());
  return parse(in);
}

std::pair<double, double> WaveformPair::at(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double x, const WaveformSegment& s) { return x < s.start; });
  if (it != segments_.begin()) --it;
  return {it->s0, it->s1};
}

double WaveformPair::energy() const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double begin = std::max(0.0, segments_[i].start);
    const double end = i + 1 < segments_.size() ? std::min(duration_, segments_[i + 1].start) : duration_;
    if (end <= begin) continue;
    const double d = segments_[i].s1 - segments_[i].s0;
    sum.add(d * d * (end - begin));
  }
  return sum.value();
}

SampledWaveform discretize(const WaveformPair& w, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ValidationError("tau must be positive");
  const double ratio = w.duration() / tau;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (steps == 0) throw ValidationError("tau exceeds the waveform duration");
  SampledWaveform out;
  out.tau = tau;
  out.s0.resize(steps);
  out.s1.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto [a, b] = w.at((static_cast<double>(k) + 0.5) * tau);
    out.s0[k] = a;
    out.s1[k] = b;
  }
  return out;
}

std::vector<double> energy_gap(const SampledWaveform& w) {
  std::vector<double> delta(w.steps() + 1, 0.0);
  CompensatedSum sum;
  for (std::size_t k = 0; k < w.steps(); ++k) {
    const double d = w.s1[k] - w.s0[k];
    sum.add(d * d * w.tau);
    delta[k + 1] = sum.value();
  }
  return delta;
}

double coherent_overlap(const WaveformPair& w) { return std::exp(-0.5 * w.energy()); }

double dolinar_signal(double s0, double s1, double p) {
  if (p == 0.5) {
    throw ValidationError("Dolinar signal is undefined at p = 1/2; use p = 1/2 - delta");
  }
  return (s1 * p - s0 * (1.0 - p)) / (1.0 - 2.0 * p);
}

double posterior_update(double p, double lambda0, double lambda1, double tau, bool photon) {
  check_rate(lambda0);
  check_rate(lambda1);
  if (lambda0 * tau >= 1.0 || lambda1 * tau >= 1.0) {
    throw ValidationError("lambda * tau >= 1: time step too coarse for the binary channel");
  }
  const double mean = (1.0 - p) * lambda0 + p * lambda1;
  if (photon) {
    if (mean == 0.0) throw ValidationError("a photon is impossible when both rates vanish");
    return p * lambda1 / mean;
  }
  return p * (1.0 - lambda1 * tau) / (1.0 - mean * tau);
}

double click_posterior_update(double p, double lambda0, double lambda1, double tau, bool photon) {
  check_rate(lambda0);
  check_rate(lambda1);
  const double c0 = -std::expm1(-lambda0 * tau);
  const double c1 = -std::expm1(-lambda1 * tau);
  if (photon) {
    const double click = (1.0 - p) * c0 + p * c1;
    if (click == 0.0) throw ValidationError("a photon is impossible when both rates vanish");
    return p * c1 / click;
  }
  const double n1 = std::exp(-lambda1 * tau);
  return p * n1 / ((1.0 - p) * std::exp(-lambda0 * tau) + p * n1);
}

double local_delta_b(double p, double s0, double s1, double ell) {
  const double b = bhattacharyya(p);
  if (b == 0.0) return 0.0;
  const double l0 = (s0 + ell) * (s0 + ell);
  const double l1 = (s1 + ell) * (s1 + ell);
  const double mean = (1.0 - p) * l0 + p * l1;
  if (mean == 0.0) return 0.0;
  const double p1 = p * l1 / mean;
  const double gap = std::sqrt((1.0 - p) * p1) - std::sqrt(p * (1.0 - p1));
  return mean / b * gap * gap;
}

double convex_strategy_posterior(const ConvexState& state) {
  const double target = bhattacharyya(state.prior) * std::exp(-0.5 * state.energy);
  const double root = std::min(inverse_bhattacharyya(target), 0.5 - state.delta_guard);
  return state.photons % 2 == 0 ? root : 1.0 - root;
}

double convex_strategy_step(const ConvexState& state, double s0, double s1) {
  return dolinar_signal(s0, s1, convex_strategy_posterior(state));
}

ConcaveStep concave_strategy_step(const ConcaveState& state, double s0, double s1) {
  const double threshold = std::log((1.0 - state.prior) / state.prior);
  if (state.energy < threshold) return {-s1, false, 0.0};
  if (state.stage_b_steps % 2 == 0) return {-s0, true, 1.0};
  return {-s1, true, 0.0};
}

SignalFn parse_signal_table(std::istream& in) {
  struct Row {
    double start, even, odd;
  };
  std::vector<Row> rows;
  for (const auto& [number, line] : content_lines(in)) {
    std::istringstream row(line);
    Row r{};
    if (!(row >> r.start >> r.even)) bad_line(number, "expected 't ell_even [ell_odd]'");
    if (!(row >> r.odd)) r.odd = r.even;
    std::string extra;
    if (row >> extra) bad_line(number, "expected 't ell_even [ell_odd]'");
    if (!std::isfinite(r.start) || !std::isfinite(r.even) || !std::isfinite(r.odd)) {
      bad_line(number, "values must be finite");
    }
    if (!rows.empty() && !(r.start > rows.back().start)) bad_line(number, "times must increase");
    rows.push_back(r);
  }
  if (rows.empty()) throw ValidationError("empty signal table");
  return [rows = std::move(rows)](const StepContext& ctx) {
    auto it = std::upper_bound(rows.begin(), rows.end(), ctx.time,
                               [](double t, const Row& r) { return t < r.start; });
    if (it != rows.begin()) --it;
    return ctx.photons % 2 == 0 ? it->even : it->odd;
  };
}

SignalFn load_signal_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open signal table " + path.string());
  return parse_signal_table(in);
}

double theoretical_bound(double energy, double prior, const ObjectiveFn& g, ConvexityClass cls) {
  check_prior(prior);
  const double b_star = bhattacharyya(prior) * std::exp(-0.5 * energy);
  switch (cls) {
    case ConvexityClass::kConvexAdmissible:
      return g(inverse_bhattacharyya(b_star));
    case ConvexityClass::kConcaveAdmissible:
      if (energy < std::log((1.0 - prior) / prior)) {
        throw OutOfScopeError("insufficient-energy",
                              "energy gap below log((1 - prior) / prior); stage (a) cannot finish");
      }
      return 2.0 * b_star * g.value_at_half();
    case ConvexityClass::kNeither:
      break;
  }
  throw UnsupportedObjectiveError("objective '" + g.name() +
                                  "' is neither convex- nor concave-admissible");
}

double theoretical_bound(const WaveformPair& w, double prior, const ObjectiveFn& g) {
  return theoretical_bound(w.energy(), prior, g, classify(g));
}

SimReport simulate(const WaveformPair& w, double prior, const SimConfig& cfg, const ObjectiveFn& g) {
  check_prior(prior);
  if (cfg.trials == 0) throw ValidationError("need at least one trial");
  if (!(cfg.delta_guard > 0.0 && cfg.delta_guard <= 1e-2)) {
    throw ValidationError("delta_guard must lie in (0, 1e-2]");
  }
  if (cfg.strategy == Strategy::kCustom && !cfg.custom) {
    throw ValidationError("custom strategy needs a signal function");
  }
  const SampledWaveform sampled = discretize(w, cfg.tau);
  const std::vector<double> delta = energy_gap(sampled);
  const std::size_t steps = sampled.steps();
  const double tau = cfg.tau;

  // Both optimal strategies are open-loop given the photon parity or the
  // stage counter, so their channels are tabulated once.
  std::vector<Channel> table;
  if (cfg.strategy == Strategy::kConvexOptimal) {
    table.resize(2 * steps);
    for (std::size_t k = 0; k < steps; ++k) {
      for (int parity = 0; parity < 2; ++parity) {
        const ConvexState state{prior, delta[k], parity, cfg.delta_guard};
        table[2 * k + parity] = Channel::make(sampled.s0[k], sampled.s1[k],
                                              convex_strategy_step(state, sampled.s0[k], sampled.s1[k]), tau);
      }
    }
  } else if (cfg.strategy == Strategy::kConcaveOptimal) {
    table.resize(steps);
    std::size_t in_stage_b = 0;
    for (std::size_t k = 0; k < steps; ++k) {
      const ConcaveStep step =
          concave_strategy_step({prior, delta[k], in_stage_b}, sampled.s0[k], sampled.s1[k]);
      table[k] = Channel::make(sampled.s0[k], sampled.s1[k], step.signal, tau);
      table[k].halt = step.halt_posterior > 0.5 ? 1 : 0;
      if (step.stage_b) ++in_stage_b;
    }
  }
  const bool enters_stage_b =
      cfg.strategy == Strategy::kConcaveOptimal && delta[steps - 1] >= std::log((1.0 - prior) / prior);

  const std::size_t trials = cfg.trials;
  const std::size_t recorded = std::min(cfg.record_trajectories, trials);
  std::vector<double> terminal(trials);
  std::vector<char> halted(trials, 0);
  std::vector<Trajectory> trajectories(recorded);

  const long n = static_cast<long>(trials);
#pragma omp parallel for schedule(static)
  for (long trial = 0; trial < n; ++trial) {
    RandomStream rng(cfg.seed, static_cast<std::uint64_t>(trial));
    Trajectory* record = static_cast<std::size_t>(trial) < recorded ? &trajectories[trial] : nullptr;
    if (record) record->steps.reserve(steps);
    double p = prior;
    int photons = 0;
    bool stopped = false;
    for (std::size_t k = 0; k < steps; ++k) {
      Channel custom;
      const Channel* ch;
      switch (cfg.strategy) {
        case Strategy::kConvexOptimal:
          ch = &table[2 * k + (photons & 1)];
          break;
        case Strategy::kConcaveOptimal:
          ch = &table[k];
          break;
        default: {
          const StepContext ctx{k, static_cast<double>(k) * tau, sampled.s0[k], sampled.s1[k], p, photons};
          custom = Channel::make(sampled.s0[k], sampled.s1[k], cfg.custom(ctx), tau);
          ch = &custom;
        }
      }
      const auto [next, click] = ch->step(p, rng.uniform());
      p = next;
      if (click) ++photons;
      if (click && ch->halt >= 0) {
        p = ch->halt;
        stopped = true;
      }
      if (record) record->steps.push_back({static_cast<double>(k) * tau, ch->signal, click ? 1 : 0, p});
      if (stopped) break;
    }
    if (!stopped && enters_stage_b) p = 0.5;
    terminal[trial] = p;
    halted[trial] = stopped ? 1 : 0;
    if (record) {
      record->terminal_posterior = p;
      record->halted = stopped;
    }
  }

  SimReport report;
  report.n_trials = trials;
  report.tau = tau;
  report.steps = steps;
  report.energy = delta[steps];
  std::vector<double> gv(trials), bv(trials);
  std::size_t halted_count = 0;
  report.terminal_histogram.assign(kHistogramBins, 0);
  for (std::size_t i = 0; i < trials; ++i) {
    gv[i] = g(terminal[i]);
    bv[i] = bhattacharyya(terminal[i]);
    halted_count += halted[i];
    const auto bin = std::min(kHistogramBins - 1, static_cast<std::size_t>(terminal[i] * kHistogramBins));
    ++report.terminal_histogram[bin];
  }
  const SampleStats gs = sample_stats(gv);
  report.estimate = gs.mean;
  report.std_error = gs.std_error;
  report.posterior = sample_stats(terminal);
  report.bhattacharyya = sample_stats(bv);
  report.halted_fraction = static_cast<double>(halted_count) / static_cast<double>(trials);
  try {
    report.theory = theoretical_bound(w, prior, g);
  } catch (const OutOfScopeError& e) {
    report.theory_note = e.reason();
  }
  report.terminal_posteriors = std::move(terminal);
  report.trajectories = std::move(trajectories);
  return report;
}

}  // namespace qdisc
