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

#include "commands.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "qdisc/dolinar.h"
#include "qdisc/errors.h"
#include "qdisc/objectives.h"
#include "qdisc/optimal.h"
#include "qdisc/oracle.h"
#include "qdisc/problem.h"
#include "qdisc/renyi.h"
#include "qdisc/rng.h"

namespace qdisc::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Common {
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", common.output, "Write the report here instead of stdout");
  cmd->add_option("--seed", common.seed, "Random seed")->capture_default_str();
}

// Collects CSV rows with a fixed header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& out) const {
    write_line(out, header_);
    for (const auto& r : rows_) write_line(out, r);
  }

 private:
  static void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }

Json matrix_json(const Sym2& m) { return Json::array({Json::array({m.xx, m.xy}), Json::array({m.xy, m.yy})}); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

Json out_of_scope_json(const OutOfScopeError& e) {
  Json j;
  j["status"] = "out-of-scope";
  j["reason"] = e.reason();
  j["message"] = e.what();
  return j;
}

void write_out_of_scope(std::ostream& out, const Common& common, const OutOfScopeError& e) {
  if (common.format == "csv") {
    out << "status,reason\nout-of-scope," << e.reason() << '\n';
  } else {
    out << out_of_scope_json(e).dump(2) << '\n';
  }
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  double pi = 0.5;
  double overlap = 0.0;
  std::string objective;
};

int cmd_solve(const SolveArgs& a, const Common& common, std::ostream& out) {
  const DiscriminationProblem problem(a.pi, a.overlap);
  const ObjectiveFn g = builtin_objective(a.objective);
  const ConvexityClass cls = classify(g);
  const OptimalSolution sol = theorem_pure_value(problem, g, cls);
  const auto q = transition_probabilities(problem, sol.povm);
  std::vector<std::optional<double>> posterior(sol.povm.size());
  std::vector<double> prob(sol.povm.size(), 0.0);
  for (const Outcome& o : sol.distribution.entries) {
    posterior[o.element] = o.posterior;
    prob[o.element] = o.probability;
  }
  if (common.format == "csv") {
    CsvTable t({"pi", "overlap", "objective", "class", "regime", "value", "element", "weight",
                "angle", "outcome_prob", "posterior"});
    for (std::size_t j = 0; j < sol.povm.size(); ++j) {
      const auto& r1 = sol.povm[j].rank1();
      t.row({cell(a.pi), cell(a.overlap), g.name(), std::string(to_string(cls)),
             std::string(to_string(sol.regime)), cell(sol.value), cell(j),
             r1 ? cell(r1->weight) : "", r1 ? cell(r1->angle) : "", cell(prob[j]),
             posterior[j] ? cell(*posterior[j]) : ""});
    }
    t.write(out);
    return kExitOk;
  }
  Json j;
  j["objective"] = g.name();
  j["class"] = to_string(cls);
  j["pi"] = a.pi;
  j["overlap"] = a.overlap;
  j["regime"] = to_string(sol.regime);
  j["value"] = sol.value;
  j["bhattacharyya"] = bhattacharyya_floor(problem);
  Json povm = Json::array();
  for (std::size_t e = 0; e < sol.povm.size(); ++e) {
    Json el;
    const auto& r1 = sol.povm[e].rank1();
    el["weight"] = r1 ? Json(r1->weight) : Json(nullptr);
    el["angle"] = r1 ? Json(r1->angle) : Json(nullptr);
    el["matrix"] = matrix_json(sol.povm[e].matrix());
    el["transition"] = Json::array({q[e][0], q[e][1]});
    povm.push_back(el);
  }
  j["povm"] = povm;
  Json posts = Json::array(), probs = Json::array();
  for (std::size_t e = 0; e < sol.povm.size(); ++e) {
    posts.push_back(posterior[e] ? Json(*posterior[e]) : Json(nullptr));
    probs.push_back(prob[e]);
  }
  j["posteriors"] = posts;
  j["outcome_probs"] = probs;
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ------------------------------------------------------------- classify

int cmd_classify(const std::string& objective, std::size_t grid, const Common& common,
                 std::ostream& out) {
  const ObjectiveFn g = builtin_objective(objective);
  const ClassifyReport r = classify_detailed(g, grid);
  const std::string method =
      r.method == ClassifyMethod::kDerivativeRatio ? "derivative-ratio" : "chord-slopes";
  if (common.format == "csv") {
    CsvTable t({"objective", "class", "method", "convex_points", "concave_points", "neutral_points"});
    t.row({g.name(), std::string(to_string(r.result)), method, cell(r.convex_points),
           cell(r.concave_points), cell(r.neutral_points)});
    t.write(out);
    return kExitOk;
  }
  Json j;
  j["objective"] = g.name();
  j["class"] = to_string(r.result);
  j["method"] = method;
  j["convex_points"] = r.convex_points;
  j["concave_points"] = r.concave_points;
  j["neutral_points"] = r.neutral_points;
  out << j.dump(2) << '\n';
  return kExitOk;
}

// --------------------------------------------------------------- verify

struct VerifyArgs {
  std::string suite;
  int kmax = 40;
  std::string alpha_grid = "0:10:2001";
  std::string series_alphas = "0.25,0.5,2,5";
  int series_order = 25;
  std::size_t samples = 200;
  std::size_t problems = 25;
  std::string pi_grid = "0.05:0.5:10";
  std::string overlap_grid = "0.05:0.95:10";
  std::string objectives = "error,entropy,renyi:2";
  int outcomes = 0;  // 0 picks 2 for convex and 3 for concave objectives
  double tolerance = 5e-4;
};

// Emits a report table and a trailing summary; CSV puts the summary in
// '#' comment lines so the table stays machine readable.
int finish_verify(const std::string& suite, const CsvTable& table, bool ok, const Json& summary,
                  const Common& common, std::ostream& out) {
  if (common.format == "csv") {
    table.write(out);
    out << "# suite=" << suite << " status=" << (ok ? "pass" : "fail") << '\n';
  } else {
    Json j;
    j["suite"] = suite;
    j["status"] = ok ? "pass" : "fail";
    j["cases"] = table.size();
    j["summary"] = summary;
    out << j.dump(2) << '\n';
  }
  return ok ? kExitOk : kExitViolation;
}

int verify_lemma1(const VerifyArgs& a, const Common& common, std::ostream& out) {
  CsvTable t({"problem", "pi", "overlap", "outcomes", "sum_qb", "floor", "gap"});
  bool ok = true;
  double worst = 0.0;
  const std::size_t problems = std::max<std::size_t>(1, a.problems);
  RandomStream rng(common.seed, 0xB1u);
  for (std::size_t i = 0; i < problems; ++i) {
    const double pi = 0.01 + 0.49 * rng.uniform();
    const double c = 0.99 * rng.uniform();
    const DiscriminationProblem problem(pi, c);
    const std::size_t n = a.samples / problems + (i < a.samples % problems ? 1 : 0);
    const auto povms = eligible_continuum_sample(problem, n, common.seed + 1000 * (i + 1));
    for (const Povm& povm : povms) {
      const double sum = expected_objective(outcome_distribution(problem, povm), bhattacharyya);
      const double floor = bhattacharyya_floor(problem);
      const double gap = sum - floor;
      worst = std::max(worst, std::abs(gap));
      if (!(std::abs(gap) < 1e-9) || !is_eligible(problem, povm)) ok = false;
      t.row({cell(i), cell(pi), cell(c), cell(povm.size()), cell(sum), cell(floor), cell(gap)});
    }
  }
  return finish_verify("lemma1", t, ok, Json{{"max_abs_gap", worst}}, common, out);
}

int verify_theorem2(const VerifyArgs& a, const Common& common, std::ostream& out) {
  CsvTable t({"pi", "c", "objective", "outcomes", "closed_form", "oracle", "gap", "tolerance", "status"});
  bool ok = true;
  double worst = 0.0;
  for (const std::string& name : split_list(a.objectives)) {
    const ObjectiveFn g = builtin_objective(name);
    const ConvexityClass cls = classify(g);
    const int outcomes =
        a.outcomes > 0 ? a.outcomes : (cls == ConvexityClass::kConcaveAdmissible ? 3 : 2);
    for (double pi : parse_grid(a.pi_grid)) {
      for (double c : parse_grid(a.overlap_grid)) {
        const DiscriminationProblem problem(pi, c);
        double closed = 0.0;
        try {
          closed = theorem_pure_value(problem, g, cls).value;
        } catch (const OutOfScopeError& e) {
          t.row({cell(pi), cell(c), g.name(), cell(outcomes), "", "", "", cell(a.tolerance), e.reason()});
          continue;
        }
        const OracleResult r = brute_force_optimum(problem, g, SearchSpec::defaults(outcomes));
        const double gap = r.value - closed;
        const bool cell_ok = gap >= -1e-6 && gap <= a.tolerance;
        ok = ok && cell_ok;
        worst = std::max(worst, std::abs(gap));
        t.row({cell(pi), cell(c), g.name(), cell(outcomes), cell(closed), cell(r.value), cell(gap),
               cell(a.tolerance), cell_ok ? "ok" : "violation"});
      }
    }
  }
  return finish_verify("theorem2", t, ok, Json{{"max_abs_gap", worst}}, common, out);
}

int verify_renyi_pk(const VerifyArgs& a, const Common& common, std::ostream& out) {
  const std::vector<double> alphas = parse_grid(a.alpha_grid);
  const PkReport r = verify_pk_nonneg(a.kmax, alphas, common.format == "csv");
  CsvTable t({"k", "alpha", "p_k", "margin"});
  for (const PkRow& row : r.rows) t.row({cell(row.k), cell(row.alpha), cell(row.value), cell(row.margin)});
  Json summary{{"checked", r.checked},
               {"worst_margin", r.worst_margin},
               {"worst_k", r.worst_k},
               {"worst_alpha", r.worst_alpha}};
  if (common.format != "csv") {
    Json j;
    j["suite"] = "renyi-pk";
    j["status"] = r.ok ? "pass" : "fail";
    j["cases"] = r.checked;
    j["summary"] = summary;
    out << j.dump(2) << '\n';
    return r.ok ? kExitOk : kExitViolation;
  }
  return finish_verify("renyi-pk", t, r.ok, summary, common, out);
}

int verify_renyi_series(const VerifyArgs& a, const Common& common, std::ostream& out) {
  CsvTable t({"alpha", "k", "series", "p_k_over_factorial", "rel_err"});
  bool ok = true;
  double worst = 0.0;
  for (const std::string& s : split_list(a.series_alphas)) {
    const double alpha = std::stod(s);
    const std::vector<double> coeffs = phi_series_coeffs(alpha, a.series_order);
    double factorial = 1.0;
    for (int k = 0; k <= a.series_order; ++k) {
      if (k > 0) factorial *= k;
      const PkPolynomial pk(k);
      const double expected = pk(alpha) / factorial;
      // P_0..P_2 vanish identically, so compare against the term scale there.
      const double denom = k < 3 ? pk.scale(alpha) / factorial : std::abs(expected);
      const double rel = denom > 0.0 ? std::abs(coeffs[k] - expected) / denom : std::abs(coeffs[k]);
      if (!(rel <= 1e-10)) ok = false;
      worst = std::max(worst, rel);
      t.row({cell(alpha), cell(k), cell(coeffs[k]), cell(expected), cell(rel)});
    }
  }
  return finish_verify("renyi-series", t, ok, Json{{"max_rel_err", worst}}, common, out);
}

int verify_local_db(const VerifyArgs& a, const Common& common, std::ostream& out) {
  CsvTable t({"p", "s0", "s1", "ell", "delta_b", "bound", "margin", "outside", "flip_err"});
  bool ok = true;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < a.samples; ++i) {
    RandomStream rng(common.seed, i);
    const double p = 0.01 + 0.98 * rng.uniform();
    const double s0 = 4.0 * rng.uniform() - 2.0;
    const double s1 = s0 + 3.0 * rng.uniform();
    const double ell = -3.0 + 6.0 * rng.uniform() - 0.5 * (s0 + s1);
    const double db = local_delta_b(p, s0, s1, ell);
    const double bound = bhattacharyya(p) * (s1 - s0) * (s1 - s0);
    const bool outside = !(ell > -s1 && ell < -s0);
    bool case_ok = db <= bound + 1e-12;
    if (outside) case_ok = case_ok && std::abs(db - bound) <= 1e-10;
    if (!outside) case_ok = case_ok && db < bound - 1e-10;
    double flip = 0.0;
    if (std::abs(p - 0.5) > 1e-6) {
      const double sig = dolinar_signal(s0, s1, p);
      const double l0 = (s0 + sig) * (s0 + sig), l1 = (s1 + sig) * (s1 + sig);
      const double mean = (1.0 - p) * l0 + p * l1;
      if (mean > 0.0) flip = std::abs(p * l1 / mean - (1.0 - p));
      case_ok = case_ok && flip <= 1e-10;
    }
    if (!case_ok) {
      ok = false;
      ++failures;
    }
    t.row({cell(p), cell(s0), cell(s1), cell(ell), cell(db), cell(bound), cell(bound - db),
           outside ? "1" : "0", cell(flip)});
  }
  return finish_verify("local-db", t, ok, Json{{"failures", failures}}, common, out);
}

// ------------------------------------------------------------- simulate

struct SimulateArgs {
  double pi = 0.5;
  double tau = 1e-3;
  std::size_t trials = 10000;
  std::string strategy = "convex";
  std::string objective = "error";
  std::string waveform;
  double duration = 0.5;
  double amplitude = 1.0;
  double delta_guard = 1e-6;
  std::string dump;
  std::size_t record = 10;
};

int cmd_simulate(const SimulateArgs& a, const Common& common, std::ostream& out) {
  const WaveformPair w =
      a.waveform.empty() ? WaveformPair::constant(a.duration, 0.0, a.amplitude) : WaveformPair::load(a.waveform);
  const ObjectiveFn g = builtin_objective(a.objective);
  SimConfig cfg;
  cfg.tau = a.tau;
  cfg.trials = a.trials;
  cfg.seed = common.seed;
  cfg.delta_guard = a.delta_guard;
  cfg.record_trajectories = a.dump.empty() ? 0 : a.record;
  if (a.strategy == "convex") {
    cfg.strategy = Strategy::kConvexOptimal;
  } else if (a.strategy == "concave") {
    cfg.strategy = Strategy::kConcaveOptimal;
  } else if (a.strategy.starts_with("custom:")) {
    cfg.strategy = Strategy::kCustom;
    cfg.custom = load_signal_table(a.strategy.substr(7));
  } else {
    throw ValidationError("strategy must be convex, concave or custom:<file>");
  }
  const SimReport r = simulate(w, a.pi, cfg, g);

  if (!a.dump.empty()) {
    std::ofstream dump(a.dump);
    if (!dump) throw ValidationError("cannot write " + a.dump);
    CsvTable t({"trial", "step", "t", "signal", "photon", "posterior"});
    for (std::size_t i = 0; i < r.trajectories.size(); ++i) {
      const Trajectory& tr = r.trajectories[i];
      for (std::size_t k = 0; k < tr.steps.size(); ++k) {
        const StepRecord& s = tr.steps[k];
        t.row({cell(i), cell(k), cell(s.time), cell(s.signal), cell(s.photon), cell(s.posterior)});
      }
    }
    t.write(dump);
  }

  if (common.format == "csv") {
    CsvTable t({"estimate", "std_error", "theory", "n_trials", "tau", "steps", "energy",
                "mean_posterior", "std_bhattacharyya", "halted_fraction"});
    t.row({cell(r.estimate), cell(r.std_error), r.theory ? cell(*r.theory) : "", cell(r.n_trials),
           cell(r.tau), cell(r.steps), cell(r.energy), cell(r.posterior.mean),
           cell(r.bhattacharyya.std_dev), cell(r.halted_fraction)});
    t.write(out);
    return kExitOk;
  }
  Json j;
  j["objective"] = g.name();
  j["strategy"] = a.strategy;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["theory"] = r.theory ? Json(*r.theory) : Json(nullptr);
  if (!r.theory_note.empty()) j["theory_note"] = r.theory_note;
  j["n_trials"] = r.n_trials;
  j["tau"] = r.tau;
  j["steps"] = r.steps;
  j["energy"] = r.energy;
  j["overlap"] = coherent_overlap(w);
  j["mean_posterior"] = r.posterior.mean;
  j["mean_bhattacharyya"] = r.bhattacharyya.mean;
  j["std_bhattacharyya"] = r.bhattacharyya.std_dev;
  j["halted_fraction"] = r.halted_fraction;
  j["terminal_histogram"] = r.terminal_histogram;
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string pi = "0.5";
  std::string overlap;
  std::string energy;
  std::string objective = "error";
  bool mc = false;
  std::size_t trials = 2000;
  double tau = 1e-3;
};

int cmd_sweep(const SweepArgs& a, const Common& common, std::ostream& out) {
  if (a.overlap.empty() == a.energy.empty()) {
    throw ValidationError("sweep needs exactly one of --overlap and --energy");
  }
  const bool by_energy = !a.energy.empty();
  const std::vector<double> second = parse_grid(by_energy ? a.energy : a.overlap);
  std::vector<std::string> header{"pi", "overlap", "energy", "objective", "class", "regime", "value", "status"};
  if (a.mc) {
    header.push_back("mc_estimate");
    header.push_back("mc_std_error");
  }
  CsvTable t(header);
  Json rows = Json::array();
  for (const std::string& name : split_list(a.objective)) {
    const ObjectiveFn g = builtin_objective(name);
    const ConvexityClass cls = classify(g);
    for (double pi : parse_grid(a.pi)) {
      for (double x : second) {
        const double energy = by_energy ? x : (x > 0.0 ? -2.0 * std::log(x) : HUGE_VAL);
        const double c = by_energy ? std::exp(-0.5 * x) : x;
        const DiscriminationProblem problem(pi, c);
        std::string status = "ok", regime;
        std::optional<double> value;
        try {
          const OptimalSolution s = theorem_pure_value(problem, g, cls);
          value = s.value;
          regime = to_string(s.regime);
        } catch (const OutOfScopeError& e) {
          status = e.reason();
        }
        std::optional<SimReport> mc;
        if (a.mc && std::isfinite(energy) && cls != ConvexityClass::kNeither) {
          SimConfig cfg;
          cfg.tau = a.tau;
          cfg.trials = a.trials;
          cfg.seed = common.seed;
          cfg.strategy = cls == ConvexityClass::kConvexAdmissible ? Strategy::kConvexOptimal
                                                                  : Strategy::kConcaveOptimal;
          mc = simulate(WaveformPair::constant(1.0, 0.0, std::sqrt(energy)), pi, cfg, g);
        }
        std::vector<std::string> row{cell(pi), cell(c), std::isfinite(energy) ? cell(energy) : "inf",
                                     g.name(), std::string(to_string(cls)), regime,
                                     value ? cell(*value) : "", status};
        Json j;
        j["pi"] = pi;
        j["overlap"] = c;
        j["energy"] = std::isfinite(energy) ? Json(energy) : Json(nullptr);
        j["objective"] = g.name();
        j["class"] = to_string(cls);
        j["regime"] = regime.empty() ? Json(nullptr) : Json(regime);
        j["value"] = value ? Json(*value) : Json(nullptr);
        j["status"] = status;
        if (a.mc) {
          row.push_back(mc ? cell(mc->estimate) : "");
          row.push_back(mc ? cell(mc->std_error) : "");
          j["mc_estimate"] = mc ? Json(mc->estimate) : Json(nullptr);
          j["mc_std_error"] = mc ? Json(mc->std_error) : Json(nullptr);
        }
        t.row(std::move(row));
        rows.push_back(std::move(j));
      }
    }
  }
  if (common.format == "csv") {
    t.write(out);
  } else {
    out << rows.dump(2) << '\n';
  }
  return kExitOk;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.starts_with(flag + "=");
  });
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

std::vector<double> parse_grid(std::string_view spec) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw ValidationError("bad grid '" + std::string(spec) + "'; expected a:b:n or a number");
    }
    return v;
  };
  const auto c1 = spec.find(':');
  if (c1 == std::string_view::npos) return {number(spec)};
  const auto c2 = spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) {
    throw ValidationError("bad grid '" + std::string(spec) + "'; expected a:b:n");
  }
  const double lo = number(spec.substr(0, c1));
  const double hi = number(spec.substr(c1 + 1, c2 - c1 - 1));
  const double count = number(spec.substr(c2 + 1));
  if (!(count >= 1.0) || count != std::floor(count)) {
    throw ValidationError("grid point count must be a positive integer");
  }
  const auto n = static_cast<std::size_t>(count);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  if (n > 1) out.back() = hi;
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].starts_with("--config=")) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path);
  std::vector<std::string> merged = args;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(path + ":" + std::to_string(number) + ": empty key");
    const std::string flag = "--" + key;
    if (key == "config" || has_flag(args, flag)) continue;
    if (value == "true") {
      merged.push_back(flag);
    } else if (value != "false") {
      merged.push_back(flag);
      merged.push_back(value);
    }
  }
  return merged;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal measurements for two pure states, with brute-force checks and a "
               "photon-counting receiver simulator",
               "qdisc"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "File of 'key = value' lines mirroring flags (flags win)");

  Common common;

  SolveArgs solve_args;
  auto* solve = app.add_subcommand("solve", "Closed-form optimal measurement and value");
  solve->add_option("--pi", solve_args.pi, "Prior Pr(X = 1) in (0, 1/2]")->required();
  solve->add_option("--overlap", solve_args.overlap, "Overlap c in [0, 1]")->required();
  solve->add_option("--objective", solve_args.objective,
                    "error | entropy | ambiguity | bhattacharyya | renyi:<alpha|inf>")
      ->required();
  add_common(solve, common);

  std::string classify_objective;
  std::size_t classify_grid = 1001;
  auto* cls = app.add_subcommand("classify", "Convexity class of an objective relative to b(p)");
  cls->add_option("--objective", classify_objective, "Objective spec")->required();
  cls->add_option("--grid", classify_grid, "Grid size")->capture_default_str();
  add_common(cls, common);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite; exit 1 on any violation");
  verify->add_option("suite,--suite", verify_args.suite,
                     "lemma1 | theorem2 | renyi-pk | renyi-series | local-db")
      ->required();
  verify->add_option("--kmax", verify_args.kmax, "Largest k for renyi-pk")->capture_default_str();
  verify->add_option("--alpha-grid", verify_args.alpha_grid, "alpha grid a:b:n for renyi-pk")
      ->capture_default_str();
  verify->add_option("--alphas", verify_args.series_alphas, "Comma list for renyi-series")
      ->capture_default_str();
  verify->add_option("--order", verify_args.series_order, "Series order for renyi-series")
      ->capture_default_str();
  verify->add_option("--samples", verify_args.samples, "Samples for lemma1 / local-db")
      ->capture_default_str();
  verify->add_option("--problems", verify_args.problems, "Random problems for lemma1")
      ->capture_default_str();
  verify->add_option("--pi-grid", verify_args.pi_grid, "Prior grid for theorem2")->capture_default_str();
  verify->add_option("--overlap-grid", verify_args.overlap_grid, "Overlap grid for theorem2")
      ->capture_default_str();
  verify->add_option("--objectives", verify_args.objectives, "Comma list for theorem2")
      ->capture_default_str();
  verify->add_option("--outcomes", verify_args.outcomes, "Oracle outcome count (0 = by class)")
      ->capture_default_str();
  verify->add_option("--tolerance", verify_args.tolerance, "Allowed oracle excess for theorem2")
      ->capture_default_str();
  add_common(verify, common);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo run of the photon-counting receiver");
  sim->add_option("--pi", sim_args.pi, "Prior Pr(X = 1) in (0, 1/2]")->capture_default_str();
  sim->add_option("--tau", sim_args.tau, "Time step")->capture_default_str();
  sim->add_option("--trials", sim_args.trials, "Number of trajectories")->capture_default_str();
  sim->add_option("--strategy", sim_args.strategy, "convex | concave | custom:<file>")
      ->capture_default_str();
  sim->add_option("--objective", sim_args.objective, "Objective spec")->capture_default_str();
  auto* wave = sim->add_option("--waveform", sim_args.waveform, "Waveform file ('T <duration>' then 't s0 s1')");
  sim->add_option("--duration", sim_args.duration, "Duration of a constant waveform pair")
      ->capture_default_str()
      ->excludes(wave);
  sim->add_option("--amplitude", sim_args.amplitude, "s1 - s0 of a constant waveform pair")
      ->capture_default_str()
      ->excludes(wave);
  sim->add_option("--delta-guard", sim_args.delta_guard, "Offset from 1/2 for the convex strategy")
      ->capture_default_str();
  sim->add_option("--dump", sim_args.dump, "Write per-step CSV of the first trajectories here");
  sim->add_option("--record", sim_args.record, "Trajectories to dump")->capture_default_str();
  add_common(sim, common);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Closed-form values over a (pi, overlap) grid");
  sweep->add_option("--pi", sweep_args.pi, "Prior grid a:b:n")->capture_default_str();
  auto* ov = sweep->add_option("--overlap", sweep_args.overlap, "Overlap grid a:b:n");
  auto* en = sweep->add_option("--energy", sweep_args.energy, "Energy-gap grid a:b:n (overlap e^{-E/2})");
  ov->excludes(en);
  sweep->add_option("--objective", sweep_args.objective, "Comma list of objective specs")
      ->capture_default_str();
  sweep->add_flag("--mc", sweep_args.mc, "Add Monte Carlo columns from the receiver simulator");
  sweep->add_option("--trials", sweep_args.trials, "Trials per Monte Carlo cell")->capture_default_str();
  sweep->add_option("--tau", sweep_args.tau, "Time step for Monte Carlo cells")->capture_default_str();
  add_common(sweep, common);

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  std::ostringstream buffer;
  int code = kExitOk;
  try {
    if (*solve) {
      try {
        code = cmd_solve(solve_args, common, buffer);
      } catch (const OutOfScopeError& e) {
        write_out_of_scope(buffer, common, e);
        code = kExitOutOfScope;
      }
    } else if (*cls) {
      code = cmd_classify(classify_objective, classify_grid, common, buffer);
    } else if (*verify) {
      const std::string& s = verify_args.suite;
      if (s == "lemma1") {
        code = verify_lemma1(verify_args, common, buffer);
      } else if (s == "theorem2") {
        code = verify_theorem2(verify_args, common, buffer);
      } else if (s == "renyi-pk") {
        code = verify_renyi_pk(verify_args, common, buffer);
      } else if (s == "renyi-series") {
        code = verify_renyi_series(verify_args, common, buffer);
      } else if (s == "local-db") {
        code = verify_local_db(verify_args, common, buffer);
      } else {
        err << "error: unknown suite '" << s << "'\n" << verify->help();
        return kExitUsage;
      }
    } else if (*sim) {
      code = cmd_simulate(sim_args, common, buffer);
    } else if (*sweep) {
      code = cmd_sweep(sweep_args, common, buffer);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const OutOfScopeError& e) {
    write_out_of_scope(buffer, common, e);
    code = kExitOutOfScope;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitViolation;
  }

  if (common.output.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(common.output);
    if (!file) {
      err << "error: cannot write " << common.output << '\n';
      return kExitUsage;
    }
    file << buffer.str();
  }
  return code;
}

}  // namespace qdisc::cli
