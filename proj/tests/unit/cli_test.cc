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

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace qdisc::cli {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "qdisc");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> csv_rows(const std::string& text) {
  std::vector<std::string> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

TEST(CliSolveTest, ErrorAtUniformPrior) {
  const Result r = call({"solve", "--pi", "0.5", "--overlap", "0.6", "--objective", "error"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 0.1, 1e-12);
  EXPECT_EQ(j["class"], "convex-admissible");
  EXPECT_EQ(j["regime"], "projection");
  EXPECT_EQ(j["povm"].size(), 2u);
  EXPECT_NEAR(j["posteriors"][0].get<double>() + j["posteriors"][1].get<double>(), 1.0, 1e-12);
}

TEST(CliSolveTest, OrthogonalEntropyIsZero) {
  const Result r = call({"solve", "--pi", "0.5", "--overlap", "0", "--objective", "entropy"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NEAR(json::parse(r.out)["value"].get<double>(), 0.0, 1e-15);
}

TEST(CliSolveTest, VerySkewedIsOutOfScope) {
  const Result r = call({"solve", "--pi", "0.1", "--overlap", "0.9", "--objective", "ambiguity"});
  EXPECT_EQ(r.code, kExitOutOfScope);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["reason"], "very-skewed");
}

TEST(CliSolveTest, NeitherClassIsOutOfScope) {
  const Result r = call({"solve", "--pi", "0.3", "--overlap", "0.5", "--objective", "renyi:0.75"});
  EXPECT_EQ(r.code, kExitOutOfScope);
  EXPECT_EQ(json::parse(r.out)["reason"], "unsupported-objective");
}

TEST(CliSolveTest, CsvOutput) {
  const Result r = call({"solve", "--pi", "0.3", "--overlap", "0.6", "--objective", "ambiguity",
                         "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_GE(csv_rows(r.out).size(), 2u);
}

TEST(CliClassifyTest, RenyiOrders) {
  const std::pair<const char*, const char*> cases[] = {
      {"renyi:2", "convex-admissible"},
      {"renyi:0.25", "concave-admissible"},
      {"renyi:0.75", "neither"},
  };
  for (const auto& [spec, want] : cases) {
    const Result r = call({"classify", "--objective", spec});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    EXPECT_EQ(json::parse(r.out)["class"], want) << spec;
  }
}

TEST(CliVerifyTest, Suites) {
  EXPECT_EQ(call({"verify", "--suite", "renyi-pk", "--kmax", "40", "--alpha-grid", "0:10:201"}).code,
            kExitOk);
  EXPECT_EQ(call({"verify", "renyi-series"}).code, kExitOk);
  EXPECT_EQ(call({"verify", "--suite", "lemma1", "--samples", "200"}).code, kExitOk);
  EXPECT_EQ(call({"verify", "local-db", "--samples", "500"}).code, kExitOk);
  EXPECT_EQ(call({"verify", "bogus"}).code, kExitUsage);
}

TEST(CliVerifyTest, ClosedFormSuiteReportsGaps) {
  const Result r = call({"verify", "theorem2", "--pi-grid", "0.2:0.5:2", "--overlap-grid",
                         "0.3:0.7:2", "--objectives", "error,ambiguity", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.out << r.err;
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 1u + 8u);
  EXPECT_EQ(rows[0].rfind("pi,c,objective", 0), 0u);
}

TEST(CliSweepTest, GridCardinality) {
  const Result r = call({"sweep", "--pi", "0.1:0.5:9", "--overlap", "0.1:0.9:9", "--objective",
                         "error", "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(csv_rows(r.out).size(), 1u + 81u);
}

TEST(CliSimulateTest, ConvexAndConcave) {
  {
    const Result r = call({"simulate", "--pi", "0.5", "--strategy", "convex", "--objective",
                           "error", "--tau", "1e-3", "--trials", "20000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = json::parse(r.out);
    // tau = 1e-3 carries a visible discretization bias, hence the slack.
    EXPECT_NEAR(j["estimate"].get<double>(), j["theory"].get<double>(),
                3 * j["std_error"].get<double>() + 1e-3);
  }
  {
    const Result r = call({"simulate", "--strategy", "concave", "--pi", "0.5", "--objective",
                           "ambiguity", "--tau", "1e-3", "--trials", "20000"});
    ASSERT_EQ(r.code, kExitOk) << r.err;
    const json j = json::parse(r.out);
    EXPECT_NEAR(j["estimate"].get<double>(), std::exp(-0.25), 3 * j["std_error"].get<double>() + 1e-3);
  }
}

TEST(CliSimulateTest, CustomStrategyAndWaveformFiles) {
  const auto wave = temp_file("qdisc_cli_wave.txt", "T 0.5\n0 0 1\n");
  const auto table = temp_file("qdisc_cli_table.txt", "0 -1 0\n");
  const Result r = call({"simulate", "--waveform", wave.string(), "--strategy",
                         "custom:" + table.string(), "--objective", "bhattacharyya", "--trials",
                         "1000", "--tau", "1e-3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_GE(j["estimate"].get<double>(), std::sqrt(0.25) * std::exp(-0.25) - 5 * j["std_error"].get<double>() - 1e-3);
}

TEST(CliUsageTest, BadInvocations) {
  EXPECT_EQ(call({}).code, kExitUsage);
  EXPECT_EQ(call({"solve", "--pi", "0.5"}).code, kExitUsage);
  EXPECT_EQ(call({"solve", "--pi", "0.9", "--overlap", "0.5"}).code, kExitUsage);
  EXPECT_EQ(call({"solve", "--pi", "0.3", "--overlap", "0.5", "--objective", "gini"}).code, kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kExitUsage);
}

TEST(CliConfigTest, FlagsWinOverFile) {
  const auto cfg = temp_file("qdisc_cli.conf", "# defaults\npi = 0.5\noverlap = 0.6\nobjective = ambiguity\n");
  const Result r = call({"solve", "--config", cfg.string(), "--objective", "error"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["objective"], "error");
  EXPECT_NEAR(j["value"].get<double>(), 0.1, 1e-12);
}

TEST(CliHelpersTest, ParseGrid) {
  EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_grid("0.25"), (std::vector<double>{0.25}));
  EXPECT_THROW(parse_grid("0:1"), std::exception);
  EXPECT_THROW(parse_grid("0:1:0"), std::exception);
  EXPECT_THROW(parse_grid("a"), std::exception);
}

TEST(CliHelpersTest, FormatDouble) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(format_double(std::nan("")), "nan");
}

}  // namespace
}  // namespace qdisc::cli
