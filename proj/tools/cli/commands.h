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

#ifndef QDISC_TOOLS_CLI_COMMANDS_H_
#define QDISC_TOOLS_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qdisc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitOutOfScope = 2;
inline constexpr int kExitUsage = 64;

// Entry point shared by the binary and the tests. argv[0] is the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "a:b:n" -> n evenly spaced points from a to b; a bare number -> {number}.
std::vector<double> parse_grid(std::string_view spec);

// 17 significant digits, '.' decimal point whatever the locale.
std::string format_double(double v);

// Reads "key = value" lines and appends "--key value" for every key whose
// flag is not already on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args);

}  // namespace qdisc::cli

#endif  // QDISC_TOOLS_CLI_COMMANDS_H_
