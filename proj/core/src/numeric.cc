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

#include "qdisc/numeric.h"

#include <vector>

namespace qdisc {

SampleStats sample_stats(std::span<const double> values) {
  SampleStats s;
  if (values.empty()) return s;
  const double n = static_cast<double>(values.size());
  s.mean = pairwise_sum(values) / n;
  if (values.size() < 2) return s;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - s.mean;
    sq[i] = d * d;
  }
  s.std_dev = std::sqrt(pairwise_sum(sq) / (n - 1.0));
  s.std_error = s.std_dev / std::sqrt(n);
  return s;
}

}  // namespace qdisc
