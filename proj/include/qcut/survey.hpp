// Copyright 2026 The qcut authors
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

#pragma once

#include <cstdint>
#include <vector>

#include "qcut/tensor.hpp"

namespace qcut {

struct SurveyResult {
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  int bins = 0;
  double lo = 1.0, hi = 7.0;
  std::vector<std::int64_t> counts;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double min_gamma = 0.0, max_gamma = 0.0;

  double bin_left(int i) const { return lo + (hi - lo) * i / bins; }
  double bin_right(int i) const { return lo + (hi - lo) * (i + 1) / bins; }
};

/// Histogram of gamma over Haar-random two-qubit gates, [1, 7] split into
/// `bins` uniform bins. Work is split into fixed-size chunks with one RNG
/// stream per chunk and merged in chunk order, so the result is identical
/// for every worker count. workers <= 0 uses all hardware threads.
SurveyResult haar_survey(std::int64_t samples, std::uint64_t seed, int bins = 200,
                         int workers = 1);

/// Serial reference implementation (single stream of chunks, no OpenMP).
SurveyResult haar_survey_serial(std::int64_t samples, std::uint64_t seed,
                                int bins = 200);

/// Expected overhead of cutting n Haar gates, extrapolated from a measured
/// mean gamma: cutting one at a time vs. jointly.
struct ScalingRow {
  int n;
  double single_cut;  // mean^n
  double joint_cut;   // 2 ((mean + 1) / 2)^n - 1
};
std::vector<ScalingRow> survey_scaling_table(double mean_gamma, int max_n);

}  // namespace qcut
