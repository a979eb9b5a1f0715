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

#include "qcut/qpd.hpp"

namespace qcut {

/// tr(obs U rho U^+).
double exact_expectation(const Mat& u, const Mat& rho_in, const Mat& obs);

/// Exact signed expectation contribution of one term (weight not included):
/// all measurement branches of both instruments are enumerated.
double run_term_exact(const QPDTerm& t, int sys_a, int sys_b, const Mat& rho_in,
                      const Mat& obs);

/// Exact value of the full decomposition, sum_t weight_t * run_term_exact.
double qpd_exact_value(const QPD& q, const Mat& rho_in, const Mat& obs);

struct EstimatorResult {
  double mean = 0;
  double stderr_mean = 0;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  double gamma_used = 0;
  int workers = 1;
};

/// Monte Carlo estimator. Per shot: sample a term, run both instruments
/// sampling one measurement branch each, then sample an eigenvalue of obs on
/// the final state; the outcome is sign * parity * one_norm * eigenvalue.
/// Deterministic per (seed, workers).
EstimatorResult estimate(const QPD& q, const Mat& rho_in, const Mat& obs,
                         std::int64_t shots, std::uint64_t seed, int workers = 1);

struct CalibrationResult {
  std::int64_t shots_used = 0;
  bool achieved = false;
  double mean = 0;
  double exact = 0;
  double eps = 0;
};

/// Runs estimate at the Hoeffding shot count for (eps, delta) and reports
/// whether the estimate landed within eps of the exact value.
CalibrationResult calibrate_overhead(const QPD& q, const Mat& rho_in,
                                     const Mat& obs, double eps, double delta,
                                     std::uint64_t seed);

}  // namespace qcut
