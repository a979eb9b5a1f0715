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

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "qcut/tensor.hpp"

namespace qcut {

/// Sampling-overhead report for a gate or gate family.
///   gamma = 1 + 2 * delta = 2 * s1^2 - 1
/// where s1 is the coefficient one-norm and delta the cross-term sum.
struct GammaReport {
  double gamma;
  double delta;  // sum_{k != k'} |u_k||u_k'|
  double s1;     // sum_k |u_k|
};

/// Overhead of cutting one gate with interaction coefficients u.
GammaReport gamma_single(const std::array<cplx, 4>& u);

/// Overhead of jointly cutting parallel gates. Closed form
/// 2 * prod_i (sum_j |u^(i)_j|)^2 - 1; never enumerates the 4^n terms.
GammaReport gamma_parallel(const std::vector<std::array<cplx, 4>>& us);

/// 2 (sum|u|)^{2n} (sum|v|)^{2m} (sum|w|)^{2p} - 1.
double gamma_mixed_powers(const std::array<cplx, 4>& u,
                          const std::array<cplx, 4>& v,
                          const std::array<cplx, 4>& w, int n, int m, int p);

/// Per-gate overhead in the many-copy limit: (sum_k |u_k|)^2.
double gamma_regularized(const std::array<cplx, 4>& u);

/// Overhead of preparing a pure bipartite state locally:
/// 2 (sum_i alpha_i)^2 - 1 for Schmidt coefficients alpha.
double pure_state_gamma(const std::vector<double>& schmidt);

/// State-based lower bound from the Choi state of a two-qubit unitary,
/// taken across the (A'A):(B'B) split. Tight: equals gamma_single of the
/// gate's interaction coefficients.
double choi_lower_bound(const Mat& u4);

/// Certified (lower, upper) overhead bounds for the Toffoli gate; both 3.
/// The upper bound verifies the single-crossing-gate identity circuits at
/// construction, the lower bound evaluates the witness state.
std::pair<double, double> toffoli_bounds();

/// Overhead of the Toffoli Choi state across the control:target split
/// (approximately 2.76; strictly weaker than toffoli_bounds).
double toffoli_choi_state_gamma();

/// Shots for additive error <= eps with confidence 1 - delta when per-shot
/// outcomes are bounded by gamma (observable spectrum in [-1, 1]):
///   ceil(2 gamma^2 eps^-2 ln(1/(2 delta))).
std::int64_t shots_required(double gamma, double eps, double delta);

}  // namespace qcut
