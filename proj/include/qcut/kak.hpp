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

#include "qcut/tensor.hpp"

namespace qcut {

/// Canonical two-qubit decomposition
///   U = e^{i phase} (v1 (x) v2) (sum_k u_k sigma_k (x) sigma_k) (v3 (x) v4)
/// with |theta_3| <= theta_2 <= theta_1 <= pi/4 and sum_k |u_k|^2 = 1.
/// The locals v1..v4 are special unitary; residual phases live in
/// global_phase.
struct KAK {
  Mat v1, v2, v3, v4;
  std::array<cplx, 4> u{};
  std::array<double, 3> thetas{};
  double global_phase = 0.0;
};

/// Coefficients of exp(i sum_k theta_k sigma_k (x) sigma_k) in the basis
/// {sigma_k (x) sigma_k}.
std::array<cplx, 4> interaction_coefficients(const std::array<double, 3>& thetas);

/// The 4x4 matrix sum_k u_k sigma_k (x) sigma_k.
Mat interaction_unitary(const std::array<cplx, 4>& u);

KAK kak_decompose(const Mat& u4);

Mat kak_reconstruct(const KAK& k);

}  // namespace qcut
