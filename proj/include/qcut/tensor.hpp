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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qcut/rng.hpp"

namespace qcut {

using cplx = std::complex<double>;
// Row-major so that entry (r, c) lives at data()[r * cols + c].
using Mat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::VectorXcd;

// Global tolerances shared by all modules.
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kChannelTol = 1e-8;
inline constexpr double kEigClip = -1e-10;
inline constexpr double kCoeffCutoff = 1e-12;

Mat identity(int d);
Mat dagger(const Mat& m);
Mat kron(const Mat& a, const Mat& b);

double frob_norm(const Mat& m);
double frob_dist(const Mat& a, const Mat& b);

bool is_unitary(const Mat& m, double tol = kUnitaryTol);
bool is_density_operator(const Mat& rho, double tol = kUnitaryTol);
bool is_hermitian(const Mat& m, double tol = kUnitaryTol);

/// Trace out all subsystems not listed in `keep`. `dims` are the subsystem
/// dimensions in tensor order, `keep` the (sorted) indices to retain.
Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep);

/// Embed a unitary acting on `wires` (qubit indices, wire 0 = most
/// significant) into an `n_wires`-qubit operator.
Mat embed_unitary(const Mat& u, const std::vector<int>& wires, int n_wires);

/// Reorder qubit wires of an operator: position i of the result holds the
/// wire that was at `perm[i]` in the input.
Mat permute_qubit_op(const Mat& m, const std::vector<int>& perm);
Vec permute_qubit_ket(const Vec& v, const std::vector<int>& perm);

/// Normalized maximally entangled ket (1/sqrt(d)) sum_i |ii> on dimension d*d.
Vec max_entangled_ket(int d);

struct ChoiOp {
  int dim_in = 0;
  int dim_out = 0;
  Mat matrix;  // (dim_in*dim_out) square
};

/// Choi operator of the Hermitian-preserving map  sum_+ K.K^+ - sum_- K.K^+
/// under the normalized convention Choi(F) = (id (x) F)(|psi><psi|) with
/// |psi> = (1/sqrt d) sum_i |ii>.  Trace-preserving maps get trace 1.
ChoiOp choi_of_channel(const std::vector<Mat>& kraus_plus,
                       const std::vector<Mat>& kraus_minus = {});
ChoiOp choi_of_unitary(const Mat& u);

/// Choi state ket (id (x) U)|psi> of a unitary channel.
Vec choi_state_ket(const Mat& u);

/// Singular values of the dimA x dimB reshaping of a unit-norm ket,
/// descending. Squared values sum to 1.
std::vector<double> schmidt_coefficients(const Vec& psi, int dim_a, int dim_b);

/// Haar-distributed unitary via QR of a complex Ginibre matrix with the
/// R-diagonal phase correction.
Mat haar_random_unitary(int dim, Rng& rng);

}  // namespace qcut
