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

#include "qcut/gamma.hpp"

#include <cmath>
#include <stdexcept>

#include "qcut/gates.hpp"
#include "qcut/kak.hpp"

namespace qcut {

namespace {

// |u_k| with the two-norm renormalized away, so the closed forms hold to
// machine precision even when the input carries ~1e-10 decomposition noise
std::array<double, 4> normalized_moduli(const std::array<cplx, 4>& u) {
  double nrm2 = 0;
  for (const cplx& c : u) nrm2 += std::norm(c);
  if (std::abs(nrm2 - 1.0) > 1e-9)
    throw std::invalid_argument("interaction coefficients are not normalized");
  const double inv = 1.0 / std::sqrt(nrm2);
  std::array<double, 4> a{};
  for (int k = 0; k < 4; ++k) a[k] = std::abs(u[k]) * inv;
  return a;
}

double one_norm_of(const std::array<cplx, 4>& u) {
  const auto a = normalized_moduli(u);
  return a[0] + a[1] + a[2] + a[3];
}

}  // namespace

GammaReport gamma_single(const std::array<cplx, 4>& u) {
  const auto a = normalized_moduli(u);
  const double s1 = a[0] + a[1] + a[2] + a[3];
  double delta = 0;
  for (int k = 0; k < 4; ++k)
    for (int j = k + 1; j < 4; ++j) delta += 2.0 * a[k] * a[j];
  return {2.0 * s1 * s1 - 1.0, delta, s1};
}

GammaReport gamma_parallel(const std::vector<std::array<cplx, 4>>& us) {
  if (us.empty()) throw std::invalid_argument("gamma_parallel: empty gate list");
  double s1 = 1.0;
  for (const auto& u : us) s1 *= one_norm_of(u);
  const double gamma = 2.0 * s1 * s1 - 1.0;
  return {gamma, (gamma - 1.0) / 2.0, s1};
}

double gamma_mixed_powers(const std::array<cplx, 4>& u,
                          const std::array<cplx, 4>& v,
                          const std::array<cplx, 4>& w, int n, int m, int p) {
  if (n < 0 || m < 0 || p < 0)
    throw std::invalid_argument("gamma_mixed_powers: negative exponent");
  return 2.0 * std::pow(one_norm_of(u), 2 * n) * std::pow(one_norm_of(v), 2 * m) *
             std::pow(one_norm_of(w), 2 * p) -
         1.0;
}

double gamma_regularized(const std::array<cplx, 4>& u) {
  const double s1 = one_norm_of(u);
  return s1 * s1;
}

double pure_state_gamma(const std::vector<double>& schmidt) {
  double sum = 0, sumsq = 0;
  for (double a : schmidt) {
    if (a < -1e-12) throw std::invalid_argument("negative Schmidt coefficient");
    sum += a;
    sumsq += a * a;
  }
  if (std::abs(sumsq - 1.0) > 1e-9)
    throw std::invalid_argument("Schmidt coefficients are not normalized");
  return 2.0 * sum * sum - 1.0;
}

double choi_lower_bound(const Mat& u4) {
  if (u4.rows() != 4 || u4.cols() != 4 || !is_unitary(u4, 1e-8))
    throw std::invalid_argument("choi_lower_bound: input is not a 4x4 unitary");
  // Choi ket lives on wires [A', B', A, B]; regroup as (A'A):(B'B)
  const Vec psi = permute_qubit_ket(choi_state_ket(u4), {0, 2, 1, 3});
  return pure_state_gamma(schmidt_coefficients(psi, 4, 4));
}

namespace {

// Verifies that `circuit` on (state (x) |0>_anc) acts as `target (x) |0><0|`
// up to a global phase. The ancilla is the last wire.
bool verify_ancilla_identity(const Mat& circuit, const Mat& target, int n_wires) {
  const Eigen::Index d = target.rows();
  Mat v(d, d);        // <x, 0| circuit |y, 0>
  double leak = 0.0;  // norm of the |x, 1> components
  for (Eigen::Index col = 0; col < d; ++col) {
    for (Eigen::Index row = 0; row < d; ++row) {
      v(row, col) = circuit(row * 2, col * 2);
      leak += std::norm(circuit(row * 2 + 1, col * 2));
    }
  }
  (void)n_wires;
  if (std::sqrt(leak) > 1e-9) return false;
  // strip a possible global phase before comparing
  Eigen::Index r = 0, c = 0;
  v.cwiseAbs().maxCoeff(&r, &c);
  const cplx ph = v(r, c) / std::abs(v(r, c));
  return frob_dist(v / ph, target) <= 1e-9;
}

Mat toffoli_identity_circuit_a() {
  // wires [q1, q2, q3, anc]; CCZ built by AND-ing q2,q3 into the ancilla
  const Mat h3 = embed_unitary(gate_h(), {2}, 4);
  const Mat ccx_anc = embed_unitary(gate_toffoli(), {1, 2, 3}, 4);
  const Mat cz = embed_unitary(gate_cz(), {0, 3}, 4);
  return h3 * ccx_anc * cz * ccx_anc * h3;
}

Mat toffoli_identity_circuit_b() {
  // wires [q1, q2, q3, anc]; the ancilla carries AND(q1,q2) across the cut
  const Mat ccx_anc = embed_unitary(gate_toffoli(), {0, 1, 3}, 4);
  const Mat cnot = embed_unitary(gate_cnot(), {3, 2}, 4);
  return ccx_anc * cnot * ccx_anc;
}

}  // namespace

std::pair<double, double> toffoli_bounds() {
  const Mat toffoli = gate_toffoli();

  // Upper bound: each identity circuit has a single gate crossing its cut
  // (CZ for the q1:q2q3 cut, CNOT for the q1q2:q3 cut), so cutting costs
  // the gamma of that gate.
  for (const Mat& circuit : {toffoli_identity_circuit_a(), toffoli_identity_circuit_b()})
    if (!verify_ancilla_identity(circuit, toffoli, 4))
      throw std::runtime_error("toffoli_bounds: identity circuit verification failed");
  const double gamma_cz = gamma_single(kak_decompose(gate_cz()).u).gamma;
  const double gamma_cnot = gamma_single(kak_decompose(gate_cnot()).u).gamma;
  const double upper = std::min(gamma_cz, gamma_cnot);

  // Lower bound: overhead of the state (Toffoli (x) 1)(|+>|1>|0>|0>) across
  // the 2:2 split.
  Vec in = kron(Mat(ket_from_string("+1")), Mat(ket_from_string("00")));
  const Mat big = embed_unitary(toffoli, {0, 1, 2}, 4);
  const Vec psi = big * in;
  const double lower = pure_state_gamma(schmidt_coefficients(psi, 4, 4));

  return {lower, upper};
}

double toffoli_choi_state_gamma() {
  // Choi ket on [q1', q2', q3', q1, q2, q3]; split (q1'q2'q1q2):(q3'q3)
  const Vec psi =
      permute_qubit_ket(choi_state_ket(gate_toffoli()), {0, 1, 3, 4, 2, 5});
  return pure_state_gamma(schmidt_coefficients(psi, 16, 4));
}

std::int64_t shots_required(double gamma, double eps, double delta) {
  if (gamma < 1.0) throw std::invalid_argument("shots_required: gamma < 1");
  if (eps <= 0.0) throw std::invalid_argument("shots_required: eps <= 0");
  if (delta <= 0.0 || delta >= 0.5)
    throw std::invalid_argument("shots_required: delta outside (0, 1/2)");
  const double n = 2.0 * gamma * gamma / (eps * eps) * std::log(1.0 / (2.0 * delta));
  return static_cast<std::int64_t>(std::ceil(n));
}

}  // namespace qcut
