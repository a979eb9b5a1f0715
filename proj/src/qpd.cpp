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

#include "qcut/qpd.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "qcut/gates.hpp"

namespace qcut {

namespace {

constexpr double kPi2 = M_PI / 2.0;

std::string index_str(const std::vector<int>& k) {
  std::ostringstream os;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) os << ',';
    os << k[i];
  }
  return os.str();
}

// Per-gate dressed operators: L_k = v1 sigma_k v3 on side A (global phase
// folded into side A), R_k = v2 sigma_k v4 on side B.
struct GateOps {
  std::array<cplx, 4> u;
  std::array<Mat, 4> left, right;
};

GateOps gate_ops(const KAK& k, bool fold_locals, bool first_gate) {
  GateOps g;
  double nrm2 = 0;
  for (const cplx& c : k.u) nrm2 += std::norm(c);
  const double inv = 1.0 / std::sqrt(nrm2);
  for (int i = 0; i < 4; ++i) g.u[i] = k.u[i] * inv;

  for (int i = 0; i < 4; ++i) {
    if (fold_locals) {
      Mat l = k.v1 * pauli(i) * k.v3;
      if (first_gate) l *= std::exp(cplx(0, k.global_phase));
      g.left[i] = std::move(l);
      g.right[i] = k.v2 * pauli(i) * k.v4;
    } else {
      g.left[i] = pauli(i);
      g.right[i] = pauli(i);
    }
  }
  return g;
}

// Multi-index machinery over the surviving coefficient tuples.
struct JointOps {
  std::vector<std::vector<int>> indices;  // surviving multi-indices, lex order
  std::vector<cplx> w;                    // joint coefficients
  int n_gates;

  Mat left_op(int which) const;
  Mat right_op(int which) const;

  const std::vector<GateOps>* gates;
};

Mat joint_kron(const std::vector<GateOps>& gates, const std::vector<int>& k,
               bool left) {
  Mat acc = Mat::Identity(1, 1);
  for (std::size_t g = 0; g < gates.size(); ++g)
    acc = kron(acc, left ? gates[g].left[k[g]] : gates[g].right[k[g]]);
  return acc;
}

JointOps build_joint(const std::vector<GateOps>& gates) {
  JointOps j;
  j.n_gates = static_cast<int>(gates.size());
  j.gates = &gates;
  std::vector<int> idx(gates.size(), 0);
  while (true) {
    cplx w = 1;
    for (std::size_t g = 0; g < gates.size(); ++g) w *= gates[g].u[idx[g]];
    if (std::abs(w) > kCoeffCutoff) {
      j.indices.push_back(idx);
      j.w.push_back(w);
    }
    int g = static_cast<int>(gates.size()) - 1;
    while (g >= 0 && idx[g] == 3) idx[g--] = 0;
    if (g < 0) break;
    ++idx[g];
  }
  return j;
}

// Instrument applying a bare product operator (diagonal term).
LocalInstrument diagonal_instrument(const std::vector<GateOps>& gates,
                                    const std::vector<int>& k, bool left) {
  LocalInstrument inst;
  inst.system_wires = static_cast<int>(gates.size());
  inst.ancilla_count = 0;
  for (std::size_t g = 0; g < gates.size(); ++g) {
    inst.ops.push_back({OpKind::Unitary,
                        {static_cast<int>(g)},
                        left ? gates[g].left[k[g]] : gates[g].right[k[g]]});
  }
  return inst;
}

// Hadamard-test instrument: ancilla, H, phase diag(1, e^{-i phi}),
// open-controlled O_k, closed-controlled O_k', H, Z measurement; the sign is
// the parity of the recorded bit.
LocalInstrument hadamard_test_instrument(const std::vector<GateOps>& gates,
                                         const std::vector<int>& k,
                                         const std::vector<int>& kp, double phi,
                                         bool left) {
  const int n = static_cast<int>(gates.size());
  LocalInstrument inst;
  inst.system_wires = n;
  inst.ancilla_count = 1;
  inst.parity_mask = 1;
  const int anc = n;

  Mat h = gate_h();
  Mat phase(2, 2);
  phase << 1, 0, 0, std::exp(cplx(0, -phi));

  const Mat ok = joint_kron(gates, k, left);
  const Mat okp = joint_kron(gates, kp, left);
  const Eigen::Index d = ok.rows();

  // |0><0| (x) O_k + |1><1| (x) 1, then |0><0| (x) 1 + |1><1| (x) O_k'
  Mat ctrl0 = Mat::Identity(2 * d, 2 * d);
  ctrl0.block(0, 0, d, d) = ok;
  Mat ctrl1 = Mat::Identity(2 * d, 2 * d);
  ctrl1.block(d, d, d, d) = okp;

  std::vector<int> ctrl_wires{anc};
  for (int g = 0; g < n; ++g) ctrl_wires.push_back(g);

  inst.ops.push_back({OpKind::Unitary, {anc}, h});
  inst.ops.push_back({OpKind::Unitary, {anc}, phase});
  inst.ops.push_back({OpKind::Unitary, ctrl_wires, ctrl0});
  inst.ops.push_back({OpKind::Unitary, ctrl_wires, ctrl1});
  inst.ops.push_back({OpKind::Unitary, {anc}, gate_h()});
  inst.ops.push_back({OpKind::MeasureZ, {anc}, {}});
  return inst;
}

QPD build_from_gates(const std::vector<GateOps>& gates) {
  const JointOps joint = build_joint(gates);
  const int n = static_cast<int>(gates.size());

  QPD q;
  q.sys_a = n;
  q.sys_b = n;

  const int m = static_cast<int>(joint.indices.size());
  for (int i = 0; i < m; ++i) {
    QPDTerm t;
    t.weight = std::norm(joint.w[i]);
    t.k1 = joint.indices[i];
    t.k2 = joint.indices[i];
    t.label = "d[" + index_str(t.k1) + "]";
    t.inst_a = diagonal_instrument(gates, t.k1, true);
    t.inst_b = diagonal_instrument(gates, t.k1, false);
    q.terms.push_back(std::move(t));
  }

  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double mag = 2.0 * std::abs(joint.w[i]) * std::abs(joint.w[j]);
      const double phi = std::arg(joint.w[i]) - std::arg(joint.w[j]);
      for (int setting = 0; setting < 2; ++setting) {
        const double hphi = phi / 2.0 + (setting ? kPi2 : 0.0);
        QPDTerm t;
        t.weight = setting ? -mag : mag;
        t.k1 = joint.indices[i];
        t.k2 = joint.indices[j];
        t.label = "o[" + index_str(t.k1) + "|" + index_str(t.k2) +
                  (setting ? ";-]" : ";+]");
        t.inst_a = hadamard_test_instrument(gates, t.k1, t.k2, hphi, true);
        t.inst_b = hadamard_test_instrument(gates, t.k1, t.k2, hphi, false);
        q.terms.push_back(std::move(t));
      }
    }
  }

  q.one_norm = 0;
  for (const QPDTerm& t : q.terms) q.one_norm += std::abs(t.weight);
  return q;
}

}  // namespace

QPD build_single_cut_qpd(const KAK& k) { return build_parallel_cut_qpd({k}); }

QPD build_parallel_cut_qpd(const std::vector<KAK>& ks, bool fold_locals) {
  if (ks.empty())
    throw std::invalid_argument("build_parallel_cut_qpd: empty gate list");
  std::vector<GateOps> gates;
  gates.reserve(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i)
    gates.push_back(gate_ops(ks[i], fold_locals, i == 0));
  return build_from_gates(gates);
}

ChoiOp instrument_signed_choi(const LocalInstrument& inst) {
  const int s = inst.system_wires;
  const int d = 1 << s;
  const int n = 2 * s + inst.ancilla_count;  // reference + system + ancillas

  // (MES between reference and system) (x) |0...0><0...0| on the ancillas
  const Vec psi = max_entangled_ket(d);
  Mat rho = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  {
    const Mat mes = psi * psi.adjoint();
    const Eigen::Index da = Eigen::Index(1) << inst.ancilla_count;
    for (Eigen::Index r = 0; r < mes.rows(); ++r)
      for (Eigen::Index c = 0; c < mes.cols(); ++c)
        rho(r * da, c * da) = mes(r, c);
  }

  // instrument-local wire i -> global wire s + i (system then ancillas)
  std::vector<int> map(inst.total_wires());
  std::iota(map.begin(), map.end(), s);

  Mat signed_out = run_instrument_signed(rho, n, inst, map);
  for (int a = 0; a < inst.ancilla_count; ++a)
    signed_out = dm::trace_out_wire(signed_out, n - a, n - a - 1);
  return ChoiOp{d, d, std::move(signed_out)};
}

ChoiOp term_channel_choi(const QPDTerm& t, int sys_a, int sys_b) {
  if (t.inst_a.system_wires != sys_a || t.inst_b.system_wires != sys_b)
    throw std::invalid_argument("term_channel_choi: wire mismatch");
  const ChoiOp ca = instrument_signed_choi(t.inst_a);
  const ChoiOp cb = instrument_signed_choi(t.inst_b);
  // kron gives wires [Ra, Sa, Rb, Sb]; regroup to [Ra, Rb, Sa, Sb]
  Mat joint = kron(ca.matrix, cb.matrix);
  std::vector<int> perm;
  for (int w = 0; w < sys_a; ++w) perm.push_back(w);
  for (int w = 0; w < sys_b; ++w) perm.push_back(2 * sys_a + w);
  for (int w = 0; w < sys_a; ++w) perm.push_back(sys_a + w);
  for (int w = 0; w < sys_b; ++w) perm.push_back(2 * sys_a + sys_b + w);
  joint = permute_qubit_op(joint, perm);
  const int d = 1 << (sys_a + sys_b);
  return ChoiOp{d, d, std::move(joint)};
}

ChoiOp term_channel_choi_joint(const QPDTerm& t, int sys_a, int sys_b) {
  const int s = sys_a + sys_b;
  const int d = 1 << s;
  const int anc_a = t.inst_a.ancilla_count;
  const int anc_b = t.inst_b.ancilla_count;
  const int n = 2 * s + anc_a + anc_b;

  const Vec psi = max_entangled_ket(d);
  Mat rho = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  {
    const Mat mes = psi * psi.adjoint();
    const Eigen::Index da = Eigen::Index(1) << (anc_a + anc_b);
    for (Eigen::Index r = 0; r < mes.rows(); ++r)
      for (Eigen::Index c = 0; c < mes.cols(); ++c)
        rho(r * da, c * da) = mes(r, c);
  }

  std::vector<int> map_a, map_b;
  for (int w = 0; w < sys_a; ++w) map_a.push_back(s + w);
  for (int w = 0; w < anc_a; ++w) map_a.push_back(2 * s + w);
  for (int w = 0; w < sys_b; ++w) map_b.push_back(s + sys_a + w);
  for (int w = 0; w < anc_b; ++w) map_b.push_back(2 * s + anc_a + w);

  Mat out_a = run_instrument_signed(rho, n, t.inst_a, map_a);
  Mat out = run_instrument_signed(out_a, n, t.inst_b, map_b);
  for (int a = 0; a < anc_a + anc_b; ++a)
    out = dm::trace_out_wire(out, n - a, n - a - 1);
  return ChoiOp{d, d, std::move(out)};
}

VerifyReport verify_qpd(const QPD& q, const Mat& target) {
  const int d = 1 << (q.sys_a + q.sys_b);
  if (target.rows() != d || target.cols() != d)
    throw std::invalid_argument("verify_qpd: target dimension mismatch");
  if (!is_unitary(target, 1e-8))
    throw std::invalid_argument("verify_qpd: target is not unitary");
  if (d > 64)
    throw std::invalid_argument(
        "verify_qpd: dense verifier supports at most 6 system qubits");

  Mat acc = Mat::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
  for (const QPDTerm& t : q.terms)
    acc += t.weight * term_channel_choi(t, q.sys_a, q.sys_b).matrix;

  VerifyReport rep;
  rep.choi_error = frob_dist(acc, choi_of_unitary(target).matrix);
  rep.one_norm = q.one_norm;
  rep.pass = rep.choi_error <= kChannelTol;
  return rep;
}

SampledTerm sample_term(const QPD& q, Rng& rng) {
  if (q.one_norm <= 0) throw std::invalid_argument("sample_term: empty QPD");
  const double x = rng.uniform() * q.one_norm;
  double acc = 0;
  for (std::size_t i = 0; i < q.terms.size(); ++i) {
    acc += std::abs(q.terms[i].weight);
    if (x < acc || i + 1 == q.terms.size()) {
      return {static_cast<int>(i), q.terms[i].weight >= 0 ? 1 : -1,
              std::abs(q.terms[i].weight) / q.one_norm};
    }
  }
  throw std::logic_error("sample_term: unreachable");
}

Mat parallel_target_unitary(const std::vector<KAK>& ks) {
  const int n = static_cast<int>(ks.size());
  const int wires = 2 * n;
  Mat total = Mat::Identity(Eigen::Index(1) << wires, Eigen::Index(1) << wires);
  for (int g = 0; g < n; ++g)
    total = embed_unitary(kak_reconstruct(ks[g]), {g, n + g}, wires) * total;
  return total;
}

}  // namespace qcut
