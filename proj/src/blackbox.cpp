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

#include "qcut/blackbox.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcut/gamma.hpp"
#include "qcut/gates.hpp"

namespace qcut {

int ProtocolPlan::box_count() const {
  int c = 0;
  for (const Slot& s : slots)
    if (!s.is_gate) ++c;
  return c;
}

void ProtocolPlan::validate() const {
  if (sys_a < 1 || sys_b < 1)
    throw std::invalid_argument("plan: need at least one wire per side");
  if (gates.empty()) throw std::invalid_argument("plan: no gates");
  std::vector<int> seen(gates.size(), 0);
  for (const Slot& s : slots) {
    if (s.is_gate) {
      if (s.index < 0 || s.index >= static_cast<int>(gates.size()))
        throw std::invalid_argument("plan: slot references unknown gate");
      ++seen[s.index];
    } else if (s.index < 0) {
      throw std::invalid_argument("plan: negative box index");
    }
  }
  for (int c : seen)
    if (c != 1) throw std::invalid_argument("plan: each gate needs exactly one slot");
  for (const PlannedGate& g : gates) {
    if (g.a_wire < 0 || g.a_wire >= sys_a || g.b_wire < 0 || g.b_wire >= sys_b)
      throw std::invalid_argument("plan: gate wire out of range");
  }
}

int pauli_commutation_sign(int a, int k) {
  if (a < 0 || a > 3 || k < 0 || k > 3)
    throw std::invalid_argument("pauli index out of range");
  return (a == 0 || k == 0 || a == k) ? 1 : -1;
}

int term_sign_correction(int a, int b, int k, int kp) {
  return pauli_commutation_sign(a, k) * pauli_commutation_sign(a, kp) *
         pauli_commutation_sign(b, k) * pauli_commutation_sign(b, kp);
}

double blackbox_overhead(const ProtocolPlan& plan) {
  plan.validate();
  std::vector<std::array<cplx, 4>> us;
  us.reserve(plan.gates.size());
  for (const PlannedGate& g : plan.gates) us.push_back(g.kak.u);
  return gamma_parallel(us).gamma;
}

QPD blackbox_instruments(const ProtocolPlan& plan) {
  plan.validate();
  std::vector<KAK> ks;
  ks.reserve(plan.gates.size());
  for (const PlannedGate& g : plan.gates) ks.push_back(g.kak);
  return build_parallel_cut_qpd(ks, /*fold_locals=*/false);
}

namespace {

void validate_boxes(const ProtocolPlan& plan,
                    const std::vector<BlackBoxChannel>& boxes) {
  const int sys = plan.sys_a + plan.sys_b;
  int max_box = -1;
  for (const Slot& s : plan.slots)
    if (!s.is_gate) max_box = std::max(max_box, s.index);
  if (max_box >= static_cast<int>(boxes.size()))
    throw std::invalid_argument("plan references more boxes than supplied");
  for (const BlackBoxChannel& b : boxes) {
    if (b.kraus.empty()) throw std::invalid_argument("box has no Kraus operators");
    for (int w : b.wires)
      if (w < 0 || w >= sys)
        throw std::invalid_argument("box may only touch system wires");
    const Eigen::Index d = Eigen::Index(1) << b.wires.size();
    Mat acc = Mat::Zero(d, d);
    for (const Mat& k : b.kraus) {
      if (k.rows() != d || k.cols() != d)
        throw std::invalid_argument("box Kraus dimension mismatch");
      acc += k.adjoint() * k;
    }
    if (frob_dist(acc, identity(static_cast<int>(d))) > 1e-9)
      throw std::invalid_argument("box is not trace preserving");
  }
}

// Engine-side bookkeeping for the protocol walk. Wires are created as
// [system, side-A Bell pairs, side-B Bell pairs]; Bell pairs are appended
// lazily and consumed by teleportation.
struct WalkState {
  Mat rho;
  int n = 0;
  std::vector<int> pos_sys;             // logical system wire -> engine wire
  std::vector<int> e1_a, e2_a, e1_b, e2_b;  // per-gate ancilla positions
  std::vector<char> side;               // engine wire -> 'a', 'b'
  bool joined_a = false, joined_b = false;

  void drop_two(int w1, int w2) {
    auto shift = [&](int& w) {
      if (w < 0) return;
      if (w == w1 || w == w2) {
        w = -1;
        return;
      }
      w -= (w > w1 ? 1 : 0) + (w > w2 ? 1 : 0);
    };
    for (int& w : pos_sys) shift(w);
    for (auto* v : {&e1_a, &e2_a, &e1_b, &e2_b})
      for (int& w : *v) shift(w);
    const int hi = std::max(w1, w2), lo = std::min(w1, w2);
    side.erase(side.begin() + hi);
    side.erase(side.begin() + lo);
    n -= 2;
  }

  void require_side(char s, const std::vector<int>& wires) const {
    for (int w : wires)
      if (side.at(w) != s)
        throw std::logic_error("protocol violated locality: op crossed the cut");
  }
};

// Signed ancilla operator of one side (exact path): Bell pairs plus the
// instrument's Hadamard-test branches summed with their signs.
Mat side_ancilla_operator_exact(const LocalInstrument& inst) {
  const int g = inst.system_wires;    // one e1 wire per gate
  const int n = 2 * g + inst.ancilla_count;
  Mat rho = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  rho(0, 0) = 1.0;
  for (int i = 0; i < g; ++i) {
    // |phi0> on (e1_i, e2_i) = wires (2i, 2i+1)
    static const Mat bell = Mat(gate_cnot() * kron(gate_h(), identity(2)));
    dm::apply_unitary(rho, n, bell, {2 * i, 2 * i + 1});
  }
  std::vector<int> map;
  for (int i = 0; i < g; ++i) map.push_back(2 * i);      // instrument wire i = e1_i
  for (int j = 0; j < inst.ancilla_count; ++j) map.push_back(2 * g + j);
  Mat out = run_instrument_signed(rho, n, inst, map);
  for (int j = 0; j < inst.ancilla_count; ++j)
    out = dm::trace_out_wire(out, n - j, n - j - 1);
  return out;  // 2g wires: [e1_0, e2_0, e1_1, e2_1, ...]
}

// Sampled variant; returns a normalized state and the instrument sign.
Mat side_ancilla_operator_sampled(const LocalInstrument& inst, Rng& rng,
                                  int& sign_out) {
  const int g = inst.system_wires;
  const int n = 2 * g + inst.ancilla_count;
  Mat rho = Mat::Zero(Eigen::Index(1) << n, Eigen::Index(1) << n);
  rho(0, 0) = 1.0;
  for (int i = 0; i < g; ++i) {
    static const Mat bell = Mat(gate_cnot() * kron(gate_h(), identity(2)));
    dm::apply_unitary(rho, n, bell, {2 * i, 2 * i + 1});
  }
  std::vector<int> map;
  for (int i = 0; i < g; ++i) map.push_back(2 * i);
  for (int j = 0; j < inst.ancilla_count; ++j) map.push_back(2 * g + j);
  std::uint32_t bits = 0;
  Mat out = run_instrument_sampled(rho, n, inst, map, rng, bits);
  sign_out = inst.sign_of(bits);
  for (int j = 0; j < inst.ancilla_count; ++j)
    out = dm::trace_out_wire(out, n - j, n - j - 1);
  return out;
}

void join_side(WalkState& st, const Mat& chi, char which,
               std::vector<int>& e1, std::vector<int>& e2) {
  const int g = static_cast<int>(e1.size());
  st.rho = kron(st.rho, chi);
  for (int i = 0; i < g; ++i) {
    e1[i] = st.n + 2 * i;
    e2[i] = st.n + 2 * i + 1;
    st.side.push_back(which);
    st.side.push_back(which);
  }
  st.n += 2 * g;
}

// Teleport one side of gate `g`: local pre-rotation, Bell contraction with
// the sign rule, Pauli correction, local post-rotation. Exact path sums the
// four outcomes; sampled path picks one.
void teleport_side_exact(WalkState& st, const PlannedGate& gate, char which,
                         int k, int kp, std::vector<int>& e1, std::vector<int>& e2,
                         int gate_idx, int logical_wire) {
  const Mat& pre = which == 'a' ? gate.kak.v3 : gate.kak.v4;
  const Mat& post = which == 'a' ? gate.kak.v1 : gate.kak.v2;
  int& sys_pos = st.pos_sys[logical_wire];

  st.require_side(which, {sys_pos});
  dm::apply_unitary(st.rho, st.n, pre, {sys_pos});

  const int w_sys = sys_pos;
  const int w_e2 = e2[gate_idx];
  const int w_e1 = e1[gate_idx];
  st.require_side(which, {w_sys, w_e2, w_e1});

  Mat acc;
  for (int a = 0; a < 4; ++a) {
    Mat branch = dm::bell_project(st.rho, st.n, w_sys, w_e2, a);
    int e1_new = w_e1 - (w_e1 > w_sys ? 1 : 0) - (w_e1 > w_e2 ? 1 : 0);
    dm::apply_unitary(branch, st.n - 2, pauli(a), {e1_new});
    const double sign =
        pauli_commutation_sign(a, k) * pauli_commutation_sign(a, kp);
    if (a == 0)
      acc = sign * branch;
    else
      acc += sign * branch;
  }
  st.rho = std::move(acc);
  st.drop_two(w_sys, w_e2);
  sys_pos = e1[gate_idx];
  e1[gate_idx] = -1;
  dm::apply_unitary(st.rho, st.n, post, {sys_pos});
}

void teleport_side_sampled(WalkState& st, const PlannedGate& gate, char which,
                           int k, int kp, std::vector<int>& e1,
                           std::vector<int>& e2, int gate_idx, int logical_wire,
                           Rng& rng, int& sign_acc) {
  const Mat& pre = which == 'a' ? gate.kak.v3 : gate.kak.v4;
  const Mat& post = which == 'a' ? gate.kak.v1 : gate.kak.v2;
  int& sys_pos = st.pos_sys[logical_wire];

  st.require_side(which, {sys_pos});
  dm::apply_unitary(st.rho, st.n, pre, {sys_pos});

  const int w_sys = sys_pos;
  const int w_e2 = e2[gate_idx];
  const int w_e1 = e1[gate_idx];

  std::array<Mat, 4> branches;
  std::array<double, 4> probs{};
  double total = 0;
  for (int a = 0; a < 4; ++a) {
    branches[a] = dm::bell_project(st.rho, st.n, w_sys, w_e2, a);
    probs[a] = std::max(0.0, branches[a].trace().real());
    total += probs[a];
  }
  const double x = rng.uniform() * total;
  int a = 3;
  double cum = 0;
  for (int i = 0; i < 4; ++i) {
    cum += probs[i];
    if (x < cum) {
      a = i;
      break;
    }
  }
  st.rho = branches[a];
  if (probs[a] > 0) st.rho /= probs[a];
  const int e1_new = w_e1 - (w_e1 > w_sys ? 1 : 0) - (w_e1 > w_e2 ? 1 : 0);
  dm::apply_unitary(st.rho, st.n - 2, pauli(a), {e1_new});
  sign_acc *= pauli_commutation_sign(a, k) * pauli_commutation_sign(a, kp);

  st.drop_two(w_sys, w_e2);
  sys_pos = e1[gate_idx];
  e1[gate_idx] = -1;
  dm::apply_unitary(st.rho, st.n, post, {sys_pos});
}

WalkState init_walk(const ProtocolPlan& plan, const Mat& rho_in) {
  WalkState st;
  st.rho = rho_in;
  st.n = plan.sys_a + plan.sys_b;
  st.pos_sys.resize(st.n);
  std::iota(st.pos_sys.begin(), st.pos_sys.end(), 0);
  st.side.assign(st.n, 'a');
  for (int w = plan.sys_a; w < st.n; ++w) st.side[w] = 'b';
  const int g = static_cast<int>(plan.gates.size());
  st.e1_a.assign(g, -1);
  st.e2_a.assign(g, -1);
  st.e1_b.assign(g, -1);
  st.e2_b.assign(g, -1);
  return st;
}

void apply_box(WalkState& st, const ProtocolPlan& plan, const BlackBoxChannel& box) {
  std::vector<int> wires;
  wires.reserve(box.wires.size());
  for (int w : box.wires) wires.push_back(st.pos_sys[w]);
  (void)plan;
  dm::apply_kraus(st.rho, st.n, box.kraus, wires);
}

double final_expectation(const WalkState& st, const ProtocolPlan& plan,
                         const Mat& obs) {
  // remaining wires hold the logical system in scrambled positions
  std::vector<int> perm(st.n);
  for (int i = 0; i < st.n; ++i) perm[i] = st.pos_sys[i];
  Mat rho = permute_qubit_op(st.rho, perm);
  (void)plan;
  return (obs * rho).trace().real();
}

}  // namespace

Mat blackbox_reference_state(const ProtocolPlan& plan,
                             const std::vector<BlackBoxChannel>& boxes,
                             const Mat& rho_in) {
  plan.validate();
  validate_boxes(plan, boxes);
  const int sys = plan.sys_a + plan.sys_b;
  Mat rho = rho_in;
  for (const Slot& s : plan.slots) {
    if (s.is_gate) {
      const PlannedGate& g = plan.gates[s.index];
      const Mat u = embed_unitary(kak_reconstruct(g.kak),
                                  {g.a_wire, plan.sys_a + g.b_wire}, sys);
      rho = u * rho * u.adjoint();
    } else {
      dm::apply_kraus(rho, sys, boxes[s.index].kraus, boxes[s.index].wires);
    }
  }
  return rho;
}

BlackboxVerifyReport build_blackbox_execution(
    const ProtocolPlan& plan, const std::vector<BlackBoxChannel>& boxes,
    const Mat& rho_in, const Mat& obs) {
  plan.validate();
  validate_boxes(plan, boxes);
  if (!is_hermitian(obs, 1e-9))
    throw std::invalid_argument("observable is not Hermitian");
  const int sys = plan.sys_a + plan.sys_b;
  if (rho_in.rows() != (Eigen::Index(1) << sys) || obs.rows() != rho_in.rows())
    throw std::invalid_argument("state/observable dimension mismatch");
  if (sys + 4 * static_cast<int>(plan.gates.size()) > 12)
    throw std::invalid_argument("dense protocol verifier: too many wires");

  const QPD qpd = blackbox_instruments(plan);

  BlackboxVerifyReport rep;
  rep.exact = (obs * blackbox_reference_state(plan, boxes, rho_in)).trace().real();
  rep.overhead = blackbox_overhead(plan);

  double sum = 0;
  for (const QPDTerm& t : qpd.terms) {
    const Mat chi_a = side_ancilla_operator_exact(t.inst_a);
    const Mat chi_b = side_ancilla_operator_exact(t.inst_b);

    WalkState st = init_walk(plan, rho_in);
    for (const Slot& s : plan.slots) {
      if (!s.is_gate) {
        apply_box(st, plan, boxes[s.index]);
        continue;
      }
      const PlannedGate& g = plan.gates[s.index];
      if (!st.joined_a) {
        join_side(st, chi_a, 'a', st.e1_a, st.e2_a);
        st.joined_a = true;
      }
      teleport_side_exact(st, g, 'a', t.k1[s.index], t.k2[s.index], st.e1_a,
                          st.e2_a, s.index, g.a_wire);
      if (!st.joined_b) {
        join_side(st, chi_b, 'b', st.e1_b, st.e2_b);
        st.joined_b = true;
      }
      teleport_side_exact(st, g, 'b', t.k1[s.index], t.k2[s.index], st.e1_b,
                          st.e2_b, s.index, plan.sys_a + g.b_wire);
    }
    sum += t.weight * final_expectation(st, plan, obs);
  }

  rep.protocol_sum = sum;
  rep.abs_error = std::abs(rep.protocol_sum - rep.exact);
  rep.pass = rep.abs_error <= kChannelTol;
  return rep;
}

EstimatorResult estimate_blackbox(const ProtocolPlan& plan,
                                  const std::vector<BlackBoxChannel>& boxes,
                                  const Mat& rho_in, const Mat& obs,
                                  std::int64_t shots, std::uint64_t seed,
                                  int workers) {
  plan.validate();
  validate_boxes(plan, boxes);
  if (shots < 1) throw std::invalid_argument("estimate_blackbox: shots < 1");
  if (!is_hermitian(obs, 1e-9))
    throw std::invalid_argument("observable is not Hermitian");

  const QPD qpd = blackbox_instruments(plan);

  Eigen::SelfAdjointEigenSolver<Mat> es(obs);
  if (es.eigenvalues().minCoeff() < -1.0 - 1e-9 ||
      es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
    throw std::invalid_argument("observable spectrum must lie in [-1, 1]");
  const Mat vectors = es.eigenvectors();
  const Eigen::VectorXd values = es.eigenvalues();

#ifdef _OPENMP
  if (workers <= 0) workers = omp_get_max_threads();
#else
  workers = 1;
#endif
  if (workers > shots) workers = static_cast<int>(shots);

  std::vector<std::int64_t> counts(workers);
  for (int w = 0; w < workers; ++w)
    counts[w] = shots / workers + (w < shots % workers ? 1 : 0);
  std::vector<double> sums(workers, 0.0), sumsqs(workers, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static, 1) num_threads(workers)
#endif
  for (int w = 0; w < workers; ++w) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(w));
    double s = 0, s2 = 0;
    for (std::int64_t i = 0; i < counts[w]; ++i) {
      const SampledTerm pick = sample_term(qpd, rng);
      const QPDTerm& t = qpd.terms[pick.index];
      int sign = pick.sign;

      int sign_a = 1, sign_b = 1;
      const Mat chi_a = side_ancilla_operator_sampled(t.inst_a, rng, sign_a);
      const Mat chi_b = side_ancilla_operator_sampled(t.inst_b, rng, sign_b);
      sign *= sign_a * sign_b;

      WalkState st = init_walk(plan, rho_in);
      for (const Slot& slot : plan.slots) {
        if (!slot.is_gate) {
          apply_box(st, plan, boxes[slot.index]);
          continue;
        }
        const PlannedGate& g = plan.gates[slot.index];
        if (!st.joined_a) {
          join_side(st, chi_a, 'a', st.e1_a, st.e2_a);
          st.joined_a = true;
        }
        teleport_side_sampled(st, g, 'a', t.k1[slot.index], t.k2[slot.index],
                              st.e1_a, st.e2_a, slot.index, g.a_wire, rng, sign);
        if (!st.joined_b) {
          join_side(st, chi_b, 'b', st.e1_b, st.e2_b);
          st.joined_b = true;
        }
        teleport_side_sampled(st, g, 'b', t.k1[slot.index], t.k2[slot.index],
                              st.e1_b, st.e2_b, slot.index,
                              plan.sys_a + g.b_wire, rng, sign);
      }

      std::vector<int> perm(st.n);
      for (int j = 0; j < st.n; ++j) perm[j] = st.pos_sys[j];
      Mat rho = permute_qubit_op(st.rho, perm);
      const double tr = rho.trace().real();
      if (tr > 0) rho /= tr;

      const double x = rng.uniform();
      double cum = 0;
      double eig = values(values.size() - 1);
      for (Eigen::Index e = 0; e < values.size(); ++e) {
        const cplx amp = (vectors.col(e).adjoint() * rho * vectors.col(e))(0, 0);
        cum += std::max(0.0, amp.real());
        if (x < cum) {
          eig = values(e);
          break;
        }
      }
      const double outcome = sign * qpd.one_norm * eig;
      s += outcome;
      s2 += outcome * outcome;
    }
    sums[w] = s;
    sumsqs[w] = s2;
  }

  double total = 0, totalsq = 0;
  for (int w = 0; w < workers; ++w) {
    total += sums[w];
    totalsq += sumsqs[w];
  }

  EstimatorResult res;
  res.shots = shots;
  res.seed = seed;
  res.workers = workers;
  res.gamma_used = qpd.one_norm;
  res.mean = total / shots;
  const double var =
      shots > 1 ? (totalsq - total * total / shots) / (shots - 1) : 0.0;
  res.stderr_mean = std::sqrt(std::max(0.0, var) / shots);
  return res;
}

BlackBoxChannel box_identity(int n_wires) {
  BlackBoxChannel b;
  b.kraus = {identity(1 << n_wires)};
  b.wires.resize(n_wires);
  std::iota(b.wires.begin(), b.wires.end(), 0);
  return b;
}

BlackBoxChannel box_boundary_swap(int sys_a, int sys_b) {
  if (sys_a != 1 || sys_b != 1)
    throw std::invalid_argument("boundary swap box is defined for one wire per side");
  BlackBoxChannel b;
  b.kraus = {gate_swap()};
  b.wires = {0, 1};
  return b;
}

BlackBoxChannel box_local_unitaries(int sys_a, int sys_b, std::uint64_t seed) {
  Rng rng(seed);
  BlackBoxChannel b;
  b.kraus = {kron(haar_random_unitary(1 << sys_a, rng),
                  haar_random_unitary(1 << sys_b, rng))};
  b.wires.resize(sys_a + sys_b);
  std::iota(b.wires.begin(), b.wires.end(), 0);
  return b;
}

BlackBoxChannel box_depolarizing(int n_wires, double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("depolarizing p outside [0,1]");
  const int d = 1 << n_wires;
  BlackBoxChannel b;
  b.wires.resize(n_wires);
  std::iota(b.wires.begin(), b.wires.end(), 0);
  const int n_paulis = d * d;
  for (int s = 0; s < n_paulis; ++s) {
    Mat op = Mat::Identity(1, 1);
    int rest = s;
    for (int q = 0; q < n_wires; ++q) {
      op = kron(op, pauli(rest % 4));
      rest /= 4;
    }
    const double w = s == 0 ? 1.0 - p + p / n_paulis : p / n_paulis;
    b.kraus.push_back(std::sqrt(w) * op);
  }
  return b;
}

BlackBoxChannel box_random_kraus(int n_wires, int rank, std::uint64_t seed) {
  const int d = 1 << n_wires;
  Rng rng(seed);
  std::vector<Mat> g(rank);
  Mat s = Mat::Zero(d, d);
  for (Mat& k : g) {
    k.resize(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) k(r, c) = cplx(rng.gaussian(), rng.gaussian());
    s += k.adjoint() * k;
  }
  // K_i <- G_i S^{-1/2} makes the set trace preserving
  Eigen::SelfAdjointEigenSolver<Mat> es(s);
  Mat inv_sqrt = es.eigenvectors() *
                 es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                 es.eigenvectors().adjoint();
  BlackBoxChannel b;
  b.wires.resize(n_wires);
  std::iota(b.wires.begin(), b.wires.end(), 0);
  for (const Mat& k : g) b.kraus.push_back(k * inv_sqrt);
  return b;
}

}  // namespace qcut
