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

#include "qcut/kak.hpp"
#include "qcut/mcsim.hpp"
#include "qcut/qpd.hpp"

namespace qcut {

/// CPTP map on the joint system wires only; ancillas are off limits.
struct BlackBoxChannel {
  std::vector<Mat> kraus;
  std::vector<int> wires;  // logical system wires [0, sys_a + sys_b)
};

struct PlannedGate {
  KAK kak;
  int a_wire = 0;  // A-side system wire the gate acts on
  int b_wire = 0;  // B-side system wire
};

struct Slot {
  bool is_gate = true;
  int index = 0;  // into gates or into the box list supplied at run time
};

/// Cutting plan for two-qubit gates interleaved with unknown channels.
/// Every gate is deferred through one Bell pair per side (4 ancilla qubits
/// per gate); the joint QPD instruments act on the Bell-pair halves before
/// anything else runs, so the decomposition never depends on the boxes.
struct ProtocolPlan {
  int sys_a = 1, sys_b = 1;
  std::vector<PlannedGate> gates;
  std::vector<Slot> slots;

  int box_count() const;
  void validate() const;  // throws std::invalid_argument on malformed plans
};

/// +1 if sigma_a and sigma_k commute, -1 if they anticommute.
int pauli_commutation_sign(int a, int k);

/// Post-processing sign for one gate given its Bell outcomes (a on side A,
/// b on side B) and the term's interaction indices (k, kp) at that gate:
/// f(a,k) f(a,kp) f(b,k) f(b,kp).
int term_sign_correction(int a, int b, int k, int kp);

/// Joint-cut overhead of the plan's gates; the protocol adds nothing on top.
double blackbox_overhead(const ProtocolPlan& plan);

/// The instruments used by the protocol: the joint parallel-cut QPD with
/// bare Pauli strings (KAK locals are applied at teleport time). Depends on
/// the plan only, never on the boxes.
QPD blackbox_instruments(const ProtocolPlan& plan);

/// Reference evolution: walk the slots applying gates and boxes directly.
Mat blackbox_reference_state(const ProtocolPlan& plan,
                             const std::vector<BlackBoxChannel>& boxes,
                             const Mat& rho_in);

struct BlackboxVerifyReport {
  double exact = 0;
  double protocol_sum = 0;
  double abs_error = 0;
  double overhead = 0;
  bool pass = false;
};

/// Deterministic weighted sum over all QPD terms and measurement outcomes;
/// must reproduce the composed channel's expectation value for any CPTP
/// boxes.
BlackboxVerifyReport build_blackbox_execution(
    const ProtocolPlan& plan, const std::vector<BlackBoxChannel>& boxes,
    const Mat& rho_in, const Mat& obs);

/// Monte Carlo sampling version of the protocol.
EstimatorResult estimate_blackbox(const ProtocolPlan& plan,
                                  const std::vector<BlackBoxChannel>& boxes,
                                  const Mat& rho_in, const Mat& obs,
                                  std::int64_t shots, std::uint64_t seed,
                                  int workers = 1);

// Seeded box battery used by tests and the CLI.
BlackBoxChannel box_identity(int n_wires);
BlackBoxChannel box_boundary_swap(int sys_a, int sys_b);
BlackBoxChannel box_local_unitaries(int sys_a, int sys_b, std::uint64_t seed);
BlackBoxChannel box_depolarizing(int n_wires, double p);
BlackBoxChannel box_random_kraus(int n_wires, int rank, std::uint64_t seed);

}  // namespace qcut
