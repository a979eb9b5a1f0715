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

#include "qcut/rng.hpp"
#include "qcut/tensor.hpp"

namespace qcut {

// Density-matrix primitives on n qubits (wire 0 = most significant).
// All operate on unnormalized operators; probabilities are traces.
namespace dm {

/// rho -> U rho U^+ with U acting on `wires`.
void apply_unitary(Mat& rho, int n, const Mat& u, const std::vector<int>& wires);

/// rho -> sum_i K_i rho K_i^+ with each Kraus operator on `wires`.
void apply_kraus(Mat& rho, int n, const std::vector<Mat>& kraus,
                 const std::vector<int>& wires);

/// Probability of reading `bit` on `wire` (rho may be unnormalized).
double measure_prob(const Mat& rho, int n, int wire, int bit);

/// Project `wire` onto `bit` without renormalizing.
void project(Mat& rho, int n, int wire, int bit);

/// Trace out one wire; result has n-1 wires.
Mat trace_out_wire(const Mat& rho, int n, int wire);

/// Contract <phi_a| rho |phi_a> over the wire pair (w1, w2), where
/// |phi_a> = (sigma_a (x) 1)(|00>+|11>)/sqrt(2). Removes both wires.
Mat bell_project(const Mat& rho, int n, int w1, int w2, int a);

/// tr(obs rho) with obs on the leading `obs_wires` wires.
double expectation_leading(const Mat& rho, int n, const Mat& obs, int obs_wires);

}  // namespace dm

enum class OpKind { Unitary, MeasureZ, PrepareBell };

struct InstrumentOp {
  OpKind kind;
  std::vector<int> wires;  // Unitary: targets; MeasureZ: one wire; PrepareBell: pair
  Mat matrix;              // Unitary only
};

/// One side's implementable operation: unitaries and Z measurements on its
/// system wires plus ancillas (prepared in |0>), with a post-processing sign
/// given by the parity of a subset of the recorded bits.
struct LocalInstrument {
  int system_wires = 1;
  int ancilla_count = 0;
  std::vector<InstrumentOp> ops;
  std::uint32_t parity_mask = 0;

  int total_wires() const { return system_wires + ancilla_count; }
  int measurement_count() const;
  int sign_of(std::uint32_t bits) const {
    return (__builtin_popcount(bits & parity_mask) & 1) ? -1 : 1;
  }
};

/// One fully resolved measurement branch of an instrument run.
struct Branch {
  Mat rho;             // unnormalized; trace = branch probability
  std::uint32_t bits;  // recorded measurement outcomes, first bit = bit 0
};

/// Run `inst` on rho (n wires), mapping instrument-local wire i to
/// wire_map[i]. Enumerates every measurement branch.
std::vector<Branch> run_instrument_branches(const Mat& rho, int n,
                                            const LocalInstrument& inst,
                                            const std::vector<int>& wire_map);

/// Sample one branch per measurement. Returns the (still unnormalized up to
/// sampling) normalized branch state and records bits.
Mat run_instrument_sampled(const Mat& rho, int n, const LocalInstrument& inst,
                           const std::vector<int>& wire_map, Rng& rng,
                           std::uint32_t& bits_out);

/// Signed sum over branches of sign(bits) * branch.rho.
Mat run_instrument_signed(const Mat& rho, int n, const LocalInstrument& inst,
                          const std::vector<int>& wire_map);

}  // namespace qcut
