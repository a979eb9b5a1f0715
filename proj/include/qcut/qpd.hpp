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

#include <string>
#include <vector>

#include "qcut/instrument.hpp"
#include "qcut/kak.hpp"

namespace qcut {

/// One sampled branch of a quasiprobability decomposition: a signed weight
/// and a pair of local instruments. k1/k2 are the interaction multi-indices
/// of the two channel slots (equal for diagonal terms).
struct QPDTerm {
  double weight = 0;
  LocalInstrument inst_a, inst_b;
  std::string label;
  std::vector<int> k1, k2;
};

/// Signed-weight mixture of local instrument pairs whose weighted sum
/// reproduces a non-local unitary channel.
struct QPD {
  int sys_a = 1, sys_b = 1;
  std::vector<QPDTerm> terms;
  double one_norm = 0;
};

/// Optimal single-cut decomposition of a two-qubit gate. one_norm equals
/// gamma_single of the gate's interaction coefficients.
QPD build_single_cut_qpd(const KAK& k);

/// Joint decomposition of parallel gates over multi-indices. With
/// fold_locals = false the instruments carry bare Pauli strings and the KAK
/// locals are left to the caller (used by the deferred-gate protocol).
QPD build_parallel_cut_qpd(const std::vector<KAK>& ks, bool fold_locals = true);

/// Signed Choi operator of one side's instrument (ancillas traced out).
ChoiOp instrument_signed_choi(const LocalInstrument& inst);

/// Signed Choi operator of a term's joint map on the system wires.
/// Product-factorized: Choi(A) (x) Choi(B) with wires regrouped.
ChoiOp term_channel_choi(const QPDTerm& t, int sys_a, int sys_b);

/// Same, simulated on the joint space in one shot (oracle for tests).
ChoiOp term_channel_choi_joint(const QPDTerm& t, int sys_a, int sys_b);

struct VerifyReport {
  double choi_error = 0;
  double one_norm = 0;
  double gamma_closed_form = 0;
  bool pass = false;
};

/// Checks sum_t weight_t * Choi(term_t) against the Choi of the target
/// unitary channel; passes iff the Frobenius error is <= 1e-8.
VerifyReport verify_qpd(const QPD& q, const Mat& target);

struct SampledTerm {
  int index;
  int sign;
  double probability;
};

/// Draw a term with probability |weight| / one_norm.
SampledTerm sample_term(const QPD& q, Rng& rng);

/// Joint unitary of parallel gates in [A wires..., B wires...] order.
Mat parallel_target_unitary(const std::vector<KAK>& ks);

}  // namespace qcut
