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

#include "qcut/tensor.hpp"

namespace qcut {

/// sigma_0 = I, sigma_1 = X, sigma_2 = Y, sigma_3 = Z.
const Mat& pauli(int k);

Mat gate_h();
Mat gate_cnot();
Mat gate_cz();
Mat gate_swap();
Mat gate_iswap();
Mat gate_crx(double theta);  // controlled exp(-i theta/2 X)
Mat gate_crz(double theta);
Mat gate_toffoli();  // controls on wires 0,1, target wire 2

/// Parse an angle literal: plain float, "pi", "pi/2", "3pi/4", "0.25pi", "-pi".
double parse_angle(const std::string& text);

/// Resolve a gate spec to a 4x4 unitary. Accepted forms:
///   CNOT | CZ | SWAP | ISWAP | CRX:<angle> | CRZ:<angle> | HAAR:<seed>
///   @<path>   (JSON matrix file: array of rows, entries [re, im])
/// Throws std::invalid_argument on anything unresolvable or non-unitary.
Mat resolve_gate_spec(const std::string& spec);

/// Product ket from a character string over {0,1,+,-,r,l}; wire 0 first.
Vec ket_from_string(const std::string& s);

/// Observable from a Pauli string over {I,X,Y,Z}, or "@<path>" matrix file.
Mat observable_from_string(const std::string& s);

}  // namespace qcut
