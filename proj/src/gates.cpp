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

#include "qcut/gates.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "qcut/io.hpp"

namespace qcut {

namespace {

Mat make_pauli(int k) {
  Mat m(2, 2);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli index out of range");
  }
  return m;
}

}  // namespace

const Mat& pauli(int k) {
  static const Mat p[4] = {make_pauli(0), make_pauli(1), make_pauli(2), make_pauli(3)};
  if (k < 0 || k > 3) throw std::invalid_argument("pauli index out of range");
  return p[k];
}

Mat gate_h() {
  Mat m(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Mat gate_cnot() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

Mat gate_cz() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Mat gate_swap() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1;
  m(1, 2) = m(2, 1) = 1;
  return m;
}

Mat gate_iswap() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = m(3, 3) = 1;
  m(1, 2) = m(2, 1) = cplx(0, 1);
  return m;
}

Mat gate_crx(double theta) {
  Mat m = Mat::Identity(4, 4);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  m(2, 2) = c;
  m(2, 3) = cplx(0, -s);
  m(3, 2) = cplx(0, -s);
  m(3, 3) = c;
  return m;
}

Mat gate_crz(double theta) {
  Mat m = Mat::Identity(4, 4);
  m(2, 2) = std::exp(cplx(0, -theta / 2));
  m(3, 3) = std::exp(cplx(0, theta / 2));
  return m;
}

Mat gate_toffoli() {
  Mat m = Mat::Identity(8, 8);
  m(6, 6) = m(7, 7) = 0;
  m(6, 7) = m(7, 6) = 1;
  return m;
}

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty angle literal");

  double sign = 1.0;
  std::size_t pos = 0;
  if (s[pos] == '-') { sign = -1.0; ++pos; }
  else if (s[pos] == '+') { ++pos; }

  auto read_number = [&](double fallback) {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.' ||
            s[pos] == 'e' || s[pos] == 'E' ||
            ((s[pos] == '-' || s[pos] == '+') && pos > start &&
             (s[pos - 1] == 'e' || s[pos - 1] == 'E'))))
      ++pos;
    if (pos == start) return fallback;
    return std::stod(s.substr(start, pos - start));
  };

  double value = read_number(1.0);
  if (pos + 1 < s.size() + 1 && s.compare(pos, 2, "pi") == 0) {
    value *= M_PI;
    pos += 2;
  }
  if (pos < s.size() && s[pos] == '/') {
    ++pos;
    const double den = read_number(0.0);
    if (den == 0.0) throw std::invalid_argument("bad angle literal: " + text);
    value /= den;
  }
  if (pos != s.size()) throw std::invalid_argument("bad angle literal: " + text);
  return sign * value;
}

Mat resolve_gate_spec(const std::string& spec) {
  if (spec.empty()) throw std::invalid_argument("empty gate spec");
  if (spec[0] == '@') {
    Mat m = load_matrix_file(spec.substr(1));
    if (m.rows() != 4 || m.cols() != 4)
      throw std::invalid_argument("gate matrix file must be 4x4: " + spec);
    if (!is_unitary(m, 1e-8))
      throw std::invalid_argument("gate matrix file is not unitary: " + spec);
    return m;
  }

  std::string name = spec;
  std::string arg;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    arg = spec.substr(colon + 1);
  }
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return std::toupper(c); });

  if (name == "CNOT" || name == "CX") return gate_cnot();
  if (name == "CZ") return gate_cz();
  if (name == "SWAP") return gate_swap();
  if (name == "ISWAP") return gate_iswap();
  if (name == "CRX") return gate_crx(parse_angle(arg));
  if (name == "CRZ") return gate_crz(parse_angle(arg));
  if (name == "HAAR") {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(arg);
    } catch (...) {
      throw std::invalid_argument("HAAR spec needs an integer seed: " + spec);
    }
    Rng rng(seed);
    return haar_random_unitary(4, rng);
  }
  throw std::invalid_argument("unknown gate spec: " + spec);
}

Vec ket_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty state spec");
  const double inv = 1.0 / std::sqrt(2.0);
  Vec out(1);
  out(0) = 1.0;
  for (char c : s) {
    Vec q(2);
    switch (c) {
      case '0': q << 1, 0; break;
      case '1': q << 0, 1; break;
      case '+': q << inv, inv; break;
      case '-': q << inv, -inv; break;
      case 'r': q << inv, cplx(0, inv); break;
      case 'l': q << inv, cplx(0, -inv); break;
      default: throw std::invalid_argument(std::string("bad ket character: ") + c);
    }
    Vec next(out.size() * 2);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      next(2 * i) = out(i) * q(0);
      next(2 * i + 1) = out(i) * q(1);
    }
    out = std::move(next);
  }
  return out;
}

Mat observable_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty observable spec");
  if (s[0] == '@') {
    Mat m = load_matrix_file(s.substr(1));
    if (!is_hermitian(m, 1e-9))
      throw std::invalid_argument("observable matrix is not Hermitian: " + s);
    return m;
  }
  Mat out = Mat::Identity(1, 1);
  for (char c : s) {
    int k;
    switch (std::toupper(static_cast<unsigned char>(c))) {
      case 'I': k = 0; break;
      case 'X': k = 1; break;
      case 'Y': k = 2; break;
      case 'Z': k = 3; break;
      default: throw std::invalid_argument(std::string("bad Pauli character: ") + c);
    }
    out = kron(out, pauli(k));
  }
  return out;
}

}  // namespace qcut
