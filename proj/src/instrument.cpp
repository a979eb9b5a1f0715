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

#include "qcut/instrument.hpp"

#include <cmath>
#include <stdexcept>

#include "qcut/gates.hpp"

namespace qcut {

namespace dm {

namespace {

inline Eigen::Index bit_mask(int n, int wire) {
  return Eigen::Index(1) << (n - 1 - wire);
}

// Gather the sub-index formed by `wires` inside a global basis index.
inline Eigen::Index sub_index(Eigen::Index idx, int n, const std::vector<int>& wires) {
  Eigen::Index s = 0;
  for (int w : wires) s = (s << 1) | ((idx >> (n - 1 - w)) & 1);
  return s;
}

// Replace the bits of `wires` in `idx` by those of sub-index `s`.
inline Eigen::Index with_sub(Eigen::Index idx, int n, const std::vector<int>& wires,
                             Eigen::Index s) {
  const int k = static_cast<int>(wires.size());
  for (int i = 0; i < k; ++i) {
    const Eigen::Index m = bit_mask(n, wires[i]);
    if ((s >> (k - 1 - i)) & 1)
      idx |= m;
    else
      idx &= ~m;
  }
  return idx;
}

// out = (U on wires) * in
Mat left_mul(const Mat& in, int n, const Mat& u, const std::vector<int>& wires) {
  const Eigen::Index dim = in.rows();
  const Eigen::Index m = u.rows();
  Mat out = Mat::Zero(dim, in.cols());
  for (Eigen::Index r = 0; r < dim; ++r) {
    const Eigen::Index sr = sub_index(r, n, wires);
    for (Eigen::Index s = 0; s < m; ++s) {
      const cplx amp = u(sr, s);
      if (amp == cplx(0, 0)) continue;
      out.row(r) += amp * in.row(with_sub(r, n, wires, s));
    }
  }
  return out;
}

}  // namespace

void apply_unitary(Mat& rho, int n, const Mat& u, const std::vector<int>& wires) {
  if (u.rows() != (Eigen::Index(1) << wires.size()))
    throw std::invalid_argument("apply_unitary: matrix/wire mismatch");
  Mat tmp = left_mul(rho, n, u, wires);           // U rho
  rho = dagger(left_mul(dagger(tmp), n, u, wires));  // (U rho^+)^+ = rho U^+ ... tmp U^+
}

void apply_kraus(Mat& rho, int n, const std::vector<Mat>& kraus,
                 const std::vector<int>& wires) {
  Mat acc = Mat::Zero(rho.rows(), rho.cols());
  for (const Mat& k : kraus) {
    Mat t = left_mul(rho, n, k, wires);
    acc += dagger(left_mul(dagger(t), n, k, wires));
  }
  rho = std::move(acc);
}

double measure_prob(const Mat& rho, int n, int wire, int bit) {
  const Eigen::Index mask = bit_mask(n, wire);
  double p = 0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    if (((i & mask) != 0) == (bit != 0)) p += rho(i, i).real();
  return p;
}

void project(Mat& rho, int n, int wire, int bit) {
  const Eigen::Index mask = bit_mask(n, wire);
  for (Eigen::Index r = 0; r < rho.rows(); ++r) {
    const bool keep_r = ((r & mask) != 0) == (bit != 0);
    for (Eigen::Index c = 0; c < rho.cols(); ++c) {
      const bool keep_c = ((c & mask) != 0) == (bit != 0);
      if (!keep_r || !keep_c) rho(r, c) = 0;
    }
  }
}

Mat trace_out_wire(const Mat& rho, int n, int wire) {
  const Eigen::Index half = rho.rows() / 2;
  Mat out = Mat::Zero(half, half);
  const Eigen::Index low = bit_mask(n, wire) - 1;  // bits below the removed one
  auto expand = [&](Eigen::Index idx, Eigen::Index b) {
    return ((idx & ~low) << 1) | (b << (n - 1 - wire)) | (idx & low);
  };
  for (Eigen::Index r = 0; r < half; ++r)
    for (Eigen::Index c = 0; c < half; ++c)
      out(r, c) = rho(expand(r, 0), expand(c, 0)) + rho(expand(r, 1), expand(c, 1));
  return out;
}

Mat bell_project(const Mat& rho, int n, int w1, int w2, int a) {
  if (w1 == w2) throw std::invalid_argument("bell_project: identical wires");
  // |phi_a> = (sigma_a (x) 1) (|00> + |11>)/sqrt(2); two nonzero amplitudes
  Vec phi = Vec::Zero(4);
  {
    const Mat& s = pauli(a);
    for (int j = 0; j < 2; ++j) {  // (sigma_a |j>) (x) |j>
      phi(0 * 2 + j) += s(0, j) / std::sqrt(2.0);
      phi(1 * 2 + j) += s(1, j) / std::sqrt(2.0);
    }
  }
  const int n_out = n - 2;
  const Eigen::Index dim_out = Eigen::Index(1) << n_out;
  Mat out = Mat::Zero(dim_out, dim_out);

  // positions of the remaining wires in the old index
  std::vector<int> rest;
  for (int w = 0; w < n; ++w)
    if (w != w1 && w != w2) rest.push_back(w);

  const std::vector<int> pair{w1, w2};
  for (Eigen::Index r = 0; r < dim_out; ++r) {
    Eigen::Index base_r = 0;
    for (int i = 0; i < n_out; ++i)
      if ((r >> (n_out - 1 - i)) & 1) base_r |= bit_mask(n, rest[i]);
    for (Eigen::Index c = 0; c < dim_out; ++c) {
      Eigen::Index base_c = 0;
      for (int i = 0; i < n_out; ++i)
        if ((c >> (n_out - 1 - i)) & 1) base_c |= bit_mask(n, rest[i]);
      cplx acc = 0;
      for (Eigen::Index s1 = 0; s1 < 4; ++s1) {
        if (phi(s1) == cplx(0, 0)) continue;
        for (Eigen::Index s2 = 0; s2 < 4; ++s2) {
          if (phi(s2) == cplx(0, 0)) continue;
          acc += std::conj(phi(s1)) * phi(s2) *
                 rho(with_sub(base_r, n, pair, s1), with_sub(base_c, n, pair, s2));
        }
      }
      out(r, c) = acc;
    }
  }
  return out;
}

double expectation_leading(const Mat& rho, int n, const Mat& obs, int obs_wires) {
  const Eigen::Index dim_obs = obs.rows();
  const Eigen::Index dim_rest = (Eigen::Index(1) << n) / dim_obs;
  // tr((obs (x) 1) rho): leading wires are the most significant bits
  cplx acc = 0;
  for (Eigen::Index a = 0; a < dim_obs; ++a)
    for (Eigen::Index b = 0; b < dim_obs; ++b) {
      if (obs(a, b) == cplx(0, 0)) continue;
      for (Eigen::Index r = 0; r < dim_rest; ++r)
        acc += obs(a, b) * rho(b * dim_rest + r, a * dim_rest + r);
    }
  (void)obs_wires;
  return acc.real();
}

}  // namespace dm

int LocalInstrument::measurement_count() const {
  int c = 0;
  for (const auto& op : ops)
    if (op.kind == OpKind::MeasureZ) ++c;
  return c;
}

namespace {

const Mat& bell_prep_matrix() {
  // CNOT * (H (x) I): |00> -> (|00> + |11>)/sqrt(2)
  static const Mat m = [] {
    return Mat(gate_cnot() * kron(gate_h(), identity(2)));
  }();
  return m;
}

std::vector<int> mapped(const std::vector<int>& local, const std::vector<int>& map) {
  std::vector<int> out;
  out.reserve(local.size());
  for (int w : local) out.push_back(map.at(w));
  return out;
}

template <typename OnBranch>
void walk_branches(Mat rho, int n, const LocalInstrument& inst,
                   const std::vector<int>& map, std::size_t op_idx, int bit_idx,
                   std::uint32_t bits, OnBranch&& on_branch) {
  for (std::size_t i = op_idx; i < inst.ops.size(); ++i) {
    const InstrumentOp& op = inst.ops[i];
    switch (op.kind) {
      case OpKind::Unitary:
        dm::apply_unitary(rho, n, op.matrix, mapped(op.wires, map));
        break;
      case OpKind::PrepareBell:
        dm::apply_unitary(rho, n, bell_prep_matrix(), mapped(op.wires, map));
        break;
      case OpKind::MeasureZ: {
        const int wire = map.at(op.wires.at(0));
        for (int bit = 0; bit < 2; ++bit) {
          Mat branch = rho;
          dm::project(branch, n, wire, bit);
          walk_branches(std::move(branch), n, inst, map, i + 1, bit_idx + 1,
                        bits | (static_cast<std::uint32_t>(bit) << bit_idx),
                        on_branch);
        }
        return;
      }
    }
  }
  on_branch(std::move(rho), bits);
}

}  // namespace

std::vector<Branch> run_instrument_branches(const Mat& rho, int n,
                                            const LocalInstrument& inst,
                                            const std::vector<int>& wire_map) {
  std::vector<Branch> out;
  walk_branches(rho, n, inst, wire_map, 0, 0, 0,
                [&](Mat r, std::uint32_t bits) { out.push_back({std::move(r), bits}); });
  return out;
}

Mat run_instrument_signed(const Mat& rho, int n, const LocalInstrument& inst,
                          const std::vector<int>& wire_map) {
  Mat acc = Mat::Zero(rho.rows(), rho.cols());
  walk_branches(rho, n, inst, wire_map, 0, 0, 0, [&](Mat r, std::uint32_t bits) {
    acc += static_cast<double>(inst.sign_of(bits)) * r;
  });
  return acc;
}

Mat run_instrument_sampled(const Mat& rho, int n, const LocalInstrument& inst,
                           const std::vector<int>& wire_map, Rng& rng,
                           std::uint32_t& bits_out) {
  Mat state = rho;
  std::uint32_t bits = 0;
  int bit_idx = 0;
  for (const InstrumentOp& op : inst.ops) {
    switch (op.kind) {
      case OpKind::Unitary:
        dm::apply_unitary(state, n, op.matrix, mapped(op.wires, wire_map));
        break;
      case OpKind::PrepareBell:
        dm::apply_unitary(state, n, bell_prep_matrix(), mapped(op.wires, wire_map));
        break;
      case OpKind::MeasureZ: {
        const int wire = wire_map.at(op.wires.at(0));
        const double p1 = dm::measure_prob(state, n, wire, 1);
        const double trace = state.trace().real();
        const int bit = (trace > 0 && rng.uniform() * trace < p1) ? 1 : 0;
        dm::project(state, n, wire, bit);
        const double p = bit ? p1 : trace - p1;
        if (p > 0) state /= p;
        bits |= static_cast<std::uint32_t>(bit) << bit_idx;
        ++bit_idx;
        break;
      }
    }
  }
  bits_out = bits;
  return state;
}

}  // namespace qcut
