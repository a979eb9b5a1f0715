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

#include "qcut/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcut {

namespace {

int qubit_count(Eigen::Index dim) {
  int n = 0;
  Eigen::Index d = 1;
  while (d < dim) {
    d <<= 1;
    ++n;
  }
  if (d != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

}  // namespace

Mat identity(int d) { return Mat::Identity(d, d); }

Mat dagger(const Mat& m) { return m.adjoint(); }

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double frob_norm(const Mat& m) { return m.norm(); }

double frob_dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

bool is_unitary(const Mat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return frob_dist(m.adjoint() * m, identity(static_cast<int>(m.rows()))) <= tol;
}

bool is_hermitian(const Mat& m, double tol) {
  return m.rows() == m.cols() && frob_dist(m, m.adjoint()) <= tol;
}

bool is_density_operator(const Mat& rho, double tol) {
  if (!is_hermitian(rho, tol)) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    return false;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  return es.eigenvalues().minCoeff() >= kEigClip;
}

Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (rho.rows() != total || rho.cols() != total)
    throw std::invalid_argument("partial_trace: dims do not match operator");

  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw std::invalid_argument("partial_trace: bad keep index");
    kept[k] = true;
  }

  // strides of each subsystem in the flat index
  std::vector<Eigen::Index> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  Eigen::Index dim_keep = 1, dim_rest = 1;
  std::vector<int> keep_idx, rest_idx;
  for (int i = 0; i < n; ++i) {
    if (kept[i]) {
      dim_keep *= dims[i];
      keep_idx.push_back(i);
    } else {
      dim_rest *= dims[i];
      rest_idx.push_back(i);
    }
  }

  auto flat = [&](Eigen::Index keep_part, Eigen::Index rest_part) {
    Eigen::Index idx = 0;
    Eigen::Index k = keep_part;
    for (int i = static_cast<int>(keep_idx.size()) - 1; i >= 0; --i) {
      idx += (k % dims[keep_idx[i]]) * stride[keep_idx[i]];
      k /= dims[keep_idx[i]];
    }
    Eigen::Index r = rest_part;
    for (int i = static_cast<int>(rest_idx.size()) - 1; i >= 0; --i) {
      idx += (r % dims[rest_idx[i]]) * stride[rest_idx[i]];
      r /= dims[rest_idx[i]];
    }
    return idx;
  };

  Mat out = Mat::Zero(dim_keep, dim_keep);
  for (Eigen::Index a = 0; a < dim_keep; ++a)
    for (Eigen::Index b = 0; b < dim_keep; ++b) {
      cplx acc = 0;
      for (Eigen::Index r = 0; r < dim_rest; ++r)
        acc += rho(flat(a, r), flat(b, r));
      out(a, b) = acc;
    }
  return out;
}

Mat embed_unitary(const Mat& u, const std::vector<int>& wires, int n_wires) {
  const int k = static_cast<int>(wires.size());
  if (u.rows() != (1 << k) || u.cols() != (1 << k))
    throw std::invalid_argument("embed_unitary: matrix does not match wire count");
  for (int w : wires)
    if (w < 0 || w >= n_wires) throw std::invalid_argument("embed_unitary: bad wire");

  const Eigen::Index dim = Eigen::Index(1) << n_wires;
  Mat out = Mat::Zero(dim, dim);
  // bit of wire w in a basis index (wire 0 = most significant)
  auto bit_pos = [&](int w) { return n_wires - 1 - w; };

  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index sub = 0;
    for (int i = 0; i < k; ++i)
      sub = (sub << 1) | ((col >> bit_pos(wires[i])) & 1);
    for (Eigen::Index s = 0; s < (Eigen::Index(1) << k); ++s) {
      const cplx amp = u(s, sub);
      if (amp == cplx(0, 0)) continue;
      Eigen::Index row = col;
      for (int i = 0; i < k; ++i) {
        const Eigen::Index mask = Eigen::Index(1) << bit_pos(wires[i]);
        if ((s >> (k - 1 - i)) & 1)
          row |= mask;
        else
          row &= ~mask;
      }
      out(row, col) += amp;
    }
  }
  return out;
}

namespace {

std::vector<Eigen::Index> permutation_map(int n, const std::vector<int>& perm) {
  const Eigen::Index dim = Eigen::Index(1) << n;
  std::vector<Eigen::Index> map(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    Eigen::Index out = 0;
    for (int i = 0; i < n; ++i) {
      const int src = perm[i];
      const Eigen::Index bit = (idx >> (n - 1 - src)) & 1;
      out |= bit << (n - 1 - i);
    }
    map[idx] = out;
  }
  return map;
}

}  // namespace

Mat permute_qubit_op(const Mat& m, const std::vector<int>& perm) {
  const int n = qubit_count(m.rows());
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_qubit_op: bad permutation size");
  const auto map = permutation_map(n, perm);
  Mat out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out(map[r], map[c]) = m(r, c);
  return out;
}

Vec permute_qubit_ket(const Vec& v, const std::vector<int>& perm) {
  const int n = qubit_count(v.size());
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permute_qubit_ket: bad permutation size");
  const auto map = permutation_map(n, perm);
  Vec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(map[i]) = v(i);
  return out;
}

Vec max_entangled_ket(int d) {
  Vec v = Vec::Zero(Eigen::Index(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v(Eigen::Index(i) * d + i) = amp;
  return v;
}

ChoiOp choi_of_channel(const std::vector<Mat>& kraus_plus,
                       const std::vector<Mat>& kraus_minus) {
  if (kraus_plus.empty() && kraus_minus.empty())
    throw std::invalid_argument("choi_of_channel: no Kraus operators");
  const Mat& first = kraus_plus.empty() ? kraus_minus.front() : kraus_plus.front();
  const int din = static_cast<int>(first.cols());
  const int dout = static_cast<int>(first.rows());
  for (const auto* set : {&kraus_plus, &kraus_minus})
    for (const Mat& k : *set)
      if (k.cols() != din || k.rows() != dout)
        throw std::invalid_argument("choi_of_channel: mismatched Kraus dimensions");

  const Vec psi = max_entangled_ket(din);
  const Mat id_in = identity(din);
  Mat acc = Mat::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  auto add = [&](const Mat& k, double sign) {
    Vec w = kron(id_in, k) * psi;
    acc += sign * (w * w.adjoint());
  };
  for (const Mat& k : kraus_plus) add(k, 1.0);
  for (const Mat& k : kraus_minus) add(k, -1.0);
  return ChoiOp{din, dout, std::move(acc)};
}

ChoiOp choi_of_unitary(const Mat& u) { return choi_of_channel({u}); }

Vec choi_state_ket(const Mat& u) {
  const int d = static_cast<int>(u.rows());
  return kron(identity(d), u) * max_entangled_ket(d);
}

std::vector<double> schmidt_coefficients(const Vec& psi, int dim_a, int dim_b) {
  if (psi.size() != Eigen::Index(dim_a) * dim_b)
    throw std::invalid_argument("schmidt_coefficients: dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("schmidt_coefficients: ket is not normalized");
  Mat m(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a)
    for (int b = 0; b < dim_b; ++b) m(a, b) = psi(Eigen::Index(a) * dim_b + b);
  Eigen::JacobiSVD<Mat> svd(m);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Mat haar_random_unitary(int dim, Rng& rng) {
  if (dim < 1) throw std::invalid_argument("haar_random_unitary: dim < 1");
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = cplx(rng.gaussian(), rng.gaussian());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0) ? rjj / a : cplx(1, 0);
  }
  return q;
}

}  // namespace qcut
