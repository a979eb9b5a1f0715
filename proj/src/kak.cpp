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

#include "qcut/kak.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qcut/gates.hpp"

namespace qcut {

namespace {

constexpr double kPi = M_PI;
constexpr double kPi2 = M_PI / 2.0;
constexpr double kPi4 = M_PI / 4.0;

// Magic basis: columns are |Phi+>, i|Phi->, i|Psi+>, |Psi->. Conjugating a
// local SU(2)x(SU2) gate into this basis gives a real orthogonal matrix, and
// the interaction part becomes diagonal.
const Mat& magic_basis() {
  static const Mat b = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i(0, 1);
    Mat m(4, 4);
    m << s, i * s, 0, 0,
         0, 0, i * s, s,
         0, 0, i * s, -s,
         s, -i * s, 0, 0;
    return m;
  }();
  return b;
}

// sign_table[j][k-1]: eigenvalue of sigma_k (x) sigma_k on magic column j.
const std::array<std::array<double, 3>, 4>& magic_sign_table() {
  static const auto table = [] {
    std::array<std::array<double, 3>, 4> t{};
    const Mat& b = magic_basis();
    for (int k = 1; k <= 3; ++k) {
      const Mat op = kron(pauli(k), pauli(k));
      for (int j = 0; j < 4; ++j) {
        const cplx val = (b.col(j).adjoint() * op * b.col(j))(0, 0);
        t[j][k - 1] = std::round(val.real());
      }
    }
    return t;
  }();
  return table;
}

using Mat4d = Eigen::Matrix4d;

// Simultaneous diagonalization of two commuting real symmetric matrices by a
// real orthogonal basis. Degenerate clusters of the first matrix are refined
// with the second; ties beyond that are genuine degeneracies of the pair.
Mat4d simultaneous_diagonalize(const Mat4d& x, const Mat4d& y) {
  constexpr double cluster_tol = 1e-11;

  Eigen::SelfAdjointEigenSolver<Mat4d> es_x(x);
  Mat4d p = es_x.eigenvectors();
  const Eigen::Vector4d xv = es_x.eigenvalues();

  int start = 0;
  while (start < 4) {
    int end = start + 1;
    while (end < 4 && xv(end) - xv(start) <= cluster_tol) ++end;
    const int len = end - start;
    if (len > 1) {
      const Eigen::MatrixXd block =
          p.middleCols(start, len).transpose() * y * p.middleCols(start, len);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_y(
          (block + block.transpose()) / 2.0);
      p.middleCols(start, len) = p.middleCols(start, len) * es_y.eigenvectors();
    }
    start = end;
  }
  return p;
}

// Deterministic column normalization: fix each column's sign by its largest
// entry, then order columns by the (x, y) eigenvalue pair.
void canonicalize_frame(Mat4d& p, const Mat4d& x, const Mat4d& y) {
  for (int j = 0; j < 4; ++j) {
    int arg = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs(p(i, j)) > std::abs(p(arg, j)) + 1e-12) arg = i;
    if (p(arg, j) < 0) p.col(j) *= -1.0;
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::array<double, 4> xs{}, ys{};
  for (int j = 0; j < 4; ++j) {
    xs[j] = p.col(j).dot(x * p.col(j));
    ys[j] = p.col(j).dot(y * p.col(j));
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (xs[a] != xs[b]) return xs[a] < xs[b];
    return ys[a] < ys[b];
  });
  Mat4d sorted;
  for (int j = 0; j < 4; ++j) sorted.col(j) = p.col(order[j]);
  p = sorted;
  if (p.determinant() < 0) p.col(3) *= -1.0;
}

// G must be an exact Kronecker product a (x) b of single-qubit unitaries up
// to a scalar. Returns special-unitary factors and the absorbed phase.
struct ProductFactors {
  Mat a, b;
  double phase;
};

ProductFactors factor_two_qubit_product(const Mat& g) {
  Mat b(2, 2);
  b << g(0, 0), g(0, 1), g(1, 0), g(1, 1);
  if (std::abs(b.determinant()) < 0.1) {
    b << g(2, 0), g(2, 1), g(3, 0), g(3, 1);
  }
  cplx det_b = b.determinant();
  if (std::abs(det_b) < 0.1)
    throw std::runtime_error("factor_two_qubit_product: not a product gate");
  b /= std::sqrt(det_b);

  const Mat rest = g * kron(identity(2), b.adjoint());
  Mat a(2, 2);
  a << rest(0, 0), rest(0, 2), rest(2, 0), rest(2, 2);
  cplx det_a = a.determinant();
  if (std::abs(det_a) < 0.9)
    throw std::runtime_error("factor_two_qubit_product: not a product gate");
  a /= std::sqrt(det_a);
  const double phase = std::arg(det_a) / 2.0;

  if (frob_dist(std::exp(cplx(0, phase)) * kron(a, b), g) > 1e-9) {
    // sqrt branch picked the antipodal SU(2) representative
    a *= -1.0;
    if (frob_dist(std::exp(cplx(0, phase)) * kron(a, b), g) > 1e-9)
      throw std::runtime_error("factor_two_qubit_product: factorization failed");
  }
  return {a, b, phase};
}

// Canonicalization of the interaction angles. Rewrites
//   W(theta) = e^{i delta} * left * W(theta') * right
// with theta' in the chamber |t3| <= t2 <= t1 <= pi/4, left/right local.
struct CanonicalMove {
  std::array<double, 3> thetas;
  Mat left = identity(4);
  Mat right = identity(4);
  double phase = 0.0;
};

void shift_theta(CanonicalMove& m, int k) {
  // theta_k -> theta_k - pi/2, absorbing i * sigma_k (x) sigma_k on the left
  m.thetas[k] -= kPi2;
  m.left = m.left * kron(pauli(k + 1), pauli(k + 1));
  m.phase += kPi2;
}

void swap_thetas(CanonicalMove& m, int j, int k) {
  // conjugate by c (x) c where c maps axis j to axis k (up to sign)
  const int l = 3 - j - k;
  const Mat c = [&] {
    // exp(-i pi/4 sigma_{l+1})
    Mat r = std::cos(kPi4) * identity(2);
    r -= cplx(0, std::sin(kPi4)) * pauli(l + 1);
    return r;
  }();
  const Mat cc = kron(c, c);
  std::swap(m.thetas[j], m.thetas[k]);
  m.left = m.left * cc.adjoint();
  m.right = cc * m.right;
}

void negate_pair(CanonicalMove& m, int j, int k) {
  const int l = 3 - j - k;
  const Mat s = kron(pauli(l + 1), identity(2));
  m.thetas[j] = -m.thetas[j];
  m.thetas[k] = -m.thetas[k];
  m.left = m.left * s;
  m.right = s * m.right;
}

CanonicalMove canonicalize(const std::array<double, 3>& raw) {
  CanonicalMove m;
  m.thetas = raw;

  // fold each angle into (-pi/4, pi/4]
  for (int k = 0; k < 3; ++k) {
    while (m.thetas[k] > kPi4 + 1e-15) shift_theta(m, k);
    while (m.thetas[k] <= -kPi4 - 1e-15) {
      m.thetas[k] += kPi2;
      m.left = m.left * kron(pauli(k + 1), pauli(k + 1));
      m.phase -= kPi2;
    }
    if (m.thetas[k] <= -kPi4) {  // land exactly on -pi/4: prefer +pi/4
      m.thetas[k] += kPi2;
      m.left = m.left * kron(pauli(k + 1), pauli(k + 1));
      m.phase -= kPi2;
    }
  }

  // sort |theta| descending
  auto abs_less = [&](int a, int b) {
    return std::abs(m.thetas[a]) < std::abs(m.thetas[b]);
  };
  if (abs_less(0, 1)) swap_thetas(m, 0, 1);
  if (abs_less(1, 2)) swap_thetas(m, 1, 2);
  if (abs_less(0, 1)) swap_thetas(m, 0, 1);

  // move signs onto theta_3
  if (m.thetas[0] < 0 && m.thetas[1] < 0)
    negate_pair(m, 0, 1);
  else if (m.thetas[0] < 0)
    negate_pair(m, 0, 2);
  else if (m.thetas[1] < 0)
    negate_pair(m, 1, 2);

  // residual symmetry at the chamber boundary theta_1 = pi/4: fix the sign
  // of theta_3 (making the first nonzero Im(u_k) positive)
  if (m.thetas[0] >= kPi4 - 1e-12 && m.thetas[2] < -1e-15) {
    negate_pair(m, 0, 2);   // (pi/4, t2, t3) -> (-pi/4, t2, -t3)
    m.thetas[0] += kPi2;    // back to +pi/4
    m.left = m.left * kron(pauli(1), pauli(1));
    m.phase -= kPi2;
  }
  return m;
}

}  // namespace

std::array<cplx, 4> interaction_coefficients(const std::array<double, 3>& t) {
  const double c1 = std::cos(t[0]), s1 = std::sin(t[0]);
  const double c2 = std::cos(t[1]), s2 = std::sin(t[1]);
  const double c3 = std::cos(t[2]), s3 = std::sin(t[2]);
  return {
      cplx(c1 * c2 * c3, s1 * s2 * s3),
      cplx(c1 * s2 * s3, s1 * c2 * c3),
      cplx(s1 * c2 * s3, c1 * s2 * c3),
      cplx(s1 * s2 * c3, c1 * c2 * s3),
  };
}

Mat interaction_unitary(const std::array<cplx, 4>& u) {
  Mat w = Mat::Zero(4, 4);
  for (int k = 0; k < 4; ++k) w += u[k] * kron(pauli(k), pauli(k));
  return w;
}

KAK kak_decompose(const Mat& u4) {
  if (u4.rows() != 4 || u4.cols() != 4 || !is_unitary(u4, 1e-8))
    throw std::invalid_argument("kak_decompose: input is not a 4x4 unitary");

  // push the determinant phase out so u_prime is in SU(4)
  const cplx det = u4.determinant();
  const double alpha0 = std::arg(det) / 4.0;
  const Mat u_prime = u4 * std::exp(cplx(0, -alpha0));

  const Mat& b = magic_basis();
  const Mat v_magic = b.adjoint() * u_prime * b;
  const Mat s_m = v_magic.transpose() * v_magic;

  const Mat4d x = s_m.real();
  const Mat4d y = s_m.imag();
  Mat4d p = simultaneous_diagonalize(x, y);
  canonicalize_frame(p, x, y);

  const Mat pc = p.cast<cplx>();
  const Mat diag = pc.transpose() * s_m * pc;
  if (frob_dist(pc * diag.diagonal().asDiagonal().toDenseMatrix() * pc.transpose(),
                s_m) > 1e-9)
    throw std::runtime_error("kak_decompose: simultaneous diagonalization failed");

  // half-phases of the eigenvalues; the last one is pinned so they sum to
  // zero exactly, which keeps K1 special orthogonal
  std::array<double, 4> lambda{};
  for (int j = 0; j < 3; ++j) lambda[j] = 0.5 * std::arg(diag(j, j));
  lambda[3] = -lambda[0] - lambda[1] - lambda[2];

  Mat a_inv = Mat::Zero(4, 4);
  for (int j = 0; j < 4; ++j) a_inv(j, j) = std::exp(cplx(0, -lambda[j]));
  const Mat k1 = v_magic * pc * a_inv;
  const Mat k2 = pc.transpose();

  const auto& sign = magic_sign_table();
  std::array<double, 3> theta_raw{};
  for (int k = 0; k < 3; ++k) {
    double acc = 0;
    for (int j = 0; j < 4; ++j) acc += sign[j][k] * lambda[j];
    theta_raw[k] = acc / 4.0;
  }

  const Mat g1 = b * k1 * b.adjoint();
  const Mat g2 = b * k2 * b.adjoint();

  CanonicalMove mv = canonicalize(theta_raw);

  const auto [v1, v2, phase_l] = factor_two_qubit_product(g1 * mv.left);
  const auto [v3, v4, phase_r] = factor_two_qubit_product(mv.right * g2);

  KAK out;
  out.v1 = v1;
  out.v2 = v2;
  out.v3 = v3;
  out.v4 = v4;
  out.thetas = mv.thetas;
  out.u = interaction_coefficients(mv.thetas);
  out.global_phase =
      std::remainder(alpha0 + mv.phase + phase_l + phase_r, 2.0 * kPi);

  if (frob_dist(kak_reconstruct(out), u4) > 1e-9)
    throw std::runtime_error("kak_decompose: reconstruction check failed");
  return out;
}

Mat kak_reconstruct(const KAK& k) {
  return std::exp(cplx(0, k.global_phase)) * kron(k.v1, k.v2) *
         interaction_unitary(k.u) * kron(k.v3, k.v4);
}

}  // namespace qcut
