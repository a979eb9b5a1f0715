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

#include "qcut/mcsim.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "qcut/gamma.hpp"

namespace qcut {

namespace {

void check_obs(const Mat& obs) {
  if (!is_hermitian(obs, 1e-9))
    throw std::invalid_argument("observable is not Hermitian");
}

struct TermLayout {
  int n = 0;    // total wires: system + ancillas of both sides
  int sys = 0;  // system wires
  std::vector<int> map_a, map_b;
};

TermLayout layout_for(const QPDTerm& t, int sys_a, int sys_b) {
  TermLayout l;
  l.sys = sys_a + sys_b;
  l.n = l.sys + t.inst_a.ancilla_count + t.inst_b.ancilla_count;
  for (int w = 0; w < sys_a; ++w) l.map_a.push_back(w);
  for (int w = 0; w < t.inst_a.ancilla_count; ++w) l.map_a.push_back(l.sys + w);
  for (int w = 0; w < sys_b; ++w) l.map_b.push_back(sys_a + w);
  for (int w = 0; w < t.inst_b.ancilla_count; ++w)
    l.map_b.push_back(l.sys + t.inst_a.ancilla_count + w);
  return l;
}

Mat extend_with_ancillas(const Mat& rho_sys, int extra) {
  if (extra == 0) return rho_sys;
  const Eigen::Index da = Eigen::Index(1) << extra;
  Mat rho = Mat::Zero(rho_sys.rows() * da, rho_sys.cols() * da);
  for (Eigen::Index r = 0; r < rho_sys.rows(); ++r)
    for (Eigen::Index c = 0; c < rho_sys.cols(); ++c)
      rho(r * da, c * da) = rho_sys(r, c);
  return rho;
}

struct ObsSampler {
  Mat vectors;             // columns are eigenvectors
  Eigen::VectorXd values;  // matching eigenvalues
};

ObsSampler make_obs_sampler(const Mat& obs) {
  Eigen::SelfAdjointEigenSolver<Mat> es(obs);
  if (es.eigenvalues().minCoeff() < -1.0 - 1e-9 ||
      es.eigenvalues().maxCoeff() > 1.0 + 1e-9)
    throw std::invalid_argument("observable spectrum must lie in [-1, 1]");
  return {Mat(es.eigenvectors()), es.eigenvalues()};
}

double one_shot(const QPD& q, const Mat& rho_in, const ObsSampler& sampler,
                Rng& rng) {
  const SampledTerm pick = sample_term(q, rng);
  const QPDTerm& t = q.terms[pick.index];
  const TermLayout l = layout_for(t, q.sys_a, q.sys_b);
  const Mat rho_ext = extend_with_ancillas(rho_in, l.n - l.sys);

  std::uint32_t bits_a = 0, bits_b = 0;
  Mat state = run_instrument_sampled(rho_ext, l.n, t.inst_a, l.map_a, rng, bits_a);
  state = run_instrument_sampled(state, l.n, t.inst_b, l.map_b, rng, bits_b);
  const int parity = t.inst_a.sign_of(bits_a) * t.inst_b.sign_of(bits_b);

  Mat sys = state;
  for (int a = l.n - l.sys; a > 0; --a)
    sys = dm::trace_out_wire(sys, l.sys + a, l.sys + a - 1);

  // projective measurement in the eigenbasis of obs
  const double x = rng.uniform();
  double cum = 0;
  double eig = sampler.values(sampler.values.size() - 1);
  for (Eigen::Index e = 0; e < sampler.values.size(); ++e) {
    const cplx amp =
        (sampler.vectors.col(e).adjoint() * sys * sampler.vectors.col(e))(0, 0);
    cum += std::max(0.0, amp.real());
    if (x < cum) {
      eig = sampler.values(e);
      break;
    }
  }
  return pick.sign * parity * q.one_norm * eig;
}

}  // namespace

double exact_expectation(const Mat& u, const Mat& rho_in, const Mat& obs) {
  check_obs(obs);
  if (u.rows() != rho_in.rows() || obs.rows() != rho_in.rows())
    throw std::invalid_argument("exact_expectation: dimension mismatch");
  return (obs * u * rho_in * u.adjoint()).trace().real();
}

double run_term_exact(const QPDTerm& t, int sys_a, int sys_b, const Mat& rho_in,
                      const Mat& obs) {
  check_obs(obs);
  const TermLayout l = layout_for(t, sys_a, sys_b);
  if (rho_in.rows() != (Eigen::Index(1) << l.sys))
    throw std::invalid_argument("run_term_exact: state dimension mismatch");

  const Mat rho = extend_with_ancillas(rho_in, l.n - l.sys);
  double acc = 0;
  for (const Branch& ba : run_instrument_branches(rho, l.n, t.inst_a, l.map_a)) {
    const int sa = t.inst_a.sign_of(ba.bits);
    for (const Branch& bb :
         run_instrument_branches(ba.rho, l.n, t.inst_b, l.map_b)) {
      const int sb = t.inst_b.sign_of(bb.bits);
      acc += sa * sb * dm::expectation_leading(bb.rho, l.n, obs, l.sys);
    }
  }
  return acc;
}

double qpd_exact_value(const QPD& q, const Mat& rho_in, const Mat& obs) {
  double acc = 0;
  for (const QPDTerm& t : q.terms)
    acc += t.weight * run_term_exact(t, q.sys_a, q.sys_b, rho_in, obs);
  return acc;
}

EstimatorResult estimate(const QPD& q, const Mat& rho_in, const Mat& obs,
                         std::int64_t shots, std::uint64_t seed, int workers) {
  if (shots < 1) throw std::invalid_argument("estimate: shots < 1");
  check_obs(obs);
  if (!is_density_operator(rho_in, 1e-8))
    throw std::invalid_argument("estimate: rho_in is not a density operator");

  const ObsSampler sampler = make_obs_sampler(obs);

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
      const double outcome = one_shot(q, rho_in, sampler, rng);
      s += outcome;
      s2 += outcome * outcome;
    }
    sums[w] = s;
    sumsqs[w] = s2;
  }

  // merge in worker order so the result is fixed by (seed, workers)
  double total = 0, totalsq = 0;
  for (int w = 0; w < workers; ++w) {
    total += sums[w];
    totalsq += sumsqs[w];
  }

  EstimatorResult res;
  res.shots = shots;
  res.seed = seed;
  res.workers = workers;
  res.gamma_used = q.one_norm;
  res.mean = total / shots;
  const double var =
      shots > 1 ? (totalsq - total * total / shots) / (shots - 1) : 0.0;
  res.stderr_mean = std::sqrt(std::max(0.0, var) / shots);
  return res;
}

CalibrationResult calibrate_overhead(const QPD& q, const Mat& rho_in,
                                     const Mat& obs, double eps, double delta,
                                     std::uint64_t seed) {
  CalibrationResult out;
  out.eps = eps;
  out.shots_used = shots_required(q.one_norm, eps, delta);
  out.exact = qpd_exact_value(q, rho_in, obs);
  out.mean = estimate(q, rho_in, obs, out.shots_used, seed).mean;
  out.achieved = std::abs(out.mean - out.exact) <= eps;
  return out;
}

}  // namespace qcut
