// Throughput comparison of the serial reference kernels against the OpenMP
// paths. Build target: qcut-bench.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qcut/gates.hpp"
#include "qcut/kak.hpp"
#include "qcut/mcsim.hpp"
#include "qcut/qpd.hpp"
#include "qcut/survey.hpp"

using namespace qcut;

namespace {

double seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("hardware threads: %d\n\n", threads);

  {
    const std::int64_t samples = 200000;
    auto t0 = std::chrono::steady_clock::now();
    const SurveyResult serial = haar_survey_serial(samples, 1);
    const double ts = seconds(t0);

    t0 = std::chrono::steady_clock::now();
    const SurveyResult parallel = haar_survey(samples, 1, 200, 0);
    const double tp = seconds(t0);

    const bool same = serial.counts == parallel.counts && serial.mean == parallel.mean;
    std::printf("haar survey, %lld samples\n", static_cast<long long>(samples));
    std::printf("  serial   %7.2fs  (%.0f samples/s)\n", ts, samples / ts);
    std::printf("  openmp   %7.2fs  (%.0f samples/s)  speedup %.2fx  identical %s\n\n",
                tp, samples / tp, ts / tp, same ? "yes" : "NO");
  }

  {
    const std::int64_t shots = 200000;
    const QPD q = build_single_cut_qpd(kak_decompose(gate_cnot()));
    const Vec psi = ket_from_string("+0");
    const Mat rho = Mat(psi * psi.adjoint());
    const Mat obs = observable_from_string("ZZ");

    auto t0 = std::chrono::steady_clock::now();
    const EstimatorResult serial = estimate(q, rho, obs, shots, 1, 1);
    const double ts = seconds(t0);

    t0 = std::chrono::steady_clock::now();
    const EstimatorResult parallel = estimate(q, rho, obs, shots, 1, 0);
    const double tp = seconds(t0);

    std::printf("monte carlo estimator, %lld shots\n", static_cast<long long>(shots));
    std::printf("  serial   %7.2fs  (%.0f shots/s)  mean %.4f\n", ts, shots / ts,
                serial.mean);
    std::printf("  openmp   %7.2fs  (%.0f shots/s)  mean %.4f  speedup %.2fx\n", tp,
                shots / tp, parallel.mean, ts / tp);
  }
  return 0;
}
