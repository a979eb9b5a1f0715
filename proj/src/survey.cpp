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

#include "qcut/survey.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <cmath>
#include <stdexcept>

#include "qcut/gamma.hpp"
#include "qcut/kak.hpp"

namespace qcut {

namespace {

constexpr std::int64_t kChunk = 4096;

struct ChunkStats {
  std::vector<std::int64_t> counts;
  double sum = 0, sumsq = 0;
  double min_g = 8, max_g = 0;
};

ChunkStats run_chunk(std::uint64_t seed, std::uint64_t chunk_idx,
                     std::int64_t count, int bins, double lo, double hi) {
  ChunkStats st;
  st.counts.assign(bins, 0);
  Rng rng = Rng::stream(seed, chunk_idx);
  const double scale = bins / (hi - lo);
  for (std::int64_t i = 0; i < count; ++i) {
    const Mat u = haar_random_unitary(4, rng);
    const double g = gamma_single(kak_decompose(u).u).gamma;
    int bin = static_cast<int>((g - lo) * scale);
    if (bin < 0) bin = 0;
    if (bin >= bins) bin = bins - 1;
    ++st.counts[bin];
    st.sum += g;
    st.sumsq += g * g;
    st.min_g = std::min(st.min_g, g);
    st.max_g = std::max(st.max_g, g);
  }
  return st;
}

SurveyResult merge(std::int64_t samples, std::uint64_t seed, int bins,
                   const std::vector<ChunkStats>& chunks) {
  SurveyResult out;
  out.samples = samples;
  out.seed = seed;
  out.bins = bins;
  out.counts.assign(bins, 0);
  double sum = 0, sumsq = 0;
  out.min_gamma = 8;
  out.max_gamma = 0;
  for (const ChunkStats& st : chunks) {
    for (int b = 0; b < bins; ++b) out.counts[b] += st.counts[b];
    sum += st.sum;
    sumsq += st.sumsq;
    out.min_gamma = std::min(out.min_gamma, st.min_g);
    out.max_gamma = std::max(out.max_gamma, st.max_g);
  }
  out.mean = sum / samples;
  const double var =
      samples > 1 ? (sumsq - sum * sum / samples) / (samples - 1) : 0.0;
  out.stderr_mean = std::sqrt(std::max(0.0, var) / samples);
  return out;
}

}  // namespace

SurveyResult haar_survey(std::int64_t samples, std::uint64_t seed, int bins,
                         int workers) {
  if (samples < 1) throw std::invalid_argument("haar_survey: samples < 1");
  if (bins < 1) throw std::invalid_argument("haar_survey: bins < 1");

  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkStats> chunks(n_chunks);

#ifdef _OPENMP
  if (workers <= 0) workers = omp_get_max_threads();
#else
  workers = 1;
#endif

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t count = std::min(kChunk, samples - c * kChunk);
    chunks[c] = run_chunk(seed, static_cast<std::uint64_t>(c), count, bins, 1.0, 7.0);
  }
  return merge(samples, seed, bins, chunks);
}

SurveyResult haar_survey_serial(std::int64_t samples, std::uint64_t seed, int bins) {
  if (samples < 1) throw std::invalid_argument("haar_survey: samples < 1");
  const std::int64_t n_chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkStats> chunks(n_chunks);
  for (std::int64_t c = 0; c < n_chunks; ++c) {
    const std::int64_t count = std::min(kChunk, samples - c * kChunk);
    chunks[c] = run_chunk(seed, static_cast<std::uint64_t>(c), count, bins, 1.0, 7.0);
  }
  return merge(samples, seed, bins, chunks);
}

std::vector<ScalingRow> survey_scaling_table(double mean_gamma, int max_n) {
  std::vector<ScalingRow> rows;
  const double reg = (mean_gamma + 1.0) / 2.0;
  for (int n = 1; n <= max_n; ++n)
    rows.push_back({n, std::pow(mean_gamma, n), 2.0 * std::pow(reg, n) - 1.0});
  return rows;
}

}  // namespace qcut
