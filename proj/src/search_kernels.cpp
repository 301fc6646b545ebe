/* Copyright 2026 The stagedtree Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
 */

#include "stagedtree/search_kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stagedtree {

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void evaluate_candidates_serial(std::size_t n, const std::function<double(std::size_t)>& score_delta,
                                std::vector<double>& out) {
  out.resize(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = score_delta(k);
}

void evaluate_candidates_parallel(std::size_t n,
                                  const std::function<double(std::size_t)>& score_delta,
                                  std::vector<double>& out) {
  out.resize(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 16) if (count > 64)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = score_delta(static_cast<std::size_t>(k));
  }
}

void evaluate_candidates(ExecPolicy policy, std::size_t n,
                         const std::function<double(std::size_t)>& score_delta,
                         std::vector<double>& out) {
  if (policy == ExecPolicy::kParallel) {
    evaluate_candidates_parallel(n, score_delta, out);
  } else {
    evaluate_candidates_serial(n, score_delta, out);
  }
}

std::optional<std::size_t> select_best(std::span<const double> deltas, double threshold,
                                       std::uint64_t seed) {
  std::optional<std::size_t> best;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] < -threshold)) continue;
    if (!best) {
      best = k;
      continue;
    }
    const double diff = deltas[k] - deltas[*best];
    if (diff < -kTieTolerance) {
      best = k;
    } else if (diff <= kTieTolerance && seed != 0 && mix(seed ^ k) < mix(seed ^ *best)) {
      best = k;
    }
  }
  return best;
}

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace stagedtree
