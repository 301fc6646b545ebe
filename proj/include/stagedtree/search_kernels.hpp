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

#pragma once

// Candidate evaluation kernels shared by the greedy searches. Each greedy step
// scores an independent list of candidate moves; the OpenMP variant fills the
// same output slots as the serial reference, and the accepted move is picked by
// a sequential reduction over the filled array so results never depend on
// thread scheduling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace stagedtree {

enum class ExecPolicy { kSerial, kParallel };

// out[k] = score_delta(k) for k in [0, n).
void evaluate_candidates_serial(std::size_t n, const std::function<double(std::size_t)>& score_delta,
                                std::vector<double>& out);
void evaluate_candidates_parallel(std::size_t n,
                                  const std::function<double(std::size_t)>& score_delta,
                                  std::vector<double>& out);
void evaluate_candidates(ExecPolicy policy, std::size_t n,
                         const std::function<double(std::size_t)>& score_delta,
                         std::vector<double>& out);

// Score differences closer than this are ties.
inline constexpr double kTieTolerance = 1e-10;

// Index of the most negative delta below -threshold, or nullopt. Ties go to the
// smallest index when seed == 0, otherwise to the smallest seeded hash of the
// index.
std::optional<std::size_t> select_best(std::span<const double> deltas, double threshold,
                                       std::uint64_t seed);

bool openmp_enabled();
int max_threads();

}  // namespace stagedtree
