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

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "stagedtree/dataset.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

enum class ZeroCountPolicy { kUniformFallback };

struct FitConfig {
  // Additive smoothing added to every (stage, level) count.
  double smoothing = 0.0;
  // Applies to stages with no observations when smoothing is zero.
  ZeroCountPolicy zero_count_policy = ZeroCountPolicy::kUniformFallback;
};

// Information criteria use the "lower is better" convention:
// bic = -2 logL + df ln n, aic = -2 logL + 2 df.
struct ScoreReport {
  double log_likelihood = 0.0;
  std::size_t df = 0;
  double bic = 0.0;
  double aic = 0.0;
  Count n = 0;

  bool operator==(const ScoreReport&) const = default;
};

enum class ScoreKind { kBic, kAic };

ScoreReport make_report(double log_likelihood, std::size_t df, Count n);
double criterion(const ScoreReport& report, ScoreKind kind);
// Cost of one free parameter under the criterion.
double penalty_per_parameter(ScoreKind kind, Count n);

// Per-stage counts at depth d: symbol -> counts over the levels of variable d.
// Every stage of the tree appears, including unobserved ones.
std::map<Symbol, std::vector<double>> stage_counts(const StagedTree& tree,
                                                   const Dataset& data, std::size_t depth);

// Sum of n_v ln(n_v / n) over a count vector (0 ln 0 := 0).
double multinomial_log_likelihood(std::span<const double> counts);

// Fits stage distributions. Throws std::invalid_argument on an empty dataset,
// mismatched spaces or negative smoothing.
StagedTree fit(const StagedTree& tree, const Dataset& data, const FitConfig& cfg = {});

// Product of the fitted conditionals along the root-to-leaf path of x.
// Throws StateError if the tree is unfitted.
double joint_probability(const StagedTree& tree, std::span<const std::size_t> x);

// Sum over depths of (#stages) * (|X_d| - 1), the root counting as one stage.
std::size_t degrees_of_freedom(const StagedTree& tree);

ScoreReport score(const StagedTree& tree, const Dataset& data, const FitConfig& cfg = {});

}  // namespace stagedtree
