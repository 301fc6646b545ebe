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

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "stagedtree/sample_space.hpp"

namespace stagedtree {

// Opaque stage label; two vertices share a stage iff their symbols are equal.
using Symbol = std::uint32_t;

// Largest number of vertices accepted at one depth of a tree.
inline constexpr Index kMaxVerticesPerDepth = Index{1} << 26;

// Fitted conditional distributions. distributions[d] maps each stage symbol at
// depth d to a distribution over the levels of variable d. Depth 0 is the root,
// which always has the single symbol 0.
struct StageDistributions {
  std::vector<std::map<Symbol, std::vector<double>>> distributions;

  bool operator==(const StageDistributions&) const = default;
};

// An X-compatible staged tree stored as stage vectors. Depth d (1 <= d < p) has
// one vertex per configuration of the first d variables, in lexicographic
// order; its symbol selects the distribution of variable d.
class StagedTree {
 public:
  StagedTree() = default;
  // stage_vectors[d - 1] is the stage vector at depth d.
  StagedTree(SampleSpace space, std::vector<std::vector<Symbol>> stage_vectors);

  // Every vertex in its own stage.
  static StagedTree saturated(const SampleSpace& space);
  // One stage per depth (full independence).
  static StagedTree independence(const SampleSpace& space);

  const SampleSpace& space() const { return space_; }
  std::size_t depth_count() const { return space_.size(); }

  // Stage vector at depth d, 1 <= d < p.
  std::span<const Symbol> stages(std::size_t depth) const;
  const std::vector<std::vector<Symbol>>& stage_vectors() const { return stage_vectors_; }
  // Stage of a vertex; depth 0 always returns 0.
  Symbol stage_of(std::size_t depth, Index vertex) const;
  // Number of distinct stages at depth d; 1 for the root.
  std::size_t stage_count(std::size_t depth) const;

  // Copy with stage vector d replaced. Drops any fitted distributions.
  StagedTree with_stages(std::size_t depth, std::vector<Symbol> symbols) const;

  bool is_fitted() const { return fit_.has_value(); }
  // Throws StateError when unfitted.
  const StageDistributions& fitted() const;
  // Throws std::invalid_argument unless every stage has one normalized
  // distribution of the right length.
  StagedTree with_fit(StageDistributions fit) const;
  StagedTree without_fit() const;

  // Distribution of variable d at the given vertex of depth d.
  std::span<const double> distribution(std::size_t depth, Index vertex) const;

  // Stage symbols renumbered 0, 1, ... in first-occurrence order at each depth;
  // fitted distributions follow their stages.
  StagedTree canonical() const;

  bool operator==(const StagedTree&) const = default;

 private:
  SampleSpace space_;
  std::vector<std::vector<Symbol>> stage_vectors_;
  std::optional<StageDistributions> fit_;
};

// Renumbers symbols 0, 1, ... in order of first occurrence.
std::vector<Symbol> canonicalize(std::span<const Symbol> symbols);
std::size_t distinct_count(std::span<const Symbol> symbols);

// True iff every stage of `fine` lies inside a single stage of `coarse` at every
// depth, i.e. the model of `coarse` is contained in the model of `fine`.
// Throws std::invalid_argument if the sample spaces differ.
bool staging_refines(const StagedTree& fine, const StagedTree& coarse);

}  // namespace stagedtree
