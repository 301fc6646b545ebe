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
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stagedtree/conversion.hpp"
#include "stagedtree/dag.hpp"
#include "stagedtree/dataset.hpp"
#include "stagedtree/scoring.hpp"
#include "stagedtree/search_kernels.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

enum class SearchAlgorithm { kHc, kBhc, kCsbhc };
enum class MoveKind { kJoin, kSplit, kColumnJoin };

std::string_view to_string(SearchAlgorithm algo);
std::optional<SearchAlgorithm> parse_algorithm(std::string_view text);
std::string_view to_string(MoveKind kind);
std::optional<MoveKind> parse_move_kind(std::string_view text);

// Score differences must beat this to count as an improvement.
inline constexpr double kImprovementThreshold = 1e-9;

struct SearchConfig {
  ScoreKind score = ScoreKind::kBic;
  // Accepted moves per depth; unbounded when empty.
  std::optional<std::size_t> max_iter;
  // 0 breaks exact ties by candidate order; other values by a seeded hash.
  std::uint64_t seed = 0;
  // Depths (1..p-1) to search; all when empty.
  std::optional<std::vector<std::size_t>> scope;
  ExecPolicy policy = ExecPolicy::kParallel;
};

struct SearchStep {
  std::size_t depth = 0;
  MoveKind kind = MoveKind::kJoin;
  // Stage ids (canonical numbering before the move) touched by the move.
  std::vector<Symbol> stages;
  // Vertex moved by a hill-climbing step.
  std::optional<Index> vertex;
  double score_before = 0.0;
  double score_after = 0.0;

  bool operator==(const SearchStep&) const = default;
};

struct SearchTrace {
  std::vector<SearchStep> steps;

  bool operator==(const SearchTrace&) const = default;
};

struct SearchResult {
  StagedTree tree;  // canonical, fitted by maximum likelihood
  SearchTrace trace;
  double score = 0.0;  // criterion value of `tree`
};

// Join-only search: best pairwise stage merge per step.
SearchResult bhc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg = {});
// Join-and-split search: best single-vertex reassignment per step.
SearchResult hc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg = {});
// Context-specific backward search: best merge of the stages along one
// column of a stage matrix per step.
SearchResult csbhc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg = {});
SearchResult run_search(SearchAlgorithm algo, const StagedTree& start, const Dataset& data,
                        const SearchConfig& cfg = {});

// Starting point used when no DAG is given: independence for hc, saturated
// for the backward searches.
StagedTree default_start(SearchAlgorithm algo, const SampleSpace& space);

struct RefineResult {
  StagedTree start;  // staged tree of the input DAG
  SearchResult search;
  Aldag aldag;
  ClassificationEvidence evidence;
  ScoreReport start_report;
  ScoreReport report;
};

// DAG -> staged tree -> backward search -> labelled minimal DAG.
RefineResult refine_dag(const Dag& dag, const Dataset& data, SearchAlgorithm algo,
                        const SearchConfig& cfg = {});

struct LearnDagConfig {
  ScoreKind score = ScoreKind::kBic;
  // Only edges that point forward in the column order.
  bool respect_order = true;
  // Variable that may not have children.
  std::optional<std::size_t> sink;
  std::uint64_t seed = 0;
};

struct LearnedDag {
  // order[k] is the data column of the k-th variable of `dag`.
  std::vector<std::size_t> order;
  Dag dag;
  double score = 0.0;
};

// Greedy add/delete (and reverse, when the order is free) hill climbing over
// DAGs with a decomposable criterion.
LearnedDag learn_dag(const Dataset& data, const LearnDagConfig& cfg = {});

// Criterion of a DAG over the natural order of `data`.
double dag_score(const Dag& dag, const Dataset& data, ScoreKind kind = ScoreKind::kBic);

inline constexpr std::size_t kMaxEnumeratedVariables = 8;

struct OrderCandidate {
  std::vector<std::size_t> order;
  double score = 0.0;
};

struct OrderSearchResult {
  std::vector<std::size_t> order;
  Dataset data;  // data permuted into `order`
  SearchResult best;
  std::vector<OrderCandidate> evaluated;  // in lexicographic order
};

// Exhaustive search over variable orders, optionally pinning one variable last.
// Throws UnsupportedSize above kMaxEnumeratedVariables variables.
OrderSearchResult enumerate_orders(const Dataset& data, std::optional<std::size_t> fixed_last,
                                   SearchAlgorithm algo, const SearchConfig& cfg = {});

}  // namespace stagedtree
