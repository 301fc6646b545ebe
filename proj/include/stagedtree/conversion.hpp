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
#include <span>
#include <utility>
#include <vector>

#include "stagedtree/dag.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

// Structural evidence behind one edge label: the stage matrix of the parent
// variable (rows = its levels, columns = contexts over the remaining retained
// variables) summarized by distinct-symbol counts.
struct EdgeEvidence {
  Edge edge;
  std::size_t rows = 0;  // m
  std::size_t cols = 0;  // n
  std::vector<std::size_t> column_distinct;  // c_k
  std::vector<std::size_t> row_distinct;     // r_u
  std::size_t row_distinct_sum = 0;          // r
  std::size_t distinct = 0;                  // d
  // Variables indexing the columns, slowest first.
  std::vector<std::size_t> context_variables;
  // Column indices with a constant column (context-specific independence) and
  // with a repeated but non-constant column (partial independence).
  std::vector<std::size_t> context_columns;
  std::vector<std::size_t> partial_columns;

  // Levels of context_variables for a column index.
  std::vector<std::size_t> context_of(const std::vector<std::size_t>& cardinalities,
                                      std::size_t column) const;
};

struct ClassificationEvidence {
  std::vector<EdgeEvidence> edges;  // one per ALDAG edge, sorted by (to, from)
};

// Staged tree whose model equals the model of the DAG. The natural variable
// order must be topological, which the Dag type guarantees.
StagedTree dag_to_staged_tree(const Dag& dag, const SampleSpace& space);

// Minimal DAG of a staged tree with a dependence label on every edge.
std::pair<Aldag, ClassificationEvidence> staged_tree_to_aldag(const StagedTree& tree);

// Minimal DAG only (labels dropped).
Dag minimal_dag(const StagedTree& tree);

// Brute-force dependence class of the edge (from -> to) obtained by enumerating
// every context of the other parents. Throws std::invalid_argument if the edge
// is not in the minimal DAG of the tree.
DependenceLabel classify_edge_oracle(const StagedTree& tree, std::size_t from, std::size_t to);

// d-separation of A and B given C. Throws std::invalid_argument if the sets
// overlap or mention unknown vertices.
bool d_separated(const Dag& dag, std::span<const std::size_t> a, std::span<const std::size_t> b,
                 std::span<const std::size_t> c);

// Staged tree over (parents of target in the ALDAG, target). Parent depths are
// saturated; the target depth keeps the source staging. When the source is
// fitted the subtree carries the parent marginals and the source distributions
// of the target. Throws std::invalid_argument if the target staging depends on
// a variable outside the ALDAG parents.
StagedTree dependence_subtree(const StagedTree& tree, const Aldag& aldag, std::size_t target);

}  // namespace stagedtree
