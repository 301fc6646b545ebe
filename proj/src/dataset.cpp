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

#include "stagedtree/dataset.hpp"

#include <stdexcept>

#include "stagedtree/errors.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

Dataset::Dataset(SampleSpace space, std::map<Index, Count> counts)
    : space_(std::move(space)) {
  const Index total = space_.total_size();
  for (auto [cell, c] : counts) {
    if (cell >= total) throw std::invalid_argument("cell index outside the sample space");
    if (c == 0) continue;
    counts_.emplace(cell, c);
    n_ += c;
  }
}

Dataset Dataset::from_rows(SampleSpace space, std::span<const std::vector<std::size_t>> rows) {
  std::map<Index, Count> counts;
  for (const auto& row : rows) {
    if (row.size() != space.size()) throw std::invalid_argument("row has the wrong arity");
    ++counts[lex_index(space, row)];
  }
  return Dataset(std::move(space), std::move(counts));
}

Count Dataset::count(Index cell) const {
  auto it = counts_.find(cell);
  return it == counts_.end() ? 0 : it->second;
}

std::vector<double> Dataset::depth_counts(std::size_t depth) const {
  if (depth >= space_.size()) throw std::invalid_argument("depth out of range");
  const Index cells = space_.prefix_size(depth + 1);
  if (cells > kMaxVerticesPerDepth * 64) {
    throw UnsupportedSize("count table too large for dense storage");
  }
  const Index stride = space_.total_size() / cells;
  std::vector<double> out(cells, 0.0);
  for (auto [cell, c] : counts_) out[cell / stride] += static_cast<double>(c);
  return out;
}

Dataset Dataset::permuted(std::span<const std::size_t> order) const {
  if (order.size() != space_.size()) throw std::invalid_argument("order has the wrong length");
  SampleSpace target = space_.subspace(order);
  if (target.size() != space_.size()) throw std::invalid_argument("order is not a permutation");
  std::map<Index, Count> out;
  std::vector<std::size_t> coords(space_.size());
  for (auto [cell, c] : counts_) {
    auto old = lex_unindex(space_, space_.size(), cell);
    for (std::size_t k = 0; k < order.size(); ++k) coords[k] = old[order[k]];
    out[lex_index(target, coords)] += c;
  }
  return Dataset(std::move(target), std::move(out));
}

}  // namespace stagedtree
