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
#include <span>
#include <vector>

#include "stagedtree/sample_space.hpp"

namespace stagedtree {

using Count = std::uint64_t;

// Observations reduced to cell counts over a sample space.
class Dataset {
 public:
  Dataset() = default;
  // Cells with zero count are dropped. Throws std::invalid_argument on an index
  // outside the space.
  Dataset(SampleSpace space, std::map<Index, Count> counts);

  // Builds counts from rows of level indices.
  static Dataset from_rows(SampleSpace space,
                           std::span<const std::vector<std::size_t>> rows);

  const SampleSpace& space() const { return space_; }
  const std::map<Index, Count>& counts() const { return counts_; }
  Count n() const { return n_; }
  Count count(Index cell) const;

  // Counts of the cells (context over the first d variables, level of variable d),
  // laid out as context * |X_d| + level. Dense, of size prefix_size(d + 1).
  std::vector<double> depth_counts(std::size_t depth) const;

  // Same data under a different variable order; order[k] is the old position of
  // the new k-th variable.
  Dataset permuted(std::span<const std::size_t> order) const;

  bool operator==(const Dataset&) const = default;

 private:
  SampleSpace space_;
  std::map<Index, Count> counts_;
  Count n_ = 0;
};

}  // namespace stagedtree
