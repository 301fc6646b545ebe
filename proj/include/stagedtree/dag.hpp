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

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace stagedtree {

// (from, to) with from < to; vertices are variable positions.
using Edge = std::pair<std::size_t, std::size_t>;

// DAG whose natural vertex order is topological: every edge points forward.
class Dag {
 public:
  explicit Dag(std::size_t p = 0) : parents_(p) {}
  // Throws std::invalid_argument on backward edges, self loops, out-of-range
  // vertices or duplicates.
  Dag(std::size_t p, const std::vector<Edge>& edges);

  static Dag complete(std::size_t p);

  std::size_t size() const { return parents_.size(); }
  // Sorted parent list of vertex i.
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  bool has_edge(std::size_t from, std::size_t to) const;
  std::size_t edge_count() const;
  // Edges sorted by (to, from).
  std::vector<Edge> edges() const;

  Dag with_edge(std::size_t from, std::size_t to) const;
  Dag without_edge(std::size_t from, std::size_t to) const;

  bool operator==(const Dag&) const = default;

 private:
  std::vector<std::vector<std::size_t>> parents_;
};

enum class DependenceLabel { kTotal, kContext, kPartial, kContextPartial, kLocal };

inline constexpr std::array<DependenceLabel, 5> kAllLabels = {
    DependenceLabel::kTotal, DependenceLabel::kContext, DependenceLabel::kPartial,
    DependenceLabel::kContextPartial, DependenceLabel::kLocal};

std::string_view to_string(DependenceLabel label);
std::optional<DependenceLabel> parse_label(std::string_view text);

// DAG plus a dependence label on every edge.
class Aldag {
 public:
  Aldag() = default;
  // Throws std::invalid_argument unless the label keys are exactly the edges.
  Aldag(Dag dag, std::map<Edge, DependenceLabel> labels);

  const Dag& dag() const { return dag_; }
  const std::map<Edge, DependenceLabel>& labels() const { return labels_; }
  DependenceLabel label(std::size_t from, std::size_t to) const;

  // Edge counts ordered (total, context, partial, context_partial, local).
  std::array<std::size_t, 5> census() const;

  bool operator==(const Aldag&) const = default;

 private:
  Dag dag_;
  std::map<Edge, DependenceLabel> labels_;
};

}  // namespace stagedtree
