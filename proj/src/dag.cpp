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

#include "stagedtree/dag.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stagedtree {

Dag::Dag(std::size_t p, const std::vector<Edge>& edges) : parents_(p) {
  for (auto [from, to] : edges) {
    if (to >= p || from >= to) {
      throw std::invalid_argument("edge (" + std::to_string(from) + ", " + std::to_string(to) +
                                  ") does not respect the vertex order");
    }
    auto& pa = parents_[to];
    if (std::find(pa.begin(), pa.end(), from) != pa.end()) {
      throw std::invalid_argument("duplicate edge");
    }
    pa.push_back(from);
  }
  for (auto& pa : parents_) std::sort(pa.begin(), pa.end());
}

Dag Dag::complete(std::size_t p) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) edges.emplace_back(j, i);
  }
  return Dag(p, edges);
}

bool Dag::has_edge(std::size_t from, std::size_t to) const {
  if (to >= parents_.size()) return false;
  const auto& pa = parents_[to];
  return std::binary_search(pa.begin(), pa.end(), from);
}

std::size_t Dag::edge_count() const {
  std::size_t n = 0;
  for (const auto& pa : parents_) n += pa.size();
  return n;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    for (auto j : parents_[i]) out.emplace_back(j, i);
  }
  return out;
}

Dag Dag::with_edge(std::size_t from, std::size_t to) const {
  auto e = edges();
  e.emplace_back(from, to);
  return Dag(size(), e);
}

Dag Dag::without_edge(std::size_t from, std::size_t to) const {
  auto e = edges();
  std::erase(e, Edge{from, to});
  return Dag(size(), e);
}

std::string_view to_string(DependenceLabel label) {
  switch (label) {
    case DependenceLabel::kTotal:
      return "total";
    case DependenceLabel::kContext:
      return "context";
    case DependenceLabel::kPartial:
      return "partial";
    case DependenceLabel::kContextPartial:
      return "context_partial";
    case DependenceLabel::kLocal:
      return "local";
  }
  return "total";
}

std::optional<DependenceLabel> parse_label(std::string_view text) {
  for (auto l : kAllLabels) {
    if (to_string(l) == text) return l;
  }
  return std::nullopt;
}

Aldag::Aldag(Dag dag, std::map<Edge, DependenceLabel> labels)
    : dag_(std::move(dag)), labels_(std::move(labels)) {
  const auto edges = dag_.edges();
  if (edges.size() != labels_.size()) {
    throw std::invalid_argument("every edge needs exactly one label");
  }
  for (const auto& e : edges) {
    if (!labels_.contains(e)) throw std::invalid_argument("edge without a label");
  }
}

DependenceLabel Aldag::label(std::size_t from, std::size_t to) const {
  auto it = labels_.find({from, to});
  if (it == labels_.end()) throw std::invalid_argument("no such edge");
  return it->second;
}

std::array<std::size_t, 5> Aldag::census() const {
  std::array<std::size_t, 5> out{};
  for (const auto& [e, l] : labels_) ++out[static_cast<std::size_t>(l)];
  return out;
}

}  // namespace stagedtree
