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

#include "stagedtree/dot.hpp"

#include <array>
#include <sstream>
#include <stdexcept>

namespace stagedtree {

namespace {

// Graphviz x11 names; the palette cycles when a depth has more stages.
constexpr std::array<const char*, 16> kPalette = {
    "gold",        "lightblue",  "palegreen",  "salmon",     "plum",     "orange",
    "lightpink",   "khaki",      "turquoise",  "tan",        "lightcyan", "yellowgreen",
    "lightsalmon", "thistle",    "wheat",      "lightcoral"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

const char* label_color(DependenceLabel label) {
  switch (label) {
    case DependenceLabel::kTotal: return "black";
    case DependenceLabel::kContext: return "red";
    case DependenceLabel::kPartial: return "blue";
    case DependenceLabel::kContextPartial: return "violet";
    case DependenceLabel::kLocal: return "green";
  }
  return "black";
}

std::string aldag_to_dot(const Aldag& aldag, const std::vector<std::string>& names) {
  const Dag& dag = aldag.dag();
  if (names.size() != dag.size()) throw std::invalid_argument("one name per vertex required");
  std::ostringstream out;
  out << "digraph aldag {\n";
  for (std::size_t i = 0; i < dag.size(); ++i) {
    out << "  n" << i << " [label=\"" << escape(names[i]) << "\"];\n";
  }
  for (const auto& e : dag.edges()) {
    const auto l = aldag.labels().at(e);
    out << "  n" << e.first << " -> n" << e.second << " [color=" << label_color(l)
        << ", label=\"" << to_string(l) << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string staged_tree_to_dot(const StagedTree& input) {
  const StagedTree tree = input.without_fit().canonical();
  const auto& space = tree.space();
  const std::size_t p = space.size();
  std::ostringstream out;
  out << "digraph staged_tree {\n  rankdir=LR;\n  node [shape=circle, style=filled, label=\"\"];\n";
  // Vertex ids count along depths in lexicographic order, v0 being the root.
  std::vector<Index> offset(p + 1, 0);
  for (std::size_t d = 1; d <= p; ++d) offset[d] = offset[d - 1] + space.prefix_size(d - 1);
  for (std::size_t d = 0; d <= p; ++d) {
    const Index count = space.prefix_size(d);
    for (Index v = 0; v < count; ++v) {
      out << "  v" << offset[d] + v << " [";
      if (d == p) {
        out << "fillcolor=white";
      } else {
        const Symbol s = tree.stage_of(d, v);
        out << "fillcolor=" << kPalette[s % kPalette.size()] << ", stage=\"" << d << ':' << s
            << '"';
      }
      out << "];\n";
    }
  }
  for (std::size_t d = 0; d < p; ++d) {
    const auto& var = space.variable(d);
    const Index count = space.prefix_size(d);
    for (Index v = 0; v < count; ++v) {
      for (std::size_t l = 0; l < var.levels.size(); ++l) {
        out << "  v" << offset[d] + v << " -> v" << offset[d + 1] + v * var.levels.size() + l
            << " [label=\"" << escape(var.levels[l]) << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace stagedtree
