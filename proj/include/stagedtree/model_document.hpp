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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stagedtree/dag.hpp"
#include "stagedtree/learning.hpp"
#include "stagedtree/scoring.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

inline constexpr int kModelFormatVersion = 1;

// Persisted staged tree plus whatever the producing pipeline attached to it.
// Serialization is canonical: fixed key order, canonical stage ids, and
// shortest round-trip float formatting, so serialize(deserialize(s)) == s.
struct ModelDocument {
  int format_version = kModelFormatVersion;
  StagedTree tree;
  std::optional<Aldag> aldag;
  std::optional<ScoreReport> score;
  std::optional<SearchTrace> trace;
};

std::string serialize(const ModelDocument& doc);
// Throws ModelError on malformed or inconsistent documents.
ModelDocument deserialize(std::string_view text);

ModelDocument read_model(const std::filesystem::path& path);
void write_model(const std::filesystem::path& path, const ModelDocument& doc);

// Graph files: {"nodes": [...], "edges": [{"from": a, "to": b, "label": l}, ...]}.
// Labels are optional; when every edge has one the graph reads as an ALDAG.
struct GraphDocument {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::pair<std::string, std::string>, DependenceLabel> labels;
};

std::string serialize_graph(const Dag& dag, const std::vector<std::string>& names);
std::string serialize_graph(const Aldag& aldag, const std::vector<std::string>& names);
GraphDocument parse_graph(std::string_view text);
GraphDocument read_graph(const std::filesystem::path& path);

// Topological order of the graph nodes, preferring the position in `preferred`
// (then the node list) among ready nodes. Throws ModelError on a cycle.
std::vector<std::string> topological_names(const GraphDocument& graph,
                                           const std::vector<std::string>& preferred);
// DAG over the variables in `names` order. Throws ModelError if a node is
// unknown or an edge points backward.
Dag to_dag(const GraphDocument& graph, const std::vector<std::string>& names);
Aldag to_aldag(const GraphDocument& graph, const std::vector<std::string>& names);

// Sample space files: {"variables": [{"name": ..., "levels": [...]}, ...]}.
SampleSpace parse_space(std::string_view text);
SampleSpace read_space(const std::filesystem::path& path);
std::string serialize_space(const SampleSpace& space);

// Writes through a temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace stagedtree
