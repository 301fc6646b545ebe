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

#include <string>
#include <vector>

#include "stagedtree/dag.hpp"
#include "stagedtree/staged_tree.hpp"

namespace stagedtree {

// Edge colour per dependence label, as used in the DOT output.
const char* label_color(DependenceLabel label);

// Graphviz rendering of an ALDAG. Every edge carries `color` and `label`
// attributes naming its dependence type.
std::string aldag_to_dot(const Aldag& aldag, const std::vector<std::string>& names);

// Graphviz rendering of a staged tree: one node per vertex, filled by stage
// (leaves white), edges labelled with the level they follow.
std::string staged_tree_to_dot(const StagedTree& tree);

}  // namespace stagedtree
