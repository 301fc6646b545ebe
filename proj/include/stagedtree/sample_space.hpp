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
#include <span>
#include <string>
#include <vector>

namespace stagedtree {

using Index = std::uint64_t;

struct Variable {
  std::string name;
  std::vector<std::string> levels;

  bool operator==(const Variable&) const = default;
};

// Ordered categorical variables. The variable order fixes the lexicographic
// indexing of every prefix space X_0 x ... x X_{i-1}; the last listed coordinate
// varies fastest.
class SampleSpace {
 public:
  SampleSpace() = default;
  // Throws std::invalid_argument on duplicate names, duplicate levels or a
  // variable with fewer than two levels.
  explicit SampleSpace(std::vector<Variable> variables);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(std::size_t i) const { return variables_.at(i); }
  std::size_t cardinality(std::size_t i) const { return variables_.at(i).levels.size(); }

  // Number of cells of the prefix space over the first `length` variables.
  // Throws UnsupportedSize if the product overflows 64 bits.
  Index prefix_size(std::size_t length) const;
  Index total_size() const { return prefix_size(size()); }

  // Position of a variable by name; throws std::invalid_argument if unknown.
  std::size_t find(const std::string& name) const;
  bool contains(const std::string& name) const;
  // Position of a level within variable i; throws std::invalid_argument.
  std::size_t level_index(std::size_t i, const std::string& level) const;

  std::vector<std::string> names() const;

  // Space over the listed variables, in the listed order.
  SampleSpace subspace(std::span<const std::size_t> vars) const;

  bool operator==(const SampleSpace&) const = default;

 private:
  std::vector<Variable> variables_;
};

// Lexicographic position of a prefix configuration (last coordinate fastest).
// Throws std::invalid_argument if the prefix is too long or a level is out of range.
Index lex_index(const SampleSpace& space, std::span<const std::size_t> prefix);

// Inverse of lex_index for a prefix of the given length.
std::vector<std::size_t> lex_unindex(const SampleSpace& space, std::size_t length,
                                     Index index);

}  // namespace stagedtree
