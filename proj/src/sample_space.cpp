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

#include "stagedtree/sample_space.hpp"

#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "stagedtree/errors.hpp"

namespace stagedtree {

const char* to_string(DataErrorCode code) {
  switch (code) {
    case DataErrorCode::kUnreadable:
      return "unreadable";
    case DataErrorCode::kEmptyAfterDrop:
      return "empty_after_drop";
    case DataErrorCode::kUnknownVariable:
      return "unknown_variable";
    case DataErrorCode::kUnknownLevel:
      return "unknown_level";
    case DataErrorCode::kMalformed:
      return "malformed";
  }
  return "unknown";
}

SampleSpace::SampleSpace(std::vector<Variable> variables) : variables_(std::move(variables)) {
  std::unordered_set<std::string> names;
  for (const auto& v : variables_) {
    if (!names.insert(v.name).second) {
      throw std::invalid_argument("duplicate variable name '" + v.name + "'");
    }
    if (v.levels.size() < 2) {
      throw std::invalid_argument("variable '" + v.name + "' needs at least two levels");
    }
    std::unordered_set<std::string> levels(v.levels.begin(), v.levels.end());
    if (levels.size() != v.levels.size()) {
      throw std::invalid_argument("duplicate level in variable '" + v.name + "'");
    }
  }
}

Index SampleSpace::prefix_size(std::size_t length) const {
  if (length > variables_.size()) {
    throw std::invalid_argument("prefix longer than the sample space");
  }
  Index n = 1;
  for (std::size_t i = 0; i < length; ++i) {
    const Index c = variables_[i].levels.size();
    if (n > std::numeric_limits<Index>::max() / c) {
      throw UnsupportedSize("sample space size overflows 64-bit indexing");
    }
    n *= c;
  }
  return n;
}

std::size_t SampleSpace::find(const std::string& name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown variable '" + name + "'");
}

bool SampleSpace::contains(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return true;
  }
  return false;
}

std::size_t SampleSpace::level_index(std::size_t i, const std::string& level) const {
  const auto& levels = variables_.at(i).levels;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k] == level) return k;
  }
  throw std::invalid_argument("unknown level '" + level + "' of variable '" +
                              variables_[i].name + "'");
}

std::vector<std::string> SampleSpace::names() const {
  std::vector<std::string> out;
  out.reserve(variables_.size());
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

SampleSpace SampleSpace::subspace(std::span<const std::size_t> vars) const {
  std::vector<Variable> out;
  out.reserve(vars.size());
  for (auto v : vars) out.push_back(variables_.at(v));
  return SampleSpace(std::move(out));
}

Index lex_index(const SampleSpace& space, std::span<const std::size_t> prefix) {
  if (prefix.size() > space.size()) {
    throw std::invalid_argument("prefix longer than the sample space");
  }
  Index idx = 0;
  for (std::size_t j = 0; j < prefix.size(); ++j) {
    const auto card = space.cardinality(j);
    if (prefix[j] >= card) {
      throw std::invalid_argument("level index out of range for variable '" +
                                  space.variable(j).name + "'");
    }
    idx = idx * card + prefix[j];
  }
  return idx;
}

std::vector<std::size_t> lex_unindex(const SampleSpace& space, std::size_t length,
                                     Index index) {
  if (index >= space.prefix_size(length)) {
    throw std::invalid_argument("index out of range for prefix space");
  }
  std::vector<std::size_t> out(length);
  for (std::size_t j = length; j-- > 0;) {
    const auto card = space.cardinality(j);
    out[j] = static_cast<std::size_t>(index % card);
    index /= card;
  }
  return out;
}

}  // namespace stagedtree
