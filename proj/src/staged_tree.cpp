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

#include "stagedtree/staged_tree.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "stagedtree/errors.hpp"

namespace stagedtree {

namespace {

Index checked_vertices(const SampleSpace& space, std::size_t depth) {
  const Index n = space.prefix_size(depth);
  if (n > kMaxVerticesPerDepth) {
    throw UnsupportedSize("depth " + std::to_string(depth) + " has " + std::to_string(n) +
                          " vertices, above the supported maximum");
  }
  return n;
}

}  // namespace

std::vector<Symbol> canonicalize(std::span<const Symbol> symbols) {
  std::unordered_map<Symbol, Symbol> remap;
  std::vector<Symbol> out;
  out.reserve(symbols.size());
  for (auto s : symbols) {
    auto [it, inserted] = remap.try_emplace(s, static_cast<Symbol>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

std::size_t distinct_count(std::span<const Symbol> symbols) {
  std::unordered_set<Symbol> seen(symbols.begin(), symbols.end());
  return seen.size();
}

StagedTree::StagedTree(SampleSpace space, std::vector<std::vector<Symbol>> stage_vectors)
    : space_(std::move(space)), stage_vectors_(std::move(stage_vectors)) {
  if (space_.size() == 0) throw std::invalid_argument("staged tree over an empty space");
  if (stage_vectors_.size() + 1 != space_.size()) {
    throw std::invalid_argument("expected " + std::to_string(space_.size() - 1) +
                                " stage vectors, got " +
                                std::to_string(stage_vectors_.size()));
  }
  for (std::size_t d = 1; d < space_.size(); ++d) {
    if (stage_vectors_[d - 1].size() != checked_vertices(space_, d)) {
      throw std::invalid_argument("stage vector at depth " + std::to_string(d) +
                                  " has the wrong length");
    }
  }
}

StagedTree StagedTree::saturated(const SampleSpace& space) {
  std::vector<std::vector<Symbol>> sv;
  for (std::size_t d = 1; d < space.size(); ++d) {
    std::vector<Symbol> s(checked_vertices(space, d));
    std::iota(s.begin(), s.end(), Symbol{0});
    sv.push_back(std::move(s));
  }
  return StagedTree(space, std::move(sv));
}

StagedTree StagedTree::independence(const SampleSpace& space) {
  std::vector<std::vector<Symbol>> sv;
  for (std::size_t d = 1; d < space.size(); ++d) {
    sv.emplace_back(checked_vertices(space, d), Symbol{0});
  }
  return StagedTree(space, std::move(sv));
}

std::span<const Symbol> StagedTree::stages(std::size_t depth) const {
  if (depth == 0 || depth >= space_.size()) {
    throw std::invalid_argument("stage vector depth out of range");
  }
  return stage_vectors_[depth - 1];
}

Symbol StagedTree::stage_of(std::size_t depth, Index vertex) const {
  if (depth == 0) return 0;
  return stages(depth)[vertex];
}

std::size_t StagedTree::stage_count(std::size_t depth) const {
  if (depth == 0) return 1;
  return distinct_count(stages(depth));
}

StagedTree StagedTree::with_stages(std::size_t depth, std::vector<Symbol> symbols) const {
  auto sv = stage_vectors_;
  if (depth == 0 || depth >= space_.size()) {
    throw std::invalid_argument("stage vector depth out of range");
  }
  sv[depth - 1] = std::move(symbols);
  return StagedTree(space_, std::move(sv));
}

const StageDistributions& StagedTree::fitted() const {
  if (!fit_) throw StateError("staged tree has no fitted distributions");
  return *fit_;
}

StagedTree StagedTree::with_fit(StageDistributions fit) const {
  if (fit.distributions.size() != space_.size()) {
    throw std::invalid_argument("fitted distributions must cover every depth");
  }
  for (std::size_t d = 0; d < space_.size(); ++d) {
    std::unordered_set<Symbol> present;
    if (d == 0) {
      present.insert(0);
    } else {
      present.insert(stage_vectors_[d - 1].begin(), stage_vectors_[d - 1].end());
    }
    const auto& dists = fit.distributions[d];
    if (dists.size() != present.size()) {
      throw std::invalid_argument("fitted stages at depth " + std::to_string(d) +
                                  " do not match the staging");
    }
    for (const auto& [sym, probs] : dists) {
      if (!present.contains(sym)) {
        throw std::invalid_argument("fitted distribution for an unknown stage");
      }
      if (probs.size() != space_.cardinality(d)) {
        throw std::invalid_argument("fitted distribution has the wrong length");
      }
      double total = 0.0;
      for (double q : probs) {
        if (!(q >= 0.0 && q <= 1.0)) {
          throw std::invalid_argument("fitted probability outside [0, 1]");
        }
        total += q;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("fitted distribution does not sum to 1");
      }
    }
  }
  StagedTree out = *this;
  out.fit_ = std::move(fit);
  return out;
}

StagedTree StagedTree::without_fit() const {
  StagedTree out = *this;
  out.fit_.reset();
  return out;
}

std::span<const double> StagedTree::distribution(std::size_t depth, Index vertex) const {
  const auto& dists = fitted().distributions.at(depth);
  return dists.at(stage_of(depth, vertex));
}

StagedTree StagedTree::canonical() const {
  StagedTree out = *this;
  for (std::size_t d = 1; d < space_.size(); ++d) {
    const auto& old = stage_vectors_[d - 1];
    auto fresh = canonicalize(old);
    if (fit_) {
      std::map<Symbol, std::vector<double>> moved;
      for (std::size_t v = 0; v < old.size(); ++v) {
        if (!moved.contains(fresh[v])) moved[fresh[v]] = fit_->distributions[d].at(old[v]);
      }
      out.fit_->distributions[d] = std::move(moved);
    }
    out.stage_vectors_[d - 1] = std::move(fresh);
  }
  return out;
}

bool staging_refines(const StagedTree& fine, const StagedTree& coarse) {
  if (!(fine.space() == coarse.space())) {
    throw std::invalid_argument("staging_refines needs trees over the same sample space");
  }
  for (std::size_t d = 1; d < fine.depth_count(); ++d) {
    auto f = fine.stages(d);
    auto c = coarse.stages(d);
    std::unordered_map<Symbol, Symbol> image;
    for (std::size_t v = 0; v < f.size(); ++v) {
      auto [it, inserted] = image.try_emplace(f[v], c[v]);
      if (!inserted && it->second != c[v]) return false;
    }
  }
  return true;
}

}  // namespace stagedtree
