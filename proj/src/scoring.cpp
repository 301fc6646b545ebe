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

#include "stagedtree/scoring.hpp"

#include <cmath>
#include <stdexcept>

namespace stagedtree {

namespace {

void check_inputs(const StagedTree& tree, const Dataset& data) {
  if (!(tree.space() == data.space())) {
    throw std::invalid_argument("tree and dataset have different sample spaces");
  }
  if (data.n() == 0) throw std::invalid_argument("dataset has no observations");
}

}  // namespace

ScoreReport make_report(double log_likelihood, std::size_t df, Count n) {
  ScoreReport r;
  r.log_likelihood = log_likelihood;
  r.df = df;
  r.n = n;
  r.bic = -2.0 * log_likelihood + static_cast<double>(df) * std::log(static_cast<double>(n));
  r.aic = -2.0 * log_likelihood + 2.0 * static_cast<double>(df);
  return r;
}

double criterion(const ScoreReport& report, ScoreKind kind) {
  return kind == ScoreKind::kBic ? report.bic : report.aic;
}

double penalty_per_parameter(ScoreKind kind, Count n) {
  return kind == ScoreKind::kBic ? std::log(static_cast<double>(n)) : 2.0;
}

std::map<Symbol, std::vector<double>> stage_counts(const StagedTree& tree,
                                                   const Dataset& data, std::size_t depth) {
  const std::size_t m = tree.space().cardinality(depth);
  const auto cells = data.depth_counts(depth);
  std::map<Symbol, std::vector<double>> out;
  const Index vertices = cells.size() / m;
  for (Index v = 0; v < vertices; ++v) {
    auto& acc = out[tree.stage_of(depth, v)];
    if (acc.empty()) acc.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) acc[k] += cells[v * m + k];
  }
  return out;
}

double multinomial_log_likelihood(std::span<const double> counts) {
  double total = 0.0;
  double acc = 0.0;
  for (double c : counts) {
    if (c > 0.0) acc += c * std::log(c);
    total += c;
  }
  if (total > 0.0) acc -= total * std::log(total);
  return acc;
}

StagedTree fit(const StagedTree& tree, const Dataset& data, const FitConfig& cfg) {
  check_inputs(tree, data);
  if (!(cfg.smoothing >= 0.0)) throw std::invalid_argument("smoothing must be nonnegative");
  StageDistributions fit;
  fit.distributions.resize(tree.depth_count());
  for (std::size_t d = 0; d < tree.depth_count(); ++d) {
    const double m = static_cast<double>(tree.space().cardinality(d));
    for (auto& [sym, counts] : stage_counts(tree, data, d)) {
      double total = 0.0;
      for (double c : counts) total += c;
      const double denom = total + cfg.smoothing * m;
      std::vector<double> probs(counts.size());
      for (std::size_t k = 0; k < counts.size(); ++k) {
        probs[k] = denom > 0.0 ? (counts[k] + cfg.smoothing) / denom : 1.0 / m;
      }
      fit.distributions[d].emplace(sym, std::move(probs));
    }
  }
  return tree.with_fit(std::move(fit));
}

double joint_probability(const StagedTree& tree, std::span<const std::size_t> x) {
  const auto& space = tree.space();
  if (x.size() != space.size()) throw std::invalid_argument("configuration has the wrong arity");
  double prob = 1.0;
  Index vertex = 0;
  for (std::size_t d = 0; d < space.size(); ++d) {
    if (x[d] >= space.cardinality(d)) throw std::invalid_argument("level index out of range");
    prob *= tree.distribution(d, vertex)[x[d]];
    vertex = vertex * space.cardinality(d) + x[d];
  }
  return prob;
}

std::size_t degrees_of_freedom(const StagedTree& tree) {
  std::size_t df = 0;
  for (std::size_t d = 0; d < tree.depth_count(); ++d) {
    df += tree.stage_count(d) * (tree.space().cardinality(d) - 1);
  }
  return df;
}

ScoreReport score(const StagedTree& input, const Dataset& data, const FitConfig& cfg) {
  // Canonical symbols fix the summation order, so renamed stagings score
  // bit-identically.
  const StagedTree tree = input.without_fit().canonical();
  const StagedTree fitted = fit(tree, data, cfg);
  double loglik = 0.0;
  for (std::size_t d = 0; d < tree.depth_count(); ++d) {
    const auto& dists = fitted.fitted().distributions[d];
    for (const auto& [sym, counts] : stage_counts(tree, data, d)) {
      const auto& probs = dists.at(sym);
      for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0.0) loglik += counts[k] * std::log(probs[k]);
      }
    }
  }
  return make_report(loglik, degrees_of_freedom(tree), data.n());
}

}  // namespace stagedtree
