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

#include "stagedtree/learning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "stagedtree/errors.hpp"
#include "stagedtree/reshape.hpp"

namespace stagedtree {

std::string_view to_string(SearchAlgorithm algo) {
  switch (algo) {
    case SearchAlgorithm::kHc:
      return "hc";
    case SearchAlgorithm::kBhc:
      return "bhc";
    case SearchAlgorithm::kCsbhc:
      return "csbhc";
  }
  return "hc";
}

std::optional<SearchAlgorithm> parse_algorithm(std::string_view text) {
  for (auto a : {SearchAlgorithm::kHc, SearchAlgorithm::kBhc, SearchAlgorithm::kCsbhc}) {
    if (to_string(a) == text) return a;
  }
  return std::nullopt;
}

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::kJoin:
      return "join";
    case MoveKind::kSplit:
      return "split";
    case MoveKind::kColumnJoin:
      return "column-join";
  }
  return "join";
}

std::optional<MoveKind> parse_move_kind(std::string_view text) {
  for (auto k : {MoveKind::kJoin, MoveKind::kSplit, MoveKind::kColumnJoin}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

namespace {

// Mutable staging of one depth with per-stage count aggregates, so candidate
// moves can be scored from local differences.
class LevelState {
 public:
  LevelState(const StagedTree& tree, const Dataset& data, std::size_t depth, double penalty)
      : m_(tree.space().cardinality(depth)),
        penalty_(penalty),
        counts_(data.depth_counts(depth)),
        stage_of_(canonicalize(tree.stages(depth))) {
    rebuild();
  }

  std::size_t stage_count() const { return sizes_.size(); }
  Index vertex_count() const { return stage_of_.size(); }
  Symbol stage(Index v) const { return stage_of_[v]; }
  std::size_t stage_size(Symbol s) const { return sizes_[s]; }
  const std::vector<Symbol>& stages() const { return stage_of_; }

  // Criterion change when the listed stages become one stage.
  double merge_delta(std::span<const Symbol> group) const {
    std::vector<double> sum(m_, 0.0);
    double parts = 0.0;
    for (auto s : group) {
      for (std::size_t k = 0; k < m_; ++k) sum[k] += totals_[s * m_ + k];
      parts += loglik_[s];
    }
    const double dll = multinomial_log_likelihood(sum) - parts;
    const double ddf = -static_cast<double>((group.size() - 1) * (m_ - 1));
    return -2.0 * dll + penalty_ * ddf;
  }

  void merge(std::span<const Symbol> group) {
    const Symbol target = *std::min_element(group.begin(), group.end());
    std::vector<bool> in_group(stage_count(), false);
    for (auto s : group) in_group[s] = true;
    for (auto& s : stage_of_) {
      if (in_group[s]) s = target;
    }
    stage_of_ = canonicalize(stage_of_);
    rebuild();
  }

  // Criterion change when vertex v moves to stage `to`; to == stage_count()
  // denotes a fresh singleton stage.
  double move_delta(Index v, Symbol to) const {
    const Symbol from = stage_of_[v];
    const double* cv = &counts_[v * m_];
    std::vector<double> rest(m_);
    for (std::size_t k = 0; k < m_; ++k) rest[k] = totals_[from * m_ + k] - cv[k];
    double dll = (sizes_[from] > 1 ? multinomial_log_likelihood(rest) : 0.0) - loglik_[from];
    double ddf = sizes_[from] > 1 ? 0.0 : -1.0;
    if (to == stage_count()) {
      dll += multinomial_log_likelihood(std::span<const double>(cv, m_));
      ddf += 1.0;
    } else {
      std::vector<double> grown(m_);
      for (std::size_t k = 0; k < m_; ++k) grown[k] = totals_[to * m_ + k] + cv[k];
      dll += multinomial_log_likelihood(grown) - loglik_[to];
    }
    return -2.0 * dll + penalty_ * ddf * static_cast<double>(m_ - 1);
  }

  void move(Index v, Symbol to) {
    stage_of_[v] = to == stage_count() ? static_cast<Symbol>(stage_count()) : to;
    stage_of_ = canonicalize(stage_of_);
    rebuild();
  }

 private:
  void rebuild() {
    Symbol top = 0;
    for (auto s : stage_of_) top = std::max(top, s);
    const std::size_t stages = stage_of_.empty() ? 0 : static_cast<std::size_t>(top) + 1;
    totals_.assign(stages * m_, 0.0);
    sizes_.assign(stages, 0);
    for (Index v = 0; v < stage_of_.size(); ++v) {
      const auto s = stage_of_[v];
      ++sizes_[s];
      for (std::size_t k = 0; k < m_; ++k) totals_[s * m_ + k] += counts_[v * m_ + k];
    }
    loglik_.assign(stages, 0.0);
    for (std::size_t s = 0; s < stages; ++s) {
      loglik_[s] = multinomial_log_likelihood(std::span<const double>(&totals_[s * m_], m_));
    }
  }

  std::size_t m_;
  double penalty_;
  std::vector<double> counts_;  // vertex * m + level
  std::vector<Symbol> stage_of_;
  std::vector<double> totals_;  // stage * m + level
  std::vector<std::size_t> sizes_;
  std::vector<double> loglik_;
};

std::vector<std::size_t> search_depths(const StagedTree& tree, const SearchConfig& cfg) {
  std::vector<std::size_t> depths;
  if (cfg.scope) {
    depths = *cfg.scope;
    for (auto d : depths) {
      if (d == 0 || d >= tree.depth_count()) {
        throw std::invalid_argument("search scope depth " + std::to_string(d) + " out of range");
      }
    }
    std::sort(depths.begin(), depths.end());
    depths.erase(std::unique(depths.begin(), depths.end()), depths.end());
  } else {
    for (std::size_t d = 1; d < tree.depth_count(); ++d) depths.push_back(d);
  }
  return depths;
}

void check_start(const StagedTree& start, const Dataset& data) {
  if (!(start.space() == data.space())) {
    throw std::invalid_argument("start tree and dataset have different sample spaces");
  }
  if (data.n() == 0) throw std::invalid_argument("dataset has no observations");
}

// Drives one greedy search: `propose` lists the candidates of a depth as
// (delta evaluator, applier, step description) and the loop applies the best
// strictly improving one until none is left.
struct Candidate {
  std::vector<Symbol> stages;
  std::optional<Index> vertex;
  Symbol target = 0;
  MoveKind kind = MoveKind::kJoin;
};

template <typename Propose>
SearchResult greedy(const StagedTree& start, const Dataset& data, const SearchConfig& cfg,
                    Propose&& propose) {
  check_start(start, data);
  const double penalty = penalty_per_parameter(cfg.score, data.n());
  StagedTree tree = start.without_fit().canonical();
  double current = criterion(score(tree, data), cfg.score);
  SearchTrace trace;
  std::vector<double> deltas;

  for (auto depth : search_depths(tree, cfg)) {
    LevelState level(tree, data, depth, penalty);
    std::size_t accepted = 0;
    while (!cfg.max_iter || accepted < *cfg.max_iter) {
      const std::vector<Candidate> candidates = propose(level, depth);
      evaluate_candidates(
          cfg.policy, candidates.size(),
          [&](std::size_t k) {
            const auto& c = candidates[k];
            return c.vertex ? level.move_delta(*c.vertex, c.target) : level.merge_delta(c.stages);
          },
          deltas);
      const auto best = select_best(deltas, kImprovementThreshold, cfg.seed);
      if (!best) break;
      const auto& c = candidates[*best];
      SearchStep step;
      step.depth = depth;
      step.kind = c.kind;
      step.stages = c.stages;
      step.vertex = c.vertex;
      step.score_before = current;
      current += deltas[*best];
      step.score_after = current;
      trace.steps.push_back(std::move(step));
      if (c.vertex) {
        level.move(*c.vertex, c.target);
      } else {
        level.merge(c.stages);
      }
      ++accepted;
    }
    tree = tree.with_stages(depth, level.stages());
  }

  SearchResult result;
  result.tree = fit(tree, data);
  result.score = criterion(score(tree, data), cfg.score);
  result.trace = std::move(trace);
  return result;
}

// Vertex-index columns of every stage matrix of a depth, in the order the
// context-specific search visits them (last variable first).
std::vector<std::vector<Index>> stage_matrix_columns(const SampleSpace& space, std::size_t depth) {
  std::vector<Index> a(space.prefix_size(depth));
  std::iota(a.begin(), a.end(), Index{0});
  std::vector<std::vector<Index>> columns;
  for (std::size_t j = depth; j-- > 0;) {
    const auto mat = reshape_mat(std::move(a), space.cardinality(j));
    for (std::size_t k = 0; k < mat.cols(); ++k) {
      auto col = mat.column(k);
      columns.emplace_back(col.begin(), col.end());
    }
    a = vec_transpose(mat);
  }
  return columns;
}

}  // namespace

SearchResult bhc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg) {
  return greedy(start, data, cfg, [](const LevelState& level, std::size_t) {
    std::vector<Candidate> out;
    const auto s = static_cast<Symbol>(level.stage_count());
    out.reserve(static_cast<std::size_t>(s) * (s > 0 ? s - 1 : 0) / 2);
    for (Symbol a = 0; a < s; ++a) {
      for (Symbol b = a + 1; b < s; ++b) out.push_back({{a, b}, std::nullopt, 0, MoveKind::kJoin});
    }
    return out;
  });
}

SearchResult hc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg) {
  return greedy(start, data, cfg, [](const LevelState& level, std::size_t) {
    std::vector<Candidate> out;
    const auto s = static_cast<Symbol>(level.stage_count());
    for (Index v = 0; v < level.vertex_count(); ++v) {
      const Symbol from = level.stage(v);
      for (Symbol to = 0; to <= s; ++to) {
        if (to == from) continue;
        if (to == s && level.stage_size(from) == 1) continue;
        const MoveKind kind = to == s ? MoveKind::kSplit : MoveKind::kJoin;
        std::vector<Symbol> touched{from};
        if (to != s) touched.push_back(to);
        out.push_back({std::move(touched), v, to, kind});
      }
    }
    return out;
  });
}

SearchResult csbhc(const StagedTree& start, const Dataset& data, const SearchConfig& cfg) {
  std::map<std::size_t, std::vector<std::vector<Index>>> columns;
  for (std::size_t d = 1; d < start.depth_count(); ++d) {
    columns.emplace(d, stage_matrix_columns(start.space(), d));
  }
  return greedy(start, data, cfg, [&columns](const LevelState& level, std::size_t depth) {
    std::vector<Candidate> out;
    for (const auto& col : columns.at(depth)) {
      std::vector<Symbol> group;
      for (auto v : col) group.push_back(level.stage(v));
      std::sort(group.begin(), group.end());
      group.erase(std::unique(group.begin(), group.end()), group.end());
      if (group.size() < 2) continue;
      out.push_back({std::move(group), std::nullopt, 0, MoveKind::kColumnJoin});
    }
    return out;
  });
}

SearchResult run_search(SearchAlgorithm algo, const StagedTree& start, const Dataset& data,
                        const SearchConfig& cfg) {
  switch (algo) {
    case SearchAlgorithm::kHc:
      return hc(start, data, cfg);
    case SearchAlgorithm::kBhc:
      return bhc(start, data, cfg);
    case SearchAlgorithm::kCsbhc:
      return csbhc(start, data, cfg);
  }
  throw std::invalid_argument("unknown search algorithm");
}

StagedTree default_start(SearchAlgorithm algo, const SampleSpace& space) {
  return algo == SearchAlgorithm::kHc ? StagedTree::independence(space)
                                      : StagedTree::saturated(space);
}

RefineResult refine_dag(const Dag& dag, const Dataset& data, SearchAlgorithm algo,
                        const SearchConfig& cfg) {
  if (algo == SearchAlgorithm::kHc) {
    throw std::invalid_argument("DAG refinement needs a backward search (bhc or csbhc)");
  }
  RefineResult out;
  out.start = dag_to_staged_tree(dag, data.space());
  out.start_report = score(out.start, data);
  out.search = run_search(algo, out.start, data, cfg);
  auto [aldag, evidence] = staged_tree_to_aldag(out.search.tree);
  out.aldag = std::move(aldag);
  out.evidence = std::move(evidence);
  out.report = score(out.search.tree, data);
  return out;
}

namespace {

// Decomposable family criterion with a cache keyed by (child, parents).
class FamilyScorer {
 public:
  FamilyScorer(const Dataset& data, ScoreKind kind)
      : space_(data.space()), penalty_(penalty_per_parameter(kind, data.n())) {
    for (auto [cell, c] : data.counts()) {
      coords_.push_back(lex_unindex(space_, space_.size(), cell));
      weights_.push_back(static_cast<double>(c));
    }
  }

  double family(std::size_t child, const std::vector<std::size_t>& parents) {
    auto key = std::pair(child, parents);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const std::size_t m = space_.cardinality(child);
    double configs = 1.0;
    for (auto u : parents) configs *= static_cast<double>(space_.cardinality(u));
    double value = std::numeric_limits<double>::infinity();
    if (configs * static_cast<double>(m) <= static_cast<double>(Index{1} << 24)) {
      const auto n_configs = static_cast<std::size_t>(configs);
      std::vector<double> table(n_configs * m, 0.0);
      for (std::size_t r = 0; r < coords_.size(); ++r) {
        std::size_t idx = 0;
        for (auto u : parents) idx = idx * space_.cardinality(u) + coords_[r][u];
        table[idx * m + coords_[r][child]] += weights_[r];
      }
      double ll = 0.0;
      for (std::size_t c = 0; c < n_configs; ++c) {
        ll += multinomial_log_likelihood(std::span<const double>(&table[c * m], m));
      }
      value = -2.0 * ll + penalty_ * configs * static_cast<double>(m - 1);
    }
    cache_.emplace(std::move(key), value);
    return value;
  }

 private:
  const SampleSpace& space_;
  double penalty_;
  std::vector<std::vector<std::size_t>> coords_;
  std::vector<double> weights_;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, double> cache_;
};

std::vector<std::size_t> sorted_parents(const std::vector<std::vector<bool>>& parent,
                                        std::size_t v) {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < parent.size(); ++u) {
    if (parent[v][u]) out.push_back(u);
  }
  return out;
}

// Whether `to` is reachable from `from` along directed edges.
bool reaches(const std::vector<std::vector<bool>>& parent, std::size_t from, std::size_t to) {
  const std::size_t p = parent.size();
  std::vector<bool> seen(p, false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (std::size_t w = 0; w < p; ++w) {
      if (parent[w][u] && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

double dag_score(const Dag& dag, const Dataset& data, ScoreKind kind) {
  if (dag.size() != data.space().size()) throw std::invalid_argument("DAG and data differ in size");
  FamilyScorer scorer(data, kind);
  double total = 0.0;
  for (std::size_t v = 0; v < dag.size(); ++v) total += scorer.family(v, dag.parents(v));
  return total;
}

LearnedDag learn_dag(const Dataset& data, const LearnDagConfig& cfg) {
  const std::size_t p = data.space().size();
  if (data.n() == 0) throw std::invalid_argument("dataset has no observations");
  if (cfg.sink && *cfg.sink >= p) throw std::invalid_argument("sink variable out of range");
  FamilyScorer scorer(data, cfg.score);
  // parent[v][u]: edge u -> v
  std::vector<std::vector<bool>> parent(p, std::vector<bool>(p, false));
  std::vector<double> family(p);
  for (std::size_t v = 0; v < p; ++v) family[v] = scorer.family(v, {});

  enum class Op { kAdd, kDelete, kReverse };
  struct Move {
    Op op;
    std::size_t from, to;
  };
  while (true) {
    std::vector<Move> moves;
    std::vector<double> deltas;
    for (std::size_t v = 0; v < p; ++v) {
      for (std::size_t u = 0; u < p; ++u) {
        if (u == v) continue;
        if (parent[v][u]) {
          auto pa = sorted_parents(parent, v);
          std::erase(pa, u);
          const double drop = scorer.family(v, pa) - family[v];
          moves.push_back({Op::kDelete, u, v});
          deltas.push_back(drop);
          if (!cfg.respect_order && cfg.sink != v) {
            parent[v][u] = false;
            const bool cycle = reaches(parent, u, v);
            parent[v][u] = true;
            if (!cycle) {
              auto pu = sorted_parents(parent, u);
              pu.insert(std::upper_bound(pu.begin(), pu.end(), v), v);
              moves.push_back({Op::kReverse, u, v});
              deltas.push_back(drop + scorer.family(u, pu) - family[u]);
            }
          }
        } else if (!parent[u][v]) {
          if (cfg.sink == u) continue;
          if (cfg.respect_order ? u > v : reaches(parent, v, u)) continue;
          auto pa = sorted_parents(parent, v);
          pa.insert(std::upper_bound(pa.begin(), pa.end(), u), u);
          moves.push_back({Op::kAdd, u, v});
          deltas.push_back(scorer.family(v, pa) - family[v]);
        }
      }
    }
    const auto best = select_best(deltas, kImprovementThreshold, cfg.seed);
    if (!best) break;
    const auto mv = moves[*best];
    switch (mv.op) {
      case Op::kAdd:
        parent[mv.to][mv.from] = true;
        break;
      case Op::kDelete:
        parent[mv.to][mv.from] = false;
        break;
      case Op::kReverse:
        parent[mv.to][mv.from] = false;
        parent[mv.from][mv.to] = true;
        break;
    }
    family[mv.to] = scorer.family(mv.to, sorted_parents(parent, mv.to));
    family[mv.from] = scorer.family(mv.from, sorted_parents(parent, mv.from));
  }

  // Topological relabelling, smallest column first among available vertices.
  std::vector<std::size_t> order;
  std::vector<bool> placed(p, false);
  while (order.size() < p) {
    for (std::size_t v = 0; v < p; ++v) {
      if (placed[v]) continue;
      bool ready = true;
      for (std::size_t u = 0; u < p; ++u) {
        if (parent[v][u] && !placed[u]) ready = false;
      }
      if (ready) {
        placed[v] = true;
        order.push_back(v);
        break;
      }
    }
  }
  std::vector<std::size_t> position(p);
  for (std::size_t k = 0; k < p; ++k) position[order[k]] = k;
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < p; ++v) {
    for (std::size_t u = 0; u < p; ++u) {
      if (parent[v][u]) edges.emplace_back(position[u], position[v]);
    }
  }
  LearnedDag out{order, Dag(p, edges), 0.0};
  out.score = std::accumulate(family.begin(), family.end(), 0.0);
  return out;
}

OrderSearchResult enumerate_orders(const Dataset& data, std::optional<std::size_t> fixed_last,
                                   SearchAlgorithm algo, const SearchConfig& cfg) {
  const std::size_t p = data.space().size();
  if (p > kMaxEnumeratedVariables) {
    throw UnsupportedSize("order enumeration supports at most " +
                          std::to_string(kMaxEnumeratedVariables) + " variables, got " +
                          std::to_string(p));
  }
  if (fixed_last && *fixed_last >= p) throw std::invalid_argument("fixed variable out of range");
  std::vector<std::size_t> free;
  for (std::size_t v = 0; v < p; ++v) {
    if (v != fixed_last) free.push_back(v);
  }
  std::vector<std::vector<std::size_t>> orders;
  do {
    auto o = free;
    if (fixed_last) o.push_back(*fixed_last);
    orders.push_back(std::move(o));
  } while (std::next_permutation(free.begin(), free.end()));

  std::vector<SearchResult> results(orders.size());
  std::vector<Dataset> permuted(orders.size());
  SearchConfig inner = cfg;
  inner.policy = ExecPolicy::kSerial;
  const auto count = static_cast<std::ptrdiff_t>(orders.size());
#pragma omp parallel for schedule(dynamic, 1) if (cfg.policy == ExecPolicy::kParallel)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    permuted[idx] = data.permuted(orders[idx]);
    results[idx] = run_search(algo, default_start(algo, permuted[idx].space()), permuted[idx], inner);
  }

  OrderSearchResult out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < orders.size(); ++k) {
    out.evaluated.push_back({orders[k], results[k].score});
    if (results[k].score < results[best].score - kTieTolerance) best = k;
  }
  out.order = orders[best];
  out.data = std::move(permuted[best]);
  out.best = std::move(results[best]);
  return out;
}

}  // namespace stagedtree
