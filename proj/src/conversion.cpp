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

#include "stagedtree/conversion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "stagedtree/reshape.hpp"

namespace stagedtree {

namespace {

// Distinct-symbol counter reusing one marker array; symbols must be canonical.
class DistinctCounter {
 public:
  explicit DistinctCounter(std::size_t alphabet) : stamp_(alphabet, 0) {}

  template <typename Range>
  std::size_t count(const Range& symbols) {
    ++generation_;
    std::size_t n = 0;
    for (Symbol s : symbols) {
      if (stamp_[s] != generation_) {
        stamp_[s] = generation_;
        ++n;
      }
    }
    return n;
  }

 private:
  std::vector<std::uint64_t> stamp_;
  std::uint64_t generation_ = 0;
};

std::size_t alphabet_size(std::span<const Symbol> canonical_symbols) {
  Symbol top = 0;
  for (auto s : canonical_symbols) top = std::max(top, s);
  return static_cast<std::size_t>(top) + 1;
}

DependenceLabel label_from_counts(const EdgeEvidence& ev) {
  const auto [lo, hi] = std::minmax_element(ev.column_distinct.begin(), ev.column_distinct.end());
  if (*lo == ev.rows) {
    return ev.row_distinct_sum != ev.distinct ? DependenceLabel::kLocal : DependenceLabel::kTotal;
  }
  if (*lo == 1) {
    return ev.partial_columns.empty() ? DependenceLabel::kContext
                                      : DependenceLabel::kContextPartial;
  }
  return DependenceLabel::kPartial;
}

}  // namespace

std::vector<std::size_t> EdgeEvidence::context_of(const std::vector<std::size_t>& cardinalities,
                                                  std::size_t column) const {
  std::vector<std::size_t> levels(context_variables.size());
  for (std::size_t k = context_variables.size(); k-- > 0;) {
    const auto card = cardinalities.at(context_variables[k]);
    levels[k] = column % card;
    column /= card;
  }
  return levels;
}

StagedTree dag_to_staged_tree(const Dag& dag, const SampleSpace& space) {
  if (dag.size() != space.size()) {
    throw std::invalid_argument("DAG and sample space have different sizes");
  }
  std::vector<std::vector<Symbol>> sv;
  for (std::size_t i = 1; i < space.size(); ++i) {
    std::vector<Index> s{0};
    for (std::size_t j = 0; j < i; ++j) {
      const std::size_t card = space.cardinality(j);
      const bool parent = dag.has_edge(j, i);
      std::vector<Index> next;
      next.reserve(s.size() * card);
      for (Index sym : s) {
        for (std::size_t x = 0; x < card; ++x) next.push_back(parent ? sym * card + x : sym);
      }
      s = std::move(next);
    }
    // Parent configurations index the stages; renumber them compactly.
    std::unordered_map<Index, Symbol> remap;
    std::vector<Symbol> stages;
    stages.reserve(s.size());
    for (Index sym : s) {
      auto [it, inserted] = remap.try_emplace(sym, static_cast<Symbol>(remap.size()));
      stages.push_back(it->second);
    }
    sv.push_back(std::move(stages));
  }
  return StagedTree(space, std::move(sv));
}

std::pair<Aldag, ClassificationEvidence> staged_tree_to_aldag(const StagedTree& tree) {
  const auto& space = tree.space();
  const std::size_t p = space.size();
  std::vector<Edge> edges;
  std::map<Edge, DependenceLabel> labels;
  std::vector<EdgeEvidence> evidence;

  for (std::size_t i = 1; i < p; ++i) {
    std::vector<Symbol> a = canonicalize(tree.stages(i));
    DistinctCounter counter(alphabet_size(a));
    std::vector<std::size_t> vars(i);
    for (std::size_t k = 0; k < i; ++k) vars[k] = k;

    for (std::size_t j = i; j-- > 0;) {
      const std::size_t m = space.cardinality(j);
      const auto mat = reshape_mat(std::move(a), m);
      vars.pop_back();  // j was the fastest coordinate

      EdgeEvidence ev;
      ev.edge = {j, i};
      ev.rows = m;
      ev.cols = mat.cols();
      ev.column_distinct.reserve(mat.cols());
      for (std::size_t k = 0; k < mat.cols(); ++k) {
        ev.column_distinct.push_back(counter.count(mat.column(k)));
      }
      const std::size_t max_c =
          *std::max_element(ev.column_distinct.begin(), ev.column_distinct.end());

      if (max_c > 1) {
        for (std::size_t u = 0; u < m; ++u) {
          std::vector<Symbol> row;
          row.reserve(mat.cols());
          for (std::size_t k = 0; k < mat.cols(); ++k) row.push_back(mat(u, k));
          ev.row_distinct.push_back(counter.count(row));
          ev.row_distinct_sum += ev.row_distinct.back();
        }
        ev.distinct = counter.count(mat.vec());
        ev.context_variables = vars;
        for (std::size_t k = 0; k < mat.cols(); ++k) {
          const auto c = ev.column_distinct[k];
          if (c == 1) ev.context_columns.push_back(k);
          if (c > 1 && c < m) ev.partial_columns.push_back(k);
        }
        edges.emplace_back(j, i);
        labels.emplace(Edge{j, i}, label_from_counts(ev));
        evidence.push_back(std::move(ev));
        a = vec_transpose(mat);
        vars.insert(vars.begin(), j);
      } else {
        a = first_row(mat);
      }
    }
  }

  std::sort(evidence.begin(), evidence.end(), [](const EdgeEvidence& x, const EdgeEvidence& y) {
    return std::pair(x.edge.second, x.edge.first) < std::pair(y.edge.second, y.edge.first);
  });
  Dag dag(p, edges);
  return {Aldag(std::move(dag), std::move(labels)), ClassificationEvidence{std::move(evidence)}};
}

Dag minimal_dag(const StagedTree& tree) { return staged_tree_to_aldag(tree).first.dag(); }

DependenceLabel classify_edge_oracle(const StagedTree& tree, std::size_t from, std::size_t to) {
  const auto& space = tree.space();
  if (to == 0 || to >= space.size() || from >= to) {
    throw std::invalid_argument("edge outside the variable order");
  }
  const auto kappa = tree.stages(to);
  const Index vertices = kappa.size();

  // Parents: a single-coordinate change alters the stage somewhere.
  std::vector<bool> is_parent(to, false);
  for (Index v = 0; v < vertices; ++v) {
    auto x = lex_unindex(space, to, v);
    for (std::size_t k = 0; k < to; ++k) {
      if (is_parent[k]) continue;
      const auto orig = x[k];
      for (std::size_t alt = 0; alt < space.cardinality(k); ++alt) {
        if (alt == orig) continue;
        x[k] = alt;
        if (kappa[lex_index(space, x)] != kappa[v]) is_parent[k] = true;
      }
      x[k] = orig;
    }
  }
  if (!is_parent[from]) throw std::invalid_argument("edge is not in the minimal DAG");

  std::vector<std::size_t> others;
  for (std::size_t k = 0; k < to; ++k) {
    if (is_parent[k] && k != from) others.push_back(k);
  }
  const std::size_t m = space.cardinality(from);
  auto symbol_at = [&](const std::vector<std::size_t>& ctx, std::size_t level) {
    std::vector<std::size_t> x(to, 0);
    for (std::size_t k = 0; k < others.size(); ++k) x[others[k]] = ctx[k];
    x[from] = level;
    return kappa[lex_index(space, x)];
  };

  bool context = false;
  bool partial = false;
  // Stage symbol -> levels of X_from at which it appears, over all contexts.
  std::map<Symbol, std::vector<bool>> levels_of_symbol;
  Index contexts = 1;
  for (auto k : others) contexts *= space.cardinality(k);
  std::vector<std::size_t> ctx(others.size());
  for (Index c = 0; c < contexts; ++c) {
    Index rest = c;
    for (std::size_t k = others.size(); k-- > 0;) {
      ctx[k] = rest % space.cardinality(others[k]);
      rest /= space.cardinality(others[k]);
    }
    std::vector<Symbol> col(m);
    for (std::size_t x = 0; x < m; ++x) {
      col[x] = symbol_at(ctx, x);
      auto& seen = levels_of_symbol[col[x]];
      if (seen.empty()) seen.assign(m, false);
      seen[x] = true;
    }
    bool all_equal = true;
    bool some_pair = false;
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t y = x + 1; y < m; ++y) {
        if (col[x] == col[y]) {
          some_pair = true;
        } else {
          all_equal = false;
        }
      }
    }
    if (all_equal) context = true;
    if (some_pair && !all_equal) partial = true;
  }

  if (context && partial) return DependenceLabel::kContextPartial;
  if (context) return DependenceLabel::kContext;
  if (partial) return DependenceLabel::kPartial;
  for (const auto& [sym, seen] : levels_of_symbol) {
    if (std::count(seen.begin(), seen.end(), true) > 1) return DependenceLabel::kLocal;
  }
  return DependenceLabel::kTotal;
}

bool d_separated(const Dag& dag, std::span<const std::size_t> a, std::span<const std::size_t> b,
                 std::span<const std::size_t> c) {
  const std::size_t p = dag.size();
  std::vector<int> role(p, 0);
  auto mark = [&](std::span<const std::size_t> set, int tag) {
    for (auto v : set) {
      if (v >= p) throw std::invalid_argument("vertex out of range");
      if (role[v] != 0 && role[v] != tag) throw std::invalid_argument("sets must be disjoint");
      role[v] = tag;
    }
  };
  mark(a, 1);
  mark(b, 2);
  mark(c, 3);
  if (a.empty() || b.empty()) return true;

  // Ancestral closure of A u B u C.
  std::vector<bool> keep(p, false);
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < p; ++v) {
    if (role[v] != 0) {
      keep[v] = true;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    for (auto u : dag.parents(v)) {
      if (!keep[u]) {
        keep[u] = true;
        stack.push_back(u);
      }
    }
  }

  // Moral graph of the ancestral set.
  std::vector<std::vector<bool>> adj(p, std::vector<bool>(p, false));
  for (std::size_t v = 0; v < p; ++v) {
    if (!keep[v]) continue;
    const auto& pa = dag.parents(v);
    for (std::size_t x = 0; x < pa.size(); ++x) {
      adj[pa[x]][v] = adj[v][pa[x]] = true;
      for (std::size_t y = x + 1; y < pa.size(); ++y) adj[pa[x]][pa[y]] = adj[pa[y]][pa[x]] = true;
    }
  }

  // Reachability from A avoiding C.
  std::vector<bool> seen(p, false);
  for (auto v : a) {
    seen[v] = true;
    stack.push_back(v);
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (role[v] == 2) return false;
    for (std::size_t u = 0; u < p; ++u) {
      if (adj[v][u] && keep[u] && !seen[u] && role[u] != 3) {
        seen[u] = true;
        stack.push_back(u);
      }
    }
  }
  return true;
}

StagedTree dependence_subtree(const StagedTree& tree, const Aldag& aldag, std::size_t target) {
  const auto& space = tree.space();
  if (aldag.dag().size() != space.size() || target >= space.size()) {
    throw std::invalid_argument("ALDAG and staged tree do not match");
  }
  const auto& parents = aldag.dag().parents(target);
  std::vector<std::size_t> vars(parents.begin(), parents.end());
  vars.push_back(target);
  const SampleSpace sub = space.subspace(vars);
  const std::size_t q = parents.size();

  // Target stage per parent configuration; every extension must agree.
  std::vector<Symbol> target_stages;
  if (target > 0) {
    const auto kappa = tree.stages(target);
    const Index parent_configs = sub.prefix_size(q);
    target_stages.assign(parent_configs, 0);
    std::vector<bool> assigned(parent_configs, false);
    std::vector<std::size_t> proj(q);
    for (Index v = 0; v < kappa.size(); ++v) {
      const auto x = lex_unindex(space, target, v);
      for (std::size_t k = 0; k < q; ++k) proj[k] = x[parents[k]];
      const Index pc = lex_index(sub, proj);
      if (!assigned[pc]) {
        assigned[pc] = true;
        target_stages[pc] = kappa[v];
      } else if (target_stages[pc] != kappa[v]) {
        throw std::invalid_argument("target staging depends on a variable outside its parents");
      }
    }
  }

  std::vector<std::vector<Symbol>> sv;
  for (std::size_t d = 1; d < q; ++d) {
    std::vector<Symbol> s(sub.prefix_size(d));
    for (std::size_t v = 0; v < s.size(); ++v) s[v] = static_cast<Symbol>(v);
    sv.push_back(std::move(s));
  }
  if (q > 0) sv.push_back(target_stages);
  StagedTree out(sub, std::move(sv));
  if (!tree.is_fitted()) return out;

  // Marginal of the parents by forward propagation to depth `target`.
  std::vector<double> prob{1.0};
  for (std::size_t d = 0; d < target; ++d) {
    const std::size_t card = space.cardinality(d);
    std::vector<double> next(prob.size() * card);
    for (Index v = 0; v < prob.size(); ++v) {
      const auto dist = tree.distribution(d, v);
      for (std::size_t x = 0; x < card; ++x) next[v * card + x] = prob[v] * dist[x];
    }
    prob = std::move(next);
  }
  // Joint marginals over each parent prefix.
  std::vector<std::vector<double>> prefix_marginal(q + 1);
  for (std::size_t d = 0; d <= q; ++d) prefix_marginal[d].assign(sub.prefix_size(d), 0.0);
  std::vector<std::size_t> proj(q);
  for (Index v = 0; v < prob.size(); ++v) {
    const auto x = lex_unindex(space, target, v);
    for (std::size_t k = 0; k < q; ++k) proj[k] = x[parents[k]];
    for (std::size_t d = 0; d <= q; ++d) {
      prefix_marginal[d][lex_index(sub, std::span(proj).first(d))] += prob[v];
    }
  }

  StageDistributions fit;
  fit.distributions.resize(q + 1);
  for (std::size_t d = 0; d < q; ++d) {
    const std::size_t card = sub.cardinality(d);
    for (Index v = 0; v < prefix_marginal[d].size(); ++v) {
      std::vector<double> dist(card);
      const double denom = prefix_marginal[d][v];
      double total = 0.0;
      for (std::size_t x = 0; x < card; ++x) {
        dist[x] = denom > 0.0 ? prefix_marginal[d + 1][v * card + x] / denom : 1.0 / card;
        total += dist[x];
      }
      for (auto& e : dist) e /= total;
      fit.distributions[d].emplace(static_cast<Symbol>(d == 0 ? 0 : v), std::move(dist));
    }
  }
  const auto& source = tree.fitted().distributions[target];
  if (q == 0) {
    fit.distributions[0].emplace(0, source.at(target == 0 ? 0 : target_stages.at(0)));
  } else {
    for (auto s : target_stages) fit.distributions[q].try_emplace(s, source.at(s));
  }
  return out.with_fit(std::move(fit));
}

}  // namespace stagedtree
