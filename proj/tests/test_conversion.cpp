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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stagedtree/conversion.hpp"
#include "stagedtree/scoring.hpp"

using namespace stagedtree;

namespace {

std::array<std::size_t, 5> census(const StagedTree& t) {
  return staged_tree_to_aldag(t).first.census();
}

StagedTree hc_reference(const SampleSpace& space) {
  return StagedTree(space, {{0, 0, 1, 2},
                            {0, 1, 2, 3, 2, 0, 4, 3},
                            {0, 1, 0, 0, 0, 2, 0, 3, 1, 3, 4, 4, 0, 0, 0, 0}});
}

}  // namespace

TEST_CASE("empty and complete DAGs") {
  const auto space = oracle::make_space({2, 3, 2});
  const auto empty = dag_to_staged_tree(Dag(3), space);
  CHECK(empty.stage_count(1) == 1);
  CHECK(empty.stage_count(2) == 1);
  CHECK(staged_tree_to_aldag(empty).first.dag().edge_count() == 0);
  const auto full = dag_to_staged_tree(Dag::complete(3), space);
  CHECK(full == StagedTree::saturated(space));
}

TEST_CASE("dag_to_staged_tree matches the parent-agreement definition") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 300; ++k) {
    const std::size_t p = 1 + rng() % 5;
    const auto space = oracle::random_space(rng, p, 3);
    const auto g = oracle::random_dag(rng, p);
    REQUIRE(dag_to_staged_tree(g, space).canonical() ==
            oracle::dag_staging(g, space).canonical());
  }
}

TEST_CASE("Titanic BN converts to its staging and back") {
  const auto space = oracle::titanic().space();
  const auto t = dag_to_staged_tree(oracle::titanic_bn(), space);
  CHECK(t.stage_count(1) == 4);
  CHECK(t.stage_count(2) == 8);
  CHECK(t.stage_count(3) == 8);
  // Depth 3 pairs vertices that differ only in Gender.
  for (Index v = 0; v < 16; ++v) {
    const auto x = lex_unindex(space, 3, v);
    auto y = x;
    y[1] = 1 - y[1];
    CHECK(t.stage_of(3, v) == t.stage_of(3, lex_index(space, y)));
  }
  const auto [aldag, ev] = staged_tree_to_aldag(t);
  CHECK(aldag.dag() == oracle::titanic_bn());
  CHECK(aldag.census() == std::array<std::size_t, 5>{5, 0, 0, 0, 0});
  CHECK(ev.edges.size() == 5);
}

TEST_CASE("reference HC staging gives the reference ALDAG") {
  const auto space = oracle::titanic().space();
  const auto [aldag, ev] = staged_tree_to_aldag(hc_reference(space));
  CHECK(aldag.dag() == Dag::complete(4));
  using L = DependenceLabel;
  CHECK(aldag.label(0, 1) == L::kPartial);
  CHECK(aldag.label(0, 2) == L::kPartial);
  CHECK(aldag.label(0, 3) == L::kPartial);
  CHECK(aldag.label(1, 2) == L::kLocal);
  CHECK(aldag.label(1, 3) == L::kContext);
  CHECK(aldag.label(2, 3) == L::kContext);
  for (const auto& [e, l] : aldag.labels()) CHECK(classify_edge_oracle(hc_reference(space), e.first, e.second) == l);
}

TEST_CASE("reference CSBHC staging gives its ALDAG") {
  const auto space = oracle::titanic().space();
  // a a b c | c r g y B m O p | c c R c g y R R R R R R m m R m
  const StagedTree t(space, {{0, 0, 1, 2},
                             {0, 1, 2, 3, 4, 5, 6, 7},
                             {0, 0, 1, 0, 2, 3, 1, 1, 1, 1, 1, 1, 4, 4, 1, 4}});
  const auto aldag = staged_tree_to_aldag(t).first;
  using L = DependenceLabel;
  CHECK(aldag.label(0, 1) == L::kPartial);
  CHECK(aldag.label(0, 2) == L::kTotal);
  CHECK(aldag.label(0, 3) == L::kContextPartial);
  CHECK(aldag.label(1, 2) == L::kTotal);
  CHECK(aldag.label(1, 3) == L::kContext);
  CHECK(aldag.label(2, 3) == L::kContext);
  CHECK(census(t)[4] == 0);
  const auto data = oracle::titanic();
  CHECK(score(t, data).bic == doctest::Approx(10479.87).epsilon(0.01 / 10479.87));
}

TEST_CASE("oracle examples: context and local") {
  // X1 ternary, X2 binary, X3 binary. The X1 -> X3 matrix has rows = X2.
  const auto space = oracle::make_space({3, 2, 2});
  // Column for X1 = 0 constant; the rest all distinct.
  const StagedTree ctx(space, {{0, 1, 2}, {0, 0, 1, 2, 3, 4}});
  CHECK(classify_edge_oracle(ctx, 1, 2) == DependenceLabel::kContext);
  CHECK(staged_tree_to_aldag(ctx).first.label(1, 2) == DependenceLabel::kContext);
  // Binary X2 with two equal symbols in different columns.
  const StagedTree loc(space, {{0, 1, 2}, {0, 1, 1, 2, 3, 4}});
  CHECK(classify_edge_oracle(loc, 1, 2) == DependenceLabel::kLocal);
  CHECK(staged_tree_to_aldag(loc).first.label(1, 2) == DependenceLabel::kLocal);
  CHECK_THROWS_AS(classify_edge_oracle(StagedTree::independence(space), 0, 2),
                  std::invalid_argument);
}

TEST_CASE("binary tails never get partial labels") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 2000; ++k) {
    const auto space = oracle::random_space(rng, 4, 3);
    const auto aldag = staged_tree_to_aldag(oracle::random_tree(rng, space, 3)).first;
    for (const auto& [e, l] : aldag.labels()) {
      if (space.cardinality(e.first) == 2) {
        REQUIRE(l != DependenceLabel::kPartial);
        REQUIRE(l != DependenceLabel::kContextPartial);
      }
    }
  }
}

TEST_CASE("matrix-based labels agree with the brute-force oracle") {
  std::mt19937_64 rng(24);
  for (int k = 0; k < 3000; ++k) {
    const auto space = oracle::random_space(rng, 2 + rng() % 3, 3);
    const auto t = oracle::random_tree(rng, space, 1 + rng() % 4);
    const auto aldag = staged_tree_to_aldag(t).first;
    for (const auto& [e, l] : aldag.labels()) REQUIRE(classify_edge_oracle(t, e.first, e.second) == l);
  }
}

TEST_CASE("minimal DAG is minimal") {
  std::mt19937_64 rng(25);
  for (int k = 0; k < 1000; ++k) {
    const auto space = oracle::random_space(rng, 2 + rng() % 3, 3);
    const auto t = oracle::random_tree(rng, space, 1 + rng() % 3);
    const auto g = minimal_dag(t);
    // The tree's model lies inside the DAG model: every stage of T_G sits in a
    // single stage of the tree.
    REQUIRE(staging_refines(dag_to_staged_tree(g, space), t));
    for (const auto& [from, to] : g.edges()) {
      REQUIRE_FALSE(staging_refines(dag_to_staged_tree(g.without_edge(from, to), space), t));
    }
  }
}

TEST_CASE("evidence summarises the stage matrices") {
  const auto space = oracle::titanic().space();
  const auto [aldag, ev] = staged_tree_to_aldag(hc_reference(space));
  REQUIRE(ev.edges.size() == 6);
  for (const auto& e : ev.edges) {
    CHECK(e.column_distinct.size() == e.cols);
    CHECK(e.row_distinct.size() == e.rows);
    CHECK(e.rows == space.cardinality(e.edge.first));
    for (auto c : e.column_distinct) CHECK((c >= 1 && c <= e.rows));
  }
  // G -> A: rows are Gender, columns run over (Survived, Class) with Survived
  // slowest, since it was moved to the front after its own edge was found.
  const auto& ga = *std::find_if(ev.edges.begin(), ev.edges.end(),
                                 [](const EdgeEvidence& e) { return e.edge == Edge{1, 3}; });
  CHECK_FALSE(ga.context_columns.empty());
  CHECK(ga.context_variables == std::vector<std::size_t>{2, 0});
}

TEST_CASE("d-separation on the Titanic BN") {
  const auto g = oracle::titanic_bn();
  const std::vector<std::size_t> A{3}, G{1}, CS{0, 2}, C{0}, none;
  CHECK(d_separated(g, A, G, CS));
  CHECK_FALSE(d_separated(g, A, G, C));
  CHECK(d_separated(g, none, G, C));
  CHECK(d_separated(g, A, none, C));
  CHECK_THROWS_AS(d_separated(g, A, A, none), std::invalid_argument);
  const std::vector<std::size_t> bad{7};
  CHECK_THROWS_AS(d_separated(g, bad, G, none), std::invalid_argument);
}

TEST_CASE("d-separation agrees with path enumeration") {
  std::mt19937_64 rng(26);
  for (const auto& g : oracle::all_dags(4)) {
    for (int q = 0; q < 10; ++q) {
      std::vector<std::size_t> a, b, c;
      for (std::size_t v = 0; v < 4; ++v) {
        switch (rng() % 4) {
          case 0: a.push_back(v); break;
          case 1: b.push_back(v); break;
          case 2: c.push_back(v); break;
          default: break;
        }
      }
      REQUIRE(d_separated(g, a, b, c) == oracle::dsep_by_paths(g, a, b, c));
    }
  }
}

TEST_CASE("dependence subtree with no parents") {
  const auto space = oracle::make_space({2, 3, 2});
  const auto t = dag_to_staged_tree(Dag(3, {{0, 1}}), space);
  const auto aldag = staged_tree_to_aldag(t).first;
  const auto sub = dependence_subtree(t, aldag, 2);
  CHECK(sub.space().size() == 1);
  CHECK(sub.space().variable(0).name == "X3");
}

TEST_CASE("dependence subtree of Age in the reference ALDAG is the depth-3 staging") {
  const auto data = oracle::titanic();
  const auto t = fit(hc_reference(data.space()), data);
  const auto aldag = staged_tree_to_aldag(t).first;
  const auto sub = dependence_subtree(t, aldag, 3);
  REQUIRE(sub.space() == data.space());
  CHECK(canonicalize(sub.stages(3)) == canonicalize(t.stages(3)));
  CHECK(sub.stage_count(1) == 4);
  CHECK(sub.stage_count(2) == 8);
  REQUIRE(sub.is_fitted());
  for (Index v = 0; v < 16; ++v) {
    const auto a = sub.distribution(3, v), b = t.distribution(3, v);
    CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
  // Parent marginals are those of the data.
  CHECK(sub.distribution(0, 0)[0] ==
        doctest::Approx(oracle::tally(data, {{0, 0}}) / static_cast<double>(data.n())));
}

TEST_CASE("dependence subtree of an innovation-survey shaped tree") {
  // Three variables before the target; the target depends only on the first
  // (3 levels) and third (2 levels), with stages {v4}, {v5, v6}, {v7, v8, v9}
  // over the six parent configurations.
  const SampleSpace space({{"EMP", {"a", "b", "c"}},
                           {"NOISE", {"u", "v"}},
                           {"INPD", {"n", "y"}},
                           {"GROWTH", {"lo", "hi"}}});
  // Parent configuration (EMP, INPD) -> stage: (a,n)=0, (a,y)=1, (b,n)=1, (b,y)=2, (c,*)=2.
  const std::vector<Symbol> by_parent{0, 1, 1, 2, 2, 2};
  std::vector<Symbol> s3;
  for (Index v = 0; v < 12; ++v) {
    const auto x = lex_unindex(space, 3, v);
    s3.push_back(by_parent[x[0] * 2 + x[2]]);
  }
  std::vector<Symbol> s1{0, 1, 2};
  std::vector<Symbol> s2{0, 1, 2, 3, 4, 5};
  const StagedTree t(space, {s1, s2, s3});
  const auto aldag = staged_tree_to_aldag(t).first;
  REQUIRE(aldag.dag().parents(3) == std::vector<std::size_t>{0, 2});
  const auto sub = dependence_subtree(t, aldag, 3);
  CHECK(sub.space().names() == std::vector<std::string>{"EMP", "INPD", "GROWTH"});
  CHECK(std::vector<Symbol>(sub.stages(2).begin(), sub.stages(2).end()) ==
        std::vector<Symbol>{0, 1, 1, 2, 2, 2});
  CHECK(sub.space().total_size() == 12);
}

TEST_CASE("dependence subtree rejects an inconsistent ALDAG") {
  const auto space = oracle::make_space({2, 2, 2});
  const auto t = StagedTree::saturated(space);
  const Aldag wrong(Dag(3, {{0, 2}}), {{{0, 2}, DependenceLabel::kTotal}});
  CHECK_THROWS_AS(dependence_subtree(t, wrong, 2), std::invalid_argument);
}
