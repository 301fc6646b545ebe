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

// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// gated criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "stagedtree/conversion.hpp"
#include "stagedtree/learning.hpp"
#include "stagedtree/model_document.hpp"
#include "stagedtree/scoring.hpp"

using namespace stagedtree;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, double limit_seconds,
         const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += "; runtime limit exceeded";
  }
  if (!o.pass) ++failures;
  std::printf("%s %d %s: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string census_text(const std::array<std::size_t, 5>& c) {
  std::ostringstream out;
  out << '(' << c[0] << ',' << c[1] << ',' << c[2] << ',' << c[3] << ',' << c[4] << ')';
  return out.str();
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

const StagedTree& reference_hc(const SampleSpace& space) {
  static const StagedTree t(space, {{0, 0, 1, 2},
                                    {0, 1, 2, 3, 2, 0, 4, 3},
                                    {0, 1, 0, 0, 0, 2, 0, 3, 1, 3, 4, 4, 0, 0, 0, 0}});
  return t;
}

std::vector<std::vector<std::size_t>> binary_ternary_cards(std::size_t p) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << p); ++mask) {
    std::vector<std::size_t> cards(p);
    for (std::size_t k = 0; k < p; ++k) cards[k] = (mask >> k & 1) ? 3 : 2;
    out.push_back(cards);
  }
  return out;
}

}  // namespace

int main() {
  const Dataset titanic = oracle::titanic();
  const SampleSpace& tspace = titanic.space();

  run(1, "Titanic BN BIC", 1.0, [&] {
    const auto r = score(dag_to_staged_tree(oracle::titanic_bn(), tspace), titanic);
    return Outcome{std::abs(r.bic - 10502.28) <= 0.5,
                   fmt("BIC %.3f, target 10502.28 +/- 0.5", r.bic) + ", df " + std::to_string(r.df)};
  });

  SearchResult hc_result;
  run(2, "Titanic HC staged tree", 0, [&] {
    hc_result = hc(StagedTree::independence(tspace), titanic);
    const double b = hc_result.score;
    const bool bound = b <= 10502.28;
    const bool band = within(b, 10440.39, 0.01);
    const bool exact = hc_result.tree.without_fit() == reference_hc(tspace).canonical();
    return Outcome{bound && band, fmt("BIC %.3f", b) + (bound ? " <= 10502.28" : " > 10502.28") +
                                      fmt(", %.3f%% from 10440.39", 100 * (b - 10440.39) / 10440.39) +
                                      (exact ? ", reference staging reached"
                                             : ", reference staging not reached")};
  });

  run(3, "Titanic refinements", 5.0, [&] {
    const auto b = refine_dag(oracle::titanic_bn(), titanic, SearchAlgorithm::kBhc);
    const auto c = refine_dag(oracle::titanic_bn(), titanic, SearchAlgorithm::kCsbhc);
    const bool ok_b = within(b.report.bic, 10452, 0.01) &&
                      b.aldag.census() == std::array<std::size_t, 5>{0, 1, 3, 0, 1};
    const bool ok_c = within(c.report.bic, 10488, 0.01) &&
                      c.aldag.census() == std::array<std::size_t, 5>{4, 1, 0, 0, 0};
    return Outcome{ok_b && ok_c, fmt("BHC BIC %.3f", b.report.bic) + " census " +
                                     census_text(b.aldag.census()) +
                                     fmt("; CSBHC BIC %.3f", c.report.bic) + " census " +
                                     census_text(c.aldag.census())};
  });

  run(4, "Reference ALDAG labels", 0, [&] {
    const auto aldag = staged_tree_to_aldag(hc_result.tree).first;
    const auto census = aldag.census();
    const bool complete = aldag.dag() == Dag::complete(4);
    const bool reference_census = complete && census == std::array<std::size_t, 5>{0, 2, 3, 0, 1};
    const bool exact = hc_result.tree.without_fit() == reference_hc(tspace).canonical();
    // Reference staging itself, independent of what the search reached.
    const auto pub = staged_tree_to_aldag(reference_hc(tspace)).first;
    const bool pub_ok = pub.dag() == Dag::complete(4) &&
                        pub.census() == std::array<std::size_t, 5>{0, 2, 3, 0, 1};
    std::size_t mismatches = 0;
    for (const auto& [e, l] : aldag.labels()) {
      if (classify_edge_oracle(hc_result.tree, e.first, e.second) != l) ++mismatches;
    }
    std::string detail = std::string("HC tree ALDAG ") + (complete ? "complete" : "not complete") +
                         ", census " + census_text(census) +
                         (reference_census ? " = {3 partial, 2 context, 1 local}" : "") +
                         ", oracle mismatches " + std::to_string(mismatches) +
                         "; reference staging gives " + census_text(pub.census());
    if (!exact) detail += "; reference staging not reached, oracle agreement gates";
    return Outcome{pub_ok && mismatches == 0 && (!exact || reference_census), detail};
  });

  run(5, "DAG round trip", 60.0, [&] {
    std::size_t checked = 0, bad = 0;
    auto check = [&](const Dag& g, const SampleSpace& space) {
      ++checked;
      const auto aldag = staged_tree_to_aldag(dag_to_staged_tree(g, space)).first;
      bool ok = aldag.dag() == g;
      for (const auto& [e, l] : aldag.labels()) ok = ok && l == DependenceLabel::kTotal;
      if (!ok) ++bad;
    };
    for (std::size_t p = 1; p <= 4; ++p) {
      const auto dags = oracle::all_dags(p);
      for (const auto& cards : binary_ternary_cards(p)) {
        const auto space = oracle::make_space(cards);
        for (const auto& g : dags) check(g, space);
      }
    }
    std::mt19937_64 rng(501);
    for (std::size_t p : {5, 6}) {
      for (int k = 0; k < 200; ++k) {
        check(oracle::random_dag(rng, p, 0.2 + 0.6 * (k % 5) / 4.0), oracle::random_space(rng, p, 3));
      }
    }
    return Outcome{bad == 0, std::to_string(checked) + " DAG/space pairs, " + std::to_string(bad) +
                                 " failures"};
  });

  run(6, "Label oracle equivalence", 120.0, [&] {
    std::size_t trees = 0, edges = 0, bad = 0;
    auto check = [&](const StagedTree& t) {
      ++trees;
      const auto aldag = staged_tree_to_aldag(t).first;
      for (const auto& [e, l] : aldag.labels()) {
        ++edges;
        if (classify_edge_oracle(t, e.first, e.second) != l) ++bad;
      }
    };
    // Every pair of set partitions for the two stage vectors at p = 3. The
    // cardinality of the last variable never enters a stage vector.
    for (std::size_t c1 : {2, 3}) {
      for (std::size_t c2 : {2, 3}) {
        const auto space = oracle::make_space({c1, c2, 2});
        const auto s1 = oracle::all_partitions(c1);
        const auto s2 = oracle::all_partitions(c1 * c2);
        for (const auto& a : s1) {
          for (const auto& b : s2) check(StagedTree(space, {a, b}));
        }
      }
    }
    const std::size_t exhaustive = trees;
    std::mt19937_64 rng(601);
    for (int k = 0; k < 10000; ++k) {
      const auto space = oracle::random_space(rng, 4, 3);
      check(oracle::random_tree(rng, space, 1 + rng() % 4));
    }
    return Outcome{bad == 0, std::to_string(exhaustive) + " exhaustive + 10000 random trees, " +
                                 std::to_string(edges) + " edges, " + std::to_string(bad) +
                                 " mismatches"};
  });

  run(7, "d-separation oracle", 0, [&] {
    std::mt19937_64 rng(701);
    std::size_t queries = 0, bad = 0;
    for (std::size_t p = 1; p <= 5; ++p) {
      for (const auto& g : oracle::all_dags(p)) {
        for (int q = 0; q < 10; ++q) {
          std::vector<std::size_t> a, b, c;
          for (std::size_t v = 0; v < p; ++v) {
            switch (rng() % 4) {
              case 0: a.push_back(v); break;
              case 1: b.push_back(v); break;
              case 2: c.push_back(v); break;
              default: break;
            }
          }
          ++queries;
          if (d_separated(g, a, b, c) != oracle::dsep_by_paths(g, a, b, c)) ++bad;
        }
      }
    }
    return Outcome{bad == 0, std::to_string(queries) + " queries over every DAG with p <= 5, " +
                                 std::to_string(bad) + " mismatches"};
  });

  run(8, "Search invariants", 0, [&] {
    std::mt19937_64 rng(801);
    std::size_t bad_trace = 0, bad_refine = 0, local = 0, nondet = 0;
    for (int k = 0; k < 1000; ++k) {
      const std::size_t p = 2 + rng() % 3;
      const auto space = oracle::random_space(rng, p, 3);
      const auto data = oracle::random_data(rng, space, 1 + rng() % 500);
      SearchConfig cfg;
      cfg.seed = k % 3;
      for (auto algo : {SearchAlgorithm::kHc, SearchAlgorithm::kBhc, SearchAlgorithm::kCsbhc}) {
        StagedTree start = default_start(algo, space);
        if (algo == SearchAlgorithm::kCsbhc && k % 2) {
          start = dag_to_staged_tree(oracle::random_dag(rng, p), space);
        }
        const auto r = run_search(algo, start, data, cfg);
        double prev = score(start, data).bic;
        for (const auto& s : r.trace.steps) {
          if (!(s.score_after < s.score_before) || std::abs(s.score_before - prev) > 1e-6) ++bad_trace;
          prev = s.score_after;
        }
        if (algo != SearchAlgorithm::kHc && !staging_refines(start, r.tree)) ++bad_refine;
        if (algo == SearchAlgorithm::kCsbhc && staged_tree_to_aldag(r.tree).first.census()[4] > 0) {
          ++local;
        }
        if (k % 10 == 0) {
          const auto again = run_search(algo, start, data, cfg);
          ModelDocument a, b;
          a.tree = r.tree;
          a.trace = r.trace;
          b.tree = again.tree;
          b.trace = again.trace;
          if (serialize(a) != serialize(b)) ++nondet;
        }
      }
    }
    return Outcome{bad_trace + bad_refine + local + nondet == 0,
                   "1000 datasets x 3 searches: " + std::to_string(bad_trace) +
                       " non-decreasing steps, " + std::to_string(bad_refine) +
                       " refinement violations, " + std::to_string(local) +
                       " CSBHC local labels, " + std::to_string(nondet) + " nondeterministic reruns"};
  });

  std::printf(
      "INFO 9 Non-bundled datasets: not gated; the abalone, nursery and survey rows need "
      "external CSVs (use the CLI with --data)\n");

  std::printf("%s: %d gated failure(s)\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
