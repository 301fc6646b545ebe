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

// Serial reference against the OpenMP kernels: raw candidate evaluation,
// full searches, and order enumeration.

#include <benchmark/benchmark.h>

#include <cmath>
#include <map>
#include <random>

#include "stagedtree/learning.hpp"
#include "stagedtree/search_kernels.hpp"

using namespace stagedtree;

namespace {

SampleSpace space_of(std::size_t p, std::size_t card) {
  std::vector<Variable> vars;
  for (std::size_t i = 0; i < p; ++i) {
    Variable v{"X" + std::to_string(i), {}};
    for (std::size_t l = 0; l < card; ++l) v.levels.push_back(std::to_string(l));
    vars.push_back(std::move(v));
  }
  return SampleSpace(std::move(vars));
}

Dataset synthetic(std::size_t p, std::size_t card, std::size_t n) {
  const auto space = space_of(p, card);
  std::mt19937_64 rng(2024);
  std::gamma_distribution<double> g(0.5, 1.0);
  std::vector<double> w(space.total_size());
  for (auto& x : w) x = g(rng);
  std::discrete_distribution<Index> pick(w.begin(), w.end());
  std::map<Index, Count> counts;
  for (std::size_t k = 0; k < n; ++k) ++counts[pick(rng)];
  return Dataset(space, std::move(counts));
}

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::kParallel : ExecPolicy::kSerial;
}

void BM_EvaluateCandidates(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(1));
  std::vector<double> out;
  auto work = [](std::size_t k) {
    double acc = 0;
    for (int r = 0; r < 200; ++r) acc += std::log1p(static_cast<double>(k + r));
    return acc;
  };
  for (auto _ : state) {
    evaluate_candidates(policy_of(state), n, work, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_EvaluateCandidates)->ArgsProduct({{0, 1}, {256, 4096}});

void BM_Search(benchmark::State& state) {
  static const Dataset data = synthetic(5, 3, 5000);
  const auto algo = static_cast<SearchAlgorithm>(state.range(1));
  SearchConfig cfg;
  cfg.policy = policy_of(state);
  const auto start = default_start(algo, data.space());
  for (auto _ : state) {
    auto r = run_search(algo, start, data, cfg);
    benchmark::DoNotOptimize(r.score);
  }
  state.SetLabel(std::string(to_string(algo)));
}
BENCHMARK(BM_Search)->ArgsProduct({{0, 1}, {0, 1, 2}})->Unit(benchmark::kMillisecond);

void BM_EnumerateOrders(benchmark::State& state) {
  static const Dataset data = synthetic(5, 2, 3000);
  SearchConfig cfg;
  cfg.policy = policy_of(state);
  for (auto _ : state) {
    auto r = enumerate_orders(data, std::nullopt, SearchAlgorithm::kBhc, cfg);
    benchmark::DoNotOptimize(r.best.score);
  }
}
BENCHMARK(BM_EnumerateOrders)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
