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

// Command-line front end: learn, refine, label and inspect staged trees.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stagedtree/conversion.hpp"
#include "stagedtree/csv.hpp"
#include "stagedtree/dot.hpp"
#include "stagedtree/errors.hpp"
#include "stagedtree/learning.hpp"
#include "stagedtree/model_document.hpp"
#include "stagedtree/scoring.hpp"

namespace st = stagedtree;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitModel = 4;
constexpr int kExitIo = 1;

// Raised for bad flag values that CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int report(int code, const std::string& kind, const std::string& message,
           const std::optional<std::string>& detail = std::nullopt) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  if (detail) j["code"] = *detail;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

std::vector<std::string> split_names(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

// First CSV line split on commas; enough to spot a count column by name.
std::vector<std::string> header_fields(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw st::DataError(st::DataErrorCode::kUnreadable, "cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) {
    if (f.size() >= 2 && f.front() == '"' && f.back() == '"') f = f.substr(1, f.size() - 2);
    fields.push_back(f);
  }
  return fields;
}

struct DataFlags {
  std::string path;
  std::optional<std::string> count_column;
  bool no_header = false;

  void add(CLI::App* cmd, bool required = true) {
    auto* opt = cmd->add_option("--data", path, "CSV file with one row per observation");
    if (required) opt->required();
    cmd->add_option("--count-column", count_column,
                    "Column with row multiplicities (default: a column named count or Freq)");
    cmd->add_flag("--no-header", no_header, "CSV has no header row");
  }

  st::CsvOptions options() const {
    st::CsvOptions o;
    o.header = !no_header;
    o.count_column = count_column;
    if (!o.count_column && o.header) {
      for (const auto& f : header_fields(path)) {
        if (f == "count" || f == "Freq") o.count_column = f;
      }
    }
    return o;
  }

  st::Dataset read(const std::optional<std::vector<std::string>>& order = std::nullopt) const {
    auto o = options();
    o.order = order;
    return st::read_csv(path, o);
  }

  // Data re-read over the variables and levels of an existing space.
  st::Dataset read_over(const st::SampleSpace& space) const {
    auto o = options();
    o.order = space.names();
    for (const auto& v : space.variables()) o.levels[v.name] = v.levels;
    return st::read_csv(path, o);
  }
};

st::SearchAlgorithm algorithm_from(const std::string& text) {
  auto a = st::parse_algorithm(text);
  if (!a) throw UsageError("unknown algorithm '" + text + "'");
  return *a;
}

st::ScoreKind score_from(const std::string& text) {
  if (text == "bic") return st::ScoreKind::kBic;
  if (text == "aic") return st::ScoreKind::kAic;
  throw UsageError("unknown score '" + text + "'");
}

std::size_t position(const std::vector<std::string>& names, const std::string& name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw UsageError("unknown variable '" + name + "'");
}

st::ModelDocument finished_model(const st::StagedTree& tree, const st::Dataset& data,
                                 std::optional<st::SearchTrace> trace) {
  st::ModelDocument doc;
  doc.tree = st::fit(tree, data);
  doc.aldag = st::staged_tree_to_aldag(doc.tree).first;
  doc.score = st::score(doc.tree, data);
  doc.trace = std::move(trace);
  return doc;
}

void print_report(const st::ScoreReport& r) {
  std::printf("logL %.6f\ndf %zu\nBIC %.6f\nAIC %.6f\n", r.log_likelihood, r.df, r.bic, r.aic);
}

void maybe_dot(const std::string& path, const std::string& content) {
  if (!path.empty()) st::write_text_atomic(path, content);
}

// Reorders the data so the graph's edges point forward, keeping the data order
// where the graph allows it.
std::pair<st::Dag, st::Dataset> align(const st::GraphDocument& graph, const st::Dataset& data) {
  const auto data_names = data.space().names();
  const auto order = st::topological_names(graph, data_names);
  if (order.size() != data_names.size()) {
    throw st::ModelError("graph nodes do not match the data variables");
  }
  std::vector<std::size_t> perm;
  for (const auto& n : order) perm.push_back(position(data_names, n));
  st::Dataset aligned = data.permuted(perm);
  return {st::to_dag(graph, order), std::move(aligned)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Staged tree learning and asymmetry-labelled DAGs"};
  app.require_subcommand(1);

  std::string algo = "bhc";
  std::string score_kind = "bic";
  std::string out;
  std::string dot;
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iter;

  // learn
  auto* learn = app.add_subcommand("learn", "Learn a staged tree from data");
  DataFlags learn_data;
  learn_data.add(learn);
  std::vector<std::string> order_raw;
  std::string fix_last;
  bool enumerate = false;
  learn->add_option("--algo", algo, "hc, bhc or csbhc")->check(CLI::IsMember({"hc", "bhc", "csbhc"}));
  learn->add_option("--order", order_raw, "Variable order (names, space or comma separated)");
  learn->add_option("--fix-last", fix_last, "Variable to place last");
  learn->add_flag("--enumerate-orders", enumerate, "Search every variable order");
  learn->add_option("--seed", seed, "Tie-breaking seed");
  learn->add_option("--max-iter", max_iter, "Accepted moves per depth");
  learn->add_option("--score", score_kind, "bic or aic")->check(CLI::IsMember({"bic", "aic"}));
  learn->add_option("--out", out, "Model file to write")->required();
  learn->add_option("--dot", dot, "Also write the staged tree as DOT");

  // refine
  auto* refine = app.add_subcommand("refine", "Refine a DAG into a staged tree and ALDAG");
  DataFlags refine_data;
  refine_data.add(refine);
  std::string dag_path;
  std::string dag_out;
  refine->add_option("--dag", dag_path, "DAG file; learned from the data when omitted");
  refine->add_option("--algo", algo, "bhc or csbhc")->check(CLI::IsMember({"bhc", "csbhc"}));
  refine->add_option("--seed", seed, "Tie-breaking seed");
  refine->add_option("--score", score_kind, "bic or aic")->check(CLI::IsMember({"bic", "aic"}));
  refine->add_option("--out", out, "Model file to write")->required();
  refine->add_option("--dag-out", dag_out, "Write the starting DAG here");
  refine->add_option("--dot", dot, "Also write the ALDAG as DOT");

  // aldag
  auto* aldag = app.add_subcommand("aldag", "Minimal DAG of a model with dependence labels");
  std::string model_path;
  aldag->add_option("--model", model_path, "Model file")->required();
  aldag->add_option("--out", out, "ALDAG file to write")->required();
  aldag->add_option("--dot", dot, "Also write the ALDAG as DOT");

  // dsep
  auto* dsep = app.add_subcommand("dsep", "d-separation query");
  std::vector<std::string> a_raw, b_raw, c_raw;
  dsep->add_option("--dag", dag_path, "DAG file")->required();
  dsep->add_option("--a", a_raw, "First set")->required();
  dsep->add_option("--b", b_raw, "Second set")->required();
  dsep->add_option("--c", c_raw, "Conditioning set");

  // subtree
  auto* subtree = app.add_subcommand("subtree", "Dependence subtree of one variable");
  std::string aldag_path;
  std::string target;
  subtree->add_option("--model", model_path, "Model file")->required();
  subtree->add_option("--aldag", aldag_path, "ALDAG file (default: the one stored in the model)");
  subtree->add_option("--target", target, "Target variable")->required();
  subtree->add_option("--out", out, "Model file to write")->required();
  subtree->add_option("--dot", dot, "Also write the subtree as DOT");

  // score
  auto* score = app.add_subcommand("score", "Score a model on data");
  DataFlags score_data;
  score->add_option("--model", model_path, "Model file")->required();
  score_data.add(score);

  // convert
  auto* convert = app.add_subcommand("convert", "Staged tree of a DAG");
  DataFlags convert_data;
  std::string space_path;
  convert->add_option("--dag", dag_path, "DAG file")->required();
  auto* space_opt = convert->add_option("--space", space_path, "Sample space file");
  convert_data.add(convert, false);
  convert->add_option("--out", out, "Model file to write")->required();
  convert->add_option("--dot", dot, "Also write the staged tree as DOT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(kExitUsage, "usage", e.what());
  }

  try {
    st::SearchConfig cfg;
    cfg.seed = seed;
    cfg.max_iter = max_iter;
    cfg.score = score_from(score_kind);

    if (*learn) {
      const auto a = algorithm_from(algo);
      std::optional<std::vector<std::string>> order;
      if (!order_raw.empty()) order = split_names(order_raw);
      st::Dataset data = learn_data.read(order);
      auto names = data.space().names();
      std::optional<std::size_t> last;
      if (!fix_last.empty()) last = position(names, fix_last);
      st::ModelDocument doc;
      if (enumerate) {
        auto res = st::enumerate_orders(data, last, a, cfg);
        doc = finished_model(res.best.tree, res.data, res.best.trace);
      } else {
        if (last) {
          std::vector<std::size_t> perm;
          for (std::size_t i = 0; i < names.size(); ++i) {
            if (i != *last) perm.push_back(i);
          }
          perm.push_back(*last);
          data = data.permuted(perm);
        }
        auto res = st::run_search(a, st::default_start(a, data.space()), data, cfg);
        doc = finished_model(res.tree, data, res.trace);
      }
      st::write_model(out, doc);
      maybe_dot(dot, st::staged_tree_to_dot(doc.tree));
      print_report(*doc.score);
      return 0;
    }

    if (*refine) {
      const auto a = algorithm_from(algo);
      st::Dataset data = refine_data.read();
      st::Dag dag;
      if (dag_path.empty()) {
        st::LearnDagConfig lcfg;
        lcfg.score = cfg.score;
        lcfg.seed = seed;
        auto learned = st::learn_dag(data, lcfg);
        data = data.permuted(learned.order);
        dag = learned.dag;
      } else {
        std::tie(dag, data) = align(st::read_graph(dag_path), data);
      }
      if (!dag_out.empty()) st::write_text_atomic(dag_out, st::serialize_graph(dag, data.space().names()));
      auto res = st::refine_dag(dag, data, a, cfg);
      st::ModelDocument doc;
      doc.tree = res.search.tree;
      doc.aldag = res.aldag;
      doc.score = res.report;
      doc.trace = res.search.trace;
      st::write_model(out, doc);
      maybe_dot(dot, st::aldag_to_dot(res.aldag, data.space().names()));
      print_report(res.report);
      return 0;
    }

    if (*aldag) {
      const auto doc = st::read_model(model_path);
      const auto labelled = st::staged_tree_to_aldag(doc.tree).first;
      const auto names = doc.tree.space().names();
      st::write_text_atomic(out, st::serialize_graph(labelled, names));
      maybe_dot(dot, st::aldag_to_dot(labelled, names));
      return 0;
    }

    if (*dsep) {
      const auto graph = st::read_graph(dag_path);
      const auto names = st::topological_names(graph, graph.nodes);
      const auto g = st::to_dag(graph, names);
      auto to_set = [&](const std::vector<std::string>& raw) {
        std::vector<std::size_t> s;
        for (const auto& n : split_names(raw)) s.push_back(position(names, n));
        return s;
      };
      const auto A = to_set(a_raw);
      const auto B = to_set(b_raw);
      const auto C = to_set(c_raw);
      std::cout << (st::d_separated(g, A, B, C) ? "true" : "false") << '\n';
      return 0;
    }

    if (*subtree) {
      const auto doc = st::read_model(model_path);
      const auto names = doc.tree.space().names();
      st::Aldag labelled;
      if (!aldag_path.empty()) {
        labelled = st::to_aldag(st::read_graph(aldag_path), names);
      } else if (doc.aldag) {
        labelled = *doc.aldag;
      } else {
        labelled = st::staged_tree_to_aldag(doc.tree).first;
      }
      st::ModelDocument sub;
      sub.tree = st::dependence_subtree(doc.tree, labelled, position(names, target));
      st::write_model(out, sub);
      maybe_dot(dot, st::staged_tree_to_dot(sub.tree));
      return 0;
    }

    if (*score) {
      const auto doc = st::read_model(model_path);
      const auto data = score_data.read_over(doc.tree.space());
      print_report(st::score(doc.tree, data));
      return 0;
    }

    if (*convert) {
      const auto graph = st::read_graph(dag_path);
      if (space_path.empty() == convert_data.path.empty()) {
        throw UsageError("convert needs exactly one of --space and --data");
      }
      (void)space_opt;
      st::ModelDocument doc;
      if (!space_path.empty()) {
        const auto space = st::read_space(space_path);
        const auto order = st::topological_names(graph, space.names());
        std::vector<std::size_t> perm;
        for (const auto& n : order) perm.push_back(position(space.names(), n));
        const auto aligned = space.subspace(perm);
        doc.tree = st::dag_to_staged_tree(st::to_dag(graph, order), aligned);
        doc.aldag = st::staged_tree_to_aldag(doc.tree).first;
      } else {
        auto [g, data] = align(graph, convert_data.read());
        doc = finished_model(st::dag_to_staged_tree(g, data.space()), data, std::nullopt);
        print_report(*doc.score);
      }
      st::write_model(out, doc);
      maybe_dot(dot, st::staged_tree_to_dot(doc.tree));
      return 0;
    }
  } catch (const UsageError& e) {
    return report(kExitUsage, "usage", e.what());
  } catch (const st::DataError& e) {
    return report(kExitData, "data", e.what(), st::to_string(e.code()));
  } catch (const st::ModelError& e) {
    return report(kExitModel, "model", e.what());
  } catch (const st::UnsupportedSize& e) {
    return report(kExitUsage, "usage", e.what());
  } catch (const std::invalid_argument& e) {
    return report(kExitModel, "model", e.what());
  } catch (const std::exception& e) {
    return report(kExitIo, "io", e.what());
  }
  return 0;
}
