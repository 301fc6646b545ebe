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

#include "stagedtree/model_document.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"
#include "stagedtree/errors.hpp"

namespace stagedtree {

using Json = nlohmann::ordered_json;

namespace {

Json space_json(const SampleSpace& space) {
  Json vars = Json::array();
  for (const auto& v : space.variables()) {
    vars.push_back(Json{{"name", v.name}, {"levels", v.levels}});
  }
  return vars;
}

SampleSpace space_from(const Json& vars) {
  std::vector<Variable> out;
  for (const auto& v : vars) {
    out.push_back({v.at("name").get<std::string>(), v.at("levels").get<std::vector<std::string>>()});
  }
  return SampleSpace(std::move(out));
}

Json edges_json(const Dag& dag, const std::vector<std::string>& names,
                const std::map<Edge, DependenceLabel>* labels) {
  Json edges = Json::array();
  for (const auto& e : dag.edges()) {
    Json item{{"from", names.at(e.first)}, {"to", names.at(e.second)}};
    if (labels) item["label"] = std::string(to_string(labels->at(e)));
    edges.push_back(std::move(item));
  }
  return edges;
}

template <typename F>
auto as_model_error(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ModelError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelError(e.what());
  }
}

}  // namespace

std::string serialize(const ModelDocument& doc) {
  const StagedTree tree = doc.tree.canonical();
  const auto names = tree.space().names();
  Json j;
  j["format_version"] = doc.format_version;
  j["variables"] = space_json(tree.space());
  j["order"] = names;
  Json stages = Json::array();
  for (const auto& sv : tree.stage_vectors()) stages.push_back(sv);
  j["stages"] = std::move(stages);
  if (tree.is_fitted()) {
    Json fitted = Json::array();
    const auto& dists = tree.fitted().distributions;
    for (std::size_t d = 0; d < dists.size(); ++d) {
      for (const auto& [sym, probs] : dists[d]) {
        fitted.push_back(Json{{"depth", d}, {"stage", sym}, {"probs", probs}});
      }
    }
    j["fitted"] = std::move(fitted);
  }
  if (doc.aldag) {
    j["aldag"] = Json{{"edges", edges_json(doc.aldag->dag(), names, &doc.aldag->labels())}};
  }
  if (doc.score) {
    const auto& s = *doc.score;
    j["score"] = Json{{"log_likelihood", s.log_likelihood},
                      {"df", s.df},
                      {"bic", s.bic},
                      {"aic", s.aic},
                      {"n", s.n}};
  }
  if (doc.trace) {
    Json steps = Json::array();
    for (const auto& st : doc.trace->steps) {
      Json item{{"depth", st.depth}, {"kind", std::string(to_string(st.kind))}, {"stages", st.stages}};
      if (st.vertex) item["vertex"] = *st.vertex;
      item["score_before"] = st.score_before;
      item["score_after"] = st.score_after;
      steps.push_back(std::move(item));
    }
    j["trace"] = std::move(steps);
  }
  return j.dump(2) + "\n";
}

ModelDocument deserialize(std::string_view text) {
  return as_model_error([&] {
    const Json j = Json::parse(text);
    ModelDocument doc;
    doc.format_version = j.at("format_version").get<int>();
    if (doc.format_version != kModelFormatVersion) {
      throw ModelError("unsupported model format version " + std::to_string(doc.format_version));
    }
    SampleSpace space = space_from(j.at("variables"));
    if (j.contains("order") && j.at("order").get<std::vector<std::string>>() != space.names()) {
      throw ModelError("variable order does not match the variable list");
    }
    std::vector<std::vector<Symbol>> sv;
    for (const auto& s : j.at("stages")) sv.push_back(s.get<std::vector<Symbol>>());
    StagedTree tree(space, std::move(sv));
    if (j.contains("fitted")) {
      StageDistributions fit;
      fit.distributions.resize(space.size());
      for (const auto& item : j.at("fitted")) {
        const auto d = item.at("depth").get<std::size_t>();
        if (d >= space.size()) throw ModelError("fitted depth out of range");
        fit.distributions[d].emplace(item.at("stage").get<Symbol>(),
                                     item.at("probs").get<std::vector<double>>());
      }
      tree = tree.with_fit(std::move(fit));
    }
    doc.tree = std::move(tree);
    const auto names = space.names();
    if (j.contains("aldag")) {
      GraphDocument g;
      g.nodes = names;
      for (const auto& e : j.at("aldag").at("edges")) {
        auto key = std::pair(e.at("from").get<std::string>(), e.at("to").get<std::string>());
        g.edges.push_back(key);
        const auto label = parse_label(e.at("label").get<std::string>());
        if (!label) throw ModelError("unknown edge label");
        g.labels.emplace(key, *label);
      }
      doc.aldag = to_aldag(g, names);
    }
    if (j.contains("score")) {
      const auto& s = j.at("score");
      ScoreReport r;
      r.log_likelihood = s.at("log_likelihood").get<double>();
      r.df = s.at("df").get<std::size_t>();
      r.bic = s.at("bic").get<double>();
      r.aic = s.at("aic").get<double>();
      r.n = s.at("n").get<Count>();
      doc.score = r;
    }
    if (j.contains("trace")) {
      SearchTrace trace;
      for (const auto& item : j.at("trace")) {
        SearchStep st;
        st.depth = item.at("depth").get<std::size_t>();
        const auto kind = parse_move_kind(item.at("kind").get<std::string>());
        if (!kind) throw ModelError("unknown move kind");
        st.kind = *kind;
        st.stages = item.at("stages").get<std::vector<Symbol>>();
        if (item.contains("vertex")) st.vertex = item.at("vertex").get<Index>();
        st.score_before = item.at("score_before").get<double>();
        st.score_after = item.at("score_after").get<double>();
        trace.steps.push_back(std::move(st));
      }
      doc.trace = std::move(trace);
    }
    return doc;
  });
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot write '" + path.string() + "': " + ec.message());
  }
}

ModelDocument read_model(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::runtime_error& e) {
    throw ModelError(e.what());
  }
  return deserialize(text);
}

void write_model(const std::filesystem::path& path, const ModelDocument& doc) {
  write_text_atomic(path, serialize(doc));
}

std::string serialize_graph(const Dag& dag, const std::vector<std::string>& names) {
  Json j;
  j["nodes"] = names;
  j["edges"] = edges_json(dag, names, nullptr);
  return j.dump(2) + "\n";
}

std::string serialize_graph(const Aldag& aldag, const std::vector<std::string>& names) {
  Json j;
  j["nodes"] = names;
  j["edges"] = edges_json(aldag.dag(), names, &aldag.labels());
  return j.dump(2) + "\n";
}

GraphDocument parse_graph(std::string_view text) {
  return as_model_error([&] {
    const Json j = Json::parse(text);
    GraphDocument g;
    g.nodes = j.at("nodes").get<std::vector<std::string>>();
    for (const auto& e : j.at("edges")) {
      std::pair<std::string, std::string> key;
      if (e.is_array()) {
        key = {e.at(0).get<std::string>(), e.at(1).get<std::string>()};
      } else {
        key = {e.at("from").get<std::string>(), e.at("to").get<std::string>()};
        if (e.contains("label")) {
          const auto label = parse_label(e.at("label").get<std::string>());
          if (!label) throw ModelError("unknown edge label");
          g.labels.emplace(key, *label);
        }
      }
      for (const auto& n : {key.first, key.second}) {
        if (std::find(g.nodes.begin(), g.nodes.end(), n) == g.nodes.end()) {
          throw ModelError("edge mentions unknown node '" + n + "'");
        }
      }
      g.edges.push_back(std::move(key));
    }
    return g;
  });
}

GraphDocument read_graph(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::runtime_error& e) {
    throw ModelError(e.what());
  }
  return parse_graph(text);
}

std::vector<std::string> topological_names(const GraphDocument& graph,
                                           const std::vector<std::string>& preferred) {
  std::vector<std::string> pending = preferred;
  for (const auto& n : graph.nodes) {
    if (std::find(pending.begin(), pending.end(), n) == pending.end()) pending.push_back(n);
  }
  std::vector<std::string> out;
  while (!pending.empty()) {
    auto ready = std::find_if(pending.begin(), pending.end(), [&](const std::string& n) {
      return std::none_of(graph.edges.begin(), graph.edges.end(), [&](const auto& e) {
        return e.second == n &&
               std::find(pending.begin(), pending.end(), e.first) != pending.end();
      });
    });
    if (ready == pending.end()) throw ModelError("graph has a directed cycle");
    out.push_back(*ready);
    pending.erase(ready);
  }
  return out;
}

Dag to_dag(const GraphDocument& graph, const std::vector<std::string>& names) {
  auto pos = [&](const std::string& n) {
    auto it = std::find(names.begin(), names.end(), n);
    if (it == names.end()) throw ModelError("graph node '" + n + "' is not a model variable");
    return static_cast<std::size_t>(it - names.begin());
  };
  std::vector<Edge> edges;
  for (const auto& [from, to] : graph.edges) {
    const auto a = pos(from);
    const auto b = pos(to);
    if (a >= b) {
      throw ModelError("edge " + from + " -> " + to + " points against the variable order");
    }
    edges.emplace_back(a, b);
  }
  return as_model_error([&] { return Dag(names.size(), edges); });
}

Aldag to_aldag(const GraphDocument& graph, const std::vector<std::string>& names) {
  Dag dag = to_dag(graph, names);
  std::map<Edge, DependenceLabel> labels;
  for (const auto& e : graph.edges) {
    auto it = graph.labels.find(e);
    if (it == graph.labels.end()) {
      throw ModelError("edge " + e.first + " -> " + e.second + " has no label");
    }
    const auto a = static_cast<std::size_t>(std::find(names.begin(), names.end(), e.first) - names.begin());
    const auto b = static_cast<std::size_t>(std::find(names.begin(), names.end(), e.second) - names.begin());
    labels.emplace(Edge{a, b}, it->second);
  }
  return as_model_error([&] { return Aldag(std::move(dag), std::move(labels)); });
}

SampleSpace parse_space(std::string_view text) {
  return as_model_error([&] { return space_from(Json::parse(text).at("variables")); });
}

SampleSpace read_space(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const std::runtime_error& e) {
    throw ModelError(e.what());
  }
  return parse_space(text);
}

std::string serialize_space(const SampleSpace& space) {
  Json j;
  j["variables"] = space_json(space);
  return j.dump(2) + "\n";
}

}  // namespace stagedtree
