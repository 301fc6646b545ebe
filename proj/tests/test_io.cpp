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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dot_parser.hpp"
#include "oracles.hpp"
#include "stagedtree/csv.hpp"
#include "stagedtree/dot.hpp"
#include "stagedtree/errors.hpp"
#include "stagedtree/learning.hpp"
#include "stagedtree/model_document.hpp"

using namespace stagedtree;

namespace {

Dataset parse(const std::string& text, CsvOptions o = {}) {
  std::istringstream in(text);
  return parse_csv(in, o);
}

DataErrorCode error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.code();
  }
  FAIL("no DataError thrown");
  return DataErrorCode::kMalformed;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("stagedtree_test_" + name);
}

}  // namespace

TEST_CASE("csv drops rows with missing values") {
  const auto d = parse("A,B\nx,u\nNA,v\ny,v\n");
  CHECK(d.n() == 2);
  CHECK(d.space().variable(0).levels == std::vector<std::string>{"x", "y"});
}

TEST_CASE("csv quoting and line endings") {
  const auto d = parse("\"A\",B\r\n\"x,1\",\"say \"\"hi\"\"\"\r\ny,u\r\n\r\n");
  CHECK(d.n() == 2);
  CHECK(d.space().variable(0).levels[0] == "x,1");
  CHECK(d.space().variable(1).levels[0] == "say \"hi\"");
}

TEST_CASE("csv header-less files get positional names") {
  CsvOptions o;
  o.header = false;
  const auto d = parse("a,b\nc,d\n", o);
  CHECK(d.space().names() == std::vector<std::string>{"V1", "V2"});
  CHECK(d.n() == 2);
}

TEST_CASE("csv order permutes the indexing but keeps n") {
  const std::string text = "A,B,C\nx,u,p\ny,v,q\ny,u,q\n";
  CsvOptions o;
  o.order = std::vector<std::string>{"C", "A"};
  const auto d = parse(text, o);
  CHECK(d.space().names() == std::vector<std::string>{"C", "A"});
  CHECK(d.n() == parse(text).n());
}

TEST_CASE("csv error codes") {
  CsvOptions order;
  order.order = std::vector<std::string>{"Z"};
  CHECK(error_code([&] { parse("A,B\nx,u\ny,v\n", order); }) == DataErrorCode::kUnknownVariable);
  CHECK(error_code([] { parse("A,B\nNA,u\n,v\n"); }) == DataErrorCode::kEmptyAfterDrop);
  CHECK(error_code([] { read_csv("/nonexistent/file.csv"); }) == DataErrorCode::kUnreadable);
  CHECK(error_code([] { parse("A,B\nx\n"); }) == DataErrorCode::kMalformed);
  CsvOptions levels;
  levels.levels["A"] = {"x", "y"};
  CHECK(error_code([&] { parse("A,B\nz,u\nx,v\n", levels); }) == DataErrorCode::kUnknownLevel);
  CHECK(error_code([] { parse("A,B\nx,u\nx,v\n"); }) == DataErrorCode::kMalformed);
  CsvOptions counts;
  counts.count_column = "n";
  CHECK(error_code([&] { parse("A,n\nx,two\ny,1\n", counts); }) == DataErrorCode::kMalformed);
}

TEST_CASE("Titanic fixture") {
  const auto d = oracle::titanic();
  CHECK(d.n() == 2201);
  CHECK(d.space().total_size() == 32);
  CHECK(d.space().variable(0).levels == std::vector<std::string>{"1st", "2nd", "3rd", "Crew"});
  CHECK(d.space().variable(1).levels == std::vector<std::string>{"Male", "Female"});
  CHECK(d.space().variable(2).levels == std::vector<std::string>{"No", "Yes"});
  CHECK(d.space().variable(3).levels == std::vector<std::string>{"Child", "Adult"});
}

TEST_CASE("csv round trip through expanded rows and count tables") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 20; ++k) {
    const auto space = oracle::random_space(rng, 1 + rng() % 4, 3);
    auto data = oracle::random_data(rng, space, 1 + rng() % 100);
    // Pin the levels so unobserved ones survive the trip.
    CsvOptions o;
    for (const auto& v : space.variables()) o.levels[v.name] = v.levels;
    std::ostringstream rows;
    write_csv(rows, data);
    CHECK(parse(rows.str(), o) == data);
    std::ostringstream table;
    write_csv(table, data, true);
    o.count_column = "count";
    CHECK(parse(table.str(), o) == data);
  }
}

TEST_CASE("model documents are byte stable") {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 30; ++k) {
    const auto space = oracle::random_space(rng, 2 + rng() % 3, 3);
    const auto data = oracle::random_data(rng, space, 200);
    const auto r = run_search(static_cast<SearchAlgorithm>(k % 3),
                              default_start(static_cast<SearchAlgorithm>(k % 3), space), data);
    ModelDocument doc;
    doc.tree = r.tree;
    doc.aldag = staged_tree_to_aldag(r.tree).first;
    doc.score = score(r.tree, data);
    doc.trace = r.trace;
    const auto text = serialize(doc);
    const auto back = deserialize(text);
    REQUIRE(serialize(back) == text);
    REQUIRE(back.tree == doc.tree.canonical());
    REQUIRE(back.aldag == doc.aldag);
    REQUIRE(back.score == doc.score);
    REQUIRE(back.trace == doc.trace);
  }
}

TEST_CASE("model documents reject malformed input") {
  CHECK_THROWS_AS(deserialize("not json"), ModelError);
  CHECK_THROWS_AS(deserialize("{\"format_version\": 99}"), ModelError);
  const auto space = oracle::make_space({2, 2});
  ModelDocument doc;
  doc.tree = StagedTree::saturated(space);
  CHECK_NOTHROW(deserialize(serialize(doc)));
  const std::string vars =
      R"("variables": [{"name": "a", "levels": ["x", "y"]}, {"name": "b", "levels": ["u", "v"]}])";
  CHECK_NOTHROW(deserialize(R"({"format_version": 1, )" + vars + R"(, "stages": [[0, 1]]})"));
  CHECK_THROWS_AS(deserialize(R"({"format_version": 1, )" + vars + R"(, "stages": [[0]]})"), ModelError);
  CHECK_THROWS_AS(deserialize(R"({"format_version": 1, )" + vars +
                              R"(, "stages": [[0, 0]], "fitted": [{"depth": 0, "stage": 0, "probs": [0.5, 0.6]}]})"),
                  ModelError);
  CHECK_THROWS_AS(read_model("/nonexistent/model.json"), ModelError);
}

TEST_CASE("unfitted models serialise without distributions") {
  ModelDocument doc;
  doc.tree = StagedTree::independence(oracle::make_space({2, 3}));
  const auto text = serialize(doc);
  CHECK(text.find("fitted") == std::string::npos);
  CHECK_FALSE(deserialize(text).tree.is_fitted());
}

TEST_CASE("graph documents") {
  const auto names = oracle::titanic().space().names();
  const auto text = serialize_graph(oracle::titanic_bn(), names);
  const auto g = parse_graph(text);
  CHECK(to_dag(g, names) == oracle::titanic_bn());
  // A permuted node list still reads against the variable order.
  const auto order = topological_names(g, {"Age", "Survived", "Gender", "Class"});
  CHECK(order == std::vector<std::string>{"Class", "Gender", "Survived", "Age"});
  CHECK_THROWS_AS(to_dag(g, {"Age", "Survived", "Gender", "Class"}), ModelError);
  CHECK_THROWS_AS(parse_graph("{\"nodes\": [\"a\"], \"edges\": [[\"a\", \"b\"]]}"), ModelError);
  const auto cyc = parse_graph("{\"nodes\": [\"a\", \"b\"], \"edges\": [[\"a\", \"b\"], [\"b\", \"a\"]]}");
  CHECK_THROWS_AS(topological_names(cyc, cyc.nodes), ModelError);

  const auto tree = StagedTree(oracle::titanic().space(),
                               {{0, 0, 1, 2},
                                {0, 1, 2, 3, 2, 0, 4, 3},
                                {0, 1, 0, 0, 0, 2, 0, 3, 1, 3, 4, 4, 0, 0, 0, 0}});
  const auto aldag = staged_tree_to_aldag(tree).first;
  CHECK(to_aldag(parse_graph(serialize_graph(aldag, names)), names) == aldag);
}

TEST_CASE("sample space documents") {
  const auto space = oracle::titanic().space();
  CHECK(parse_space(serialize_space(space)) == space);
  CHECK_THROWS_AS(parse_space("{\"variables\": [{\"name\": \"a\", \"levels\": [\"x\"]}]}"), ModelError);
}

TEST_CASE("atomic writes replace the target") {
  const auto path = temp_file("atomic.txt");
  write_text_atomic(path, "one");
  write_text_atomic(path, "two");
  CHECK(read_text(path) == "two");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  CHECK_THROWS(write_text_atomic("/nonexistent/dir/file.txt", "x"));
  std::filesystem::remove(path);
}

TEST_CASE("empty ALDAG DOT has two nodes and no edges") {
  const Aldag a(Dag(2), {});
  const auto g = dot::parse(aldag_to_dot(a, {"A", "B"}));
  CHECK(g.directed);
  CHECK(g.nodes.size() == 2);
  CHECK(g.edges.empty());
}

TEST_CASE("reference HC ALDAG DOT colours") {
  const auto space = oracle::titanic().space();
  const StagedTree t(space, {{0, 0, 1, 2},
                             {0, 1, 2, 3, 2, 0, 4, 3},
                             {0, 1, 0, 0, 0, 2, 0, 3, 1, 3, 4, 4, 0, 0, 0, 0}});
  const auto text = aldag_to_dot(staged_tree_to_aldag(t).first, space.names());
  const auto g = dot::parse(text);
  REQUIRE(g.edges.size() == 6);
  std::map<std::string, int> colours;
  for (const auto& e : g.edges) {
    ++colours[e.attrs.at("color")];
    const auto label = parse_label(e.attrs.at("label"));
    REQUIRE(label.has_value());
    CHECK(e.attrs.at("color") == label_color(*label));
  }
  CHECK(colours == std::map<std::string, int>{{"blue", 3}, {"red", 2}, {"green", 1}});
  CHECK(aldag_to_dot(staged_tree_to_aldag(t).first, space.names()) == text);
}

TEST_CASE("staged tree DOT has one node per vertex") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    const auto space = oracle::random_space(rng, 1 + rng() % 3, 3);
    const auto t = oracle::random_tree(rng, space);
    const auto text = staged_tree_to_dot(t);
    const auto g = dot::parse(text);
    Index vertices = 0;
    for (std::size_t d = 0; d <= space.size(); ++d) vertices += space.prefix_size(d);
    CHECK(g.nodes.size() == vertices);
    CHECK(g.edges.size() == vertices - 1);
    // Same stage, same fill.
    for (std::size_t d = 1; d < space.size(); ++d) {
      const auto s = t.stages(d);
      Index offset = 0;
      for (std::size_t e = 0; e < d; ++e) offset += space.prefix_size(e);
      for (Index u = 0; u < s.size(); ++u) {
        for (Index v = 0; v < s.size(); ++v) {
          const auto& fu = g.nodes.at("v" + std::to_string(offset + u)).at("stage");
          const auto& fv = g.nodes.at("v" + std::to_string(offset + v)).at("stage");
          REQUIRE((s[u] == s[v]) == (fu == fv));
        }
      }
    }
    CHECK(staged_tree_to_dot(t) == text);
  }
}

TEST_CASE("DOT parser rejects junk") {
  CHECK_THROWS(dot::parse("digraph { a -> }"));
  CHECK_THROWS(dot::parse("tree { }"));
}
