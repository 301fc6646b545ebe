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

#include "stagedtree/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "stagedtree/errors.hpp"

namespace stagedtree {

namespace {

std::vector<std::vector<std::string>> tokenize(std::istream& in, char delim) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char c;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      end_field();
    } else if (c == '\n') {
      end_row();
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get(c);
      end_row();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw DataError(DataErrorCode::kMalformed, "unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options) {
  auto rows = tokenize(in, options.delimiter);
  if (rows.empty()) throw DataError(DataErrorCode::kEmptyAfterDrop, "CSV input has no rows");

  std::vector<std::string> header;
  std::size_t first = 0;
  if (options.header) {
    header = rows[0];
    first = 1;
  } else {
    for (std::size_t k = 0; k < rows[0].size(); ++k) header.push_back("V" + std::to_string(k + 1));
  }
  auto column_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw DataError(DataErrorCode::kUnknownVariable, "unknown variable '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };

  std::optional<std::size_t> count_col;
  if (options.count_column) count_col = column_of(*options.count_column);
  std::vector<std::string> names;
  if (options.order) {
    names = *options.order;
  } else {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (k != count_col) names.push_back(header[k]);
    }
  }
  std::vector<std::size_t> cols;
  for (const auto& n : names) cols.push_back(column_of(n));
  for (const auto& [name, levels] : options.levels) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw DataError(DataErrorCode::kUnknownVariable, "levels given for unknown variable '" +
                                                           name + "'");
    }
  }

  auto is_na = [&](const std::string& v) {
    return std::find(options.na_tokens.begin(), options.na_tokens.end(), v) !=
           options.na_tokens.end();
  };

  std::vector<std::vector<std::string>> levels(names.size());
  std::vector<std::unordered_map<std::string, std::size_t>> lookup(names.size());
  std::vector<bool> fixed(names.size(), false);
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (auto it = options.levels.find(names[k]); it != options.levels.end()) {
      levels[k] = it->second;
      fixed[k] = true;
      for (std::size_t l = 0; l < levels[k].size(); ++l) lookup[k].emplace(levels[k][l], l);
    }
  }

  std::vector<std::pair<std::vector<std::size_t>, Count>> kept;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != header.size()) {
      throw DataError(DataErrorCode::kMalformed, "row " + std::to_string(r + 1) + " has " +
                                                     std::to_string(row.size()) +
                                                     " fields, expected " +
                                                     std::to_string(header.size()));
    }
    Count weight = 1;
    if (count_col) {
      const auto& text = row[*count_col];
      if (is_na(text)) continue;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), weight);
      if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw DataError(DataErrorCode::kMalformed, "invalid count '" + text + "' in row " +
                                                       std::to_string(r + 1));
      }
    }
    bool missing = false;
    for (auto c : cols) missing = missing || is_na(row[c]);
    if (missing) continue;
    std::vector<std::size_t> obs(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto& v = row[cols[k]];
      auto it = lookup[k].find(v);
      if (it == lookup[k].end()) {
        if (fixed[k]) {
          throw DataError(DataErrorCode::kUnknownLevel,
                          "level '" + v + "' is not a level of '" + names[k] + "'");
        }
        it = lookup[k].emplace(v, levels[k].size()).first;
        levels[k].push_back(v);
      }
      obs[k] = it->second;
    }
    // Zero-count rows of a count table still declare their levels.
    if (weight > 0) kept.emplace_back(std::move(obs), weight);
  }
  if (kept.empty()) {
    throw DataError(DataErrorCode::kEmptyAfterDrop, "no complete rows left after dropping missing values");
  }

  std::vector<Variable> vars;
  for (std::size_t k = 0; k < names.size(); ++k) vars.push_back({names[k], levels[k]});
  SampleSpace space;
  try {
    space = SampleSpace(std::move(vars));
  } catch (const std::invalid_argument& e) {
    throw DataError(DataErrorCode::kMalformed, e.what());
  }
  std::map<Index, Count> counts;
  for (const auto& [obs, w] : kept) counts[lex_index(space, obs)] += w;
  return Dataset(std::move(space), std::move(counts));
}

Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(DataErrorCode::kUnreadable, "cannot read '" + path.string() + "'");
  return parse_csv(in, options);
}

namespace {

std::string quote(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos && !v.empty() && v != "NA") return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& data, bool with_counts) {
  const auto& space = data.space();
  for (std::size_t k = 0; k < space.size(); ++k) out << (k ? "," : "") << quote(space.variable(k).name);
  if (with_counts) out << ",count";
  out << '\n';
  for (auto [cell, c] : data.counts()) {
    const auto x = lex_unindex(space, space.size(), cell);
    std::ostringstream line;
    for (std::size_t k = 0; k < x.size(); ++k) {
      line << (k ? "," : "") << quote(space.variable(k).levels[x[k]]);
    }
    if (with_counts) {
      out << line.str() << ',' << c << '\n';
    } else {
      for (Count r = 0; r < c; ++r) out << line.str() << '\n';
    }
  }
}

}  // namespace stagedtree
