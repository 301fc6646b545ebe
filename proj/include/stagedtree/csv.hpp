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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stagedtree/dataset.hpp"

namespace stagedtree {

struct CsvOptions {
  bool header = true;
  // Variables to keep, in this order; all columns (minus the count column) when empty.
  std::optional<std::vector<std::string>> order;
  // Explicit level order per variable; otherwise levels are taken in order of
  // first appearance.
  std::map<std::string, std::vector<std::string>> levels;
  // Column holding a nonnegative integer multiplicity for each row.
  std::optional<std::string> count_column;
  // Field values treated as missing; rows with a missing value are dropped.
  std::vector<std::string> na_tokens{"", "NA"};
  char delimiter = ',';
};

// Parses an RFC 4180 style CSV (quoted fields, doubled quotes, CRLF).
// Throws DataError with a code identifying the failure.
Dataset read_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvOptions& options = {});

// One row per observation (or, with `with_counts`, one row per nonempty cell
// followed by a count column named "count").
void write_csv(std::ostream& out, const Dataset& data, bool with_counts = false);

}  // namespace stagedtree
