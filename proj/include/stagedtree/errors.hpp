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

#include <stdexcept>
#include <string>

namespace stagedtree {

// Operation called on an object that is not in the required state (for example
// asking an unfitted tree for probabilities).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A request exceeds a hard size guard (factorial order search, dense tables).
class UnsupportedSize : public std::length_error {
 public:
  using std::length_error::length_error;
};

enum class DataErrorCode {
  kUnreadable,
  kEmptyAfterDrop,
  kUnknownVariable,
  kUnknownLevel,
  kMalformed,
};

// Failures while ingesting observations. The code distinguishes the causes so the
// CLI can report them in machine-readable form.
class DataError : public std::runtime_error {
 public:
  DataError(DataErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  DataErrorCode code() const { return code_; }

 private:
  DataErrorCode code_;
};

// Malformed or inconsistent model documents.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const char* to_string(DataErrorCode code);

}  // namespace stagedtree
