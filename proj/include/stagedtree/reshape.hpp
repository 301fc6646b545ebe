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

// Column-major reshape algebra on flat vectors. A stage vector reshaped with
// m = |X_j| rows puts the levels of X_j on the rows and the remaining
// coordinates on the columns; vec(A^t) then advances to the next variable.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace stagedtree {

template <typename T>
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw std::invalid_argument("matrix data does not match its dimensions");
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
  std::span<const T> column(std::size_t c) const {
    return std::span<const T>(data_).subspan(c * rows_, rows_);
  }
  // Column-wise vectorization.
  const std::vector<T>& vec() const { return data_; }

  ColumnMatrix transposed() const {
    std::vector<T> out;
    out.reserve(data_.size());
    // columns of A^t are rows of A
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out.push_back((*this)(r, c));
    }
    return ColumnMatrix(cols_, rows_, std::move(out));
  }

  bool operator==(const ColumnMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// mat^{m,n}(a) with n = len(a) / m, filled column by column.
template <typename T>
ColumnMatrix<T> reshape_mat(std::vector<T> a, std::size_t m) {
  if (m == 0 || a.size() % m != 0) {
    throw std::invalid_argument("row count does not divide the vector length");
  }
  const std::size_t n = a.size() / m;
  return ColumnMatrix<T>(m, n, std::move(a));
}

// vec(A^t): the rows of A concatenated.
template <typename T>
std::vector<T> vec_transpose(const ColumnMatrix<T>& a) {
  return a.transposed().vec();
}

// First row of A, used when X_j has no effect and is dropped from the contexts.
template <typename T>
std::vector<T> first_row(const ColumnMatrix<T>& a) {
  std::vector<T> out;
  out.reserve(a.cols());
  for (std::size_t c = 0; c < a.cols(); ++c) out.push_back(a(0, c));
  return out;
}

}  // namespace stagedtree
