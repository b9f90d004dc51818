// Copyright 2026 The rxreturn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RXRETURN_GRID_HPP_
#define RXRETURN_GRID_HPP_

#include <cassert>
#include <cstddef>
#include <vector>

namespace rxreturn {

// Row-major dense 2-D array.
template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  const std::vector<T>& flat() const noexcept { return data_; }
  std::vector<T>& flat() noexcept { return data_; }

  bool operator==(const Grid2&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Dense 3-D array indexed (a, b, c) with c fastest.
template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  Grid3(std::size_t n0, std::size_t n1, std::size_t n2, T fill = T{})
      : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

  std::size_t extent(int axis) const noexcept {
    return axis == 0 ? n0_ : axis == 1 ? n1_ : n2_;
  }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t index(std::size_t a, std::size_t b, std::size_t c) const {
    assert(a < n0_ && b < n1_ && c < n2_);
    return (a * n1_ + b) * n2_ + c;
  }

  T& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return data_[index(a, b, c)];
  }
  const T& operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data_[index(a, b, c)];
  }

  T& operator[](std::size_t flat_index) { return data_[flat_index]; }
  const T& operator[](std::size_t flat_index) const {
    return data_[flat_index];
  }

  const std::vector<T>& flat() const noexcept { return data_; }

  bool operator==(const Grid3&) const = default;

 private:
  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
  std::size_t n2_ = 0;
  std::vector<T> data_;
};

}  // namespace rxreturn

#endif  // RXRETURN_GRID_HPP_
