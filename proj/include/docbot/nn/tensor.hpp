// Copyright 2026 The docbot Authors
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

#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace docbot::nn {

// Dimensions of a tensor of rank 0..4. Rank 0 is a scalar with one element.
class Shape {
 public:
  static constexpr size_t kMaxRank = 4;

  Shape() = default;
  Shape(std::initializer_list<size_t> dims);
  explicit Shape(std::span<const size_t> dims);

  size_t rank() const { return rank_; }
  size_t operator[](size_t i) const { return dims_[i]; }
  size_t numel() const;
  std::vector<size_t> dims() const { return {dims_.begin(), dims_.begin() + rank_}; }
  std::string str() const;

  bool operator==(const Shape &o) const;

 private:
  std::array<size_t, kMaxRank> dims_{};
  size_t rank_ = 0;
};

// Dense row-major array of doubles. Plain value type.
class Tensor {
 public:
  Tensor() : data_(1, 0.0) {}
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor scalar(double v) { return Tensor(Shape{}, {v}); }
  static Tensor vector(std::vector<double> v);
  static Tensor matrix(size_t rows, size_t cols, std::vector<double> v);

  const Shape &shape() const { return shape_; }
  size_t rank() const { return shape_.rank(); }
  size_t dim(size_t i) const { return shape_[i]; }
  size_t size() const { return data_.size(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  const std::vector<double> &values() const { return data_; }

  double operator[](size_t i) const { return data_[i]; }
  double &operator[](size_t i) { return data_[i]; }
  double at(size_t r, size_t c) const { return data_[r * shape_[1] + c]; }
  double &at(size_t r, size_t c) { return data_[r * shape_[1] + c]; }
  double item() const { return data_[0]; }

  void fill(double v);

  bool operator==(const Tensor &o) const {
    return shape_ == o.shape_ && data_ == o.data_;
  }

 private:
  Shape shape_;
  std::vector<double> data_;
};

}  // namespace docbot::nn
