/* Copyright 2026 The GLQA Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "glqa/tensor.h"

#include <cmath>

namespace glqa {

std::string ShapeString(const Shape& s) {
  return "[" + std::to_string(s[0]) + "x" + std::to_string(s[1]) + "]";
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("tensor: " + std::to_string(data_.size()) +
                     " values do not fill shape " +
                     ShapeString({rows, cols}));
  }
}

Tensor Tensor::Row(std::initializer_list<double> values) {
  return Tensor(1, values.size(), std::vector<double>(values));
}

Tensor Tensor::Row(std::span<const double> values) {
  return Tensor(1, values.size(),
                std::vector<double>(values.begin(), values.end()));
}

Tensor Tensor::Identity(std::size_t n) {
  Tensor t(n, n);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 1.0;
  return t;
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item: expected a scalar, got " + ShapeString(shape()));
  }
  return data_[0];
}

void Tensor::Fill(double v) {
  for (double& x : data_) x = v;
}

void Tensor::AddInPlace(const Tensor& o) {
  if (!SameShape(o)) {
    throw ShapeError("add_in_place: incompatible shapes " +
                     ShapeString(shape()) + " and " + ShapeString(o.shape()));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
}

double Tensor::Norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

}  // namespace glqa
