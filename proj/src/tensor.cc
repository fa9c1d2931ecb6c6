// Copyright 2026 The Hiertype Authors.
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

#include "hiertype/tensor.h"

#include <algorithm>
#include <functional>
#include <numeric>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace hiertype {

Tensor::Tensor(std::vector<size_t> shape, double fill)
    : shape_(std::move(shape)),
      values_(std::accumulate(shape_.begin(), shape_.end(), size_t{1},
                              std::multiplies<>()),
              fill) {
  if (shape_.empty()) values_.clear();
}

std::span<double> Tensor::row(size_t r) {
  const size_t stride = values_.size() / shape_[0];
  return std::span<double>(values_).subspan(r * stride, stride);
}

std::span<const double> Tensor::row(size_t r) const {
  const size_t stride = values_.size() / shape_[0];
  return std::span<const double>(values_).subspan(r * stride, stride);
}

void Tensor::Fill(double v) { std::fill(values_.begin(), values_.end(), v); }

std::string ShapeString(const std::vector<size_t> &shape) {
  return fmt::format("[{}]", fmt::join(shape, "x"));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void MatVec(const Tensor &m, std::span<const double> x, std::span<double> out) {
  const size_t rows = m.dim(0), cols = m.dim(1);
  for (size_t r = 0; r < rows; ++r) {
    const double *w = m.data() + r * cols;
    double s = 0.0;
    for (size_t c = 0; c < cols; ++c) s += w[c] * x[c];
    out[r] = s;
  }
}

void MatTVec(const Tensor &m, std::span<const double> x, std::span<double> out) {
  const size_t rows = m.dim(0), cols = m.dim(1);
  std::fill(out.begin(), out.end(), 0.0);
  for (size_t r = 0; r < rows; ++r) {
    const double *w = m.data() + r * cols;
    const double xr = x[r];
    for (size_t c = 0; c < cols; ++c) out[c] += w[c] * xr;
  }
}

void AddOuter(Tensor &m, std::span<const double> a, std::span<const double> b,
              double scale) {
  const size_t cols = m.dim(1);
  for (size_t r = 0; r < a.size(); ++r) {
    const double ar = scale * a[r];
    if (ar == 0.0) continue;
    double *w = m.data() + r * cols;
    for (size_t c = 0; c < cols; ++c) w[c] += ar * b[c];
  }
}

void Axpy(double scale, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += scale * x[i];
}

}  // namespace hiertype
