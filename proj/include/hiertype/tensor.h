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

#ifndef HIERTYPE_TENSOR_H_
#define HIERTYPE_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hiertype {

using Vec = std::vector<double>;

// Dense row-major tensor of doubles. Rank 0 (empty shape) means "absent".
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, double fill = 0.0);

  const std::vector<size_t> &shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t dim(size_t axis) const { return shape_[axis]; }
  size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double *data() { return values_.data(); }
  const double *data() const { return values_.data(); }

  double &operator[](size_t i) { return values_[i]; }
  double operator[](size_t i) const { return values_[i]; }

  // Rank-2 access.
  double &at(size_t r, size_t c) { return values_[r * shape_[1] + c]; }
  double at(size_t r, size_t c) const { return values_[r * shape_[1] + c]; }

  // Rank-3 access.
  double &at(size_t k, size_t r, size_t c) {
    return values_[(k * shape_[1] + r) * shape_[2] + c];
  }
  double at(size_t k, size_t r, size_t c) const {
    return values_[(k * shape_[1] + r) * shape_[2] + c];
  }

  // Slice along the first axis.
  std::span<double> row(size_t r);
  std::span<const double> row(size_t r) const;

  void Fill(double v);

  bool operator==(const Tensor &other) const = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> values_;
};

std::string ShapeString(const std::vector<size_t> &shape);

// Small dense kernels over spans. Sizes are checked by the callers.
double Dot(std::span<const double> a, std::span<const double> b);

// out = m * x for a rank-2 tensor m.
void MatVec(const Tensor &m, std::span<const double> x, std::span<double> out);

// out = m^T * x for a rank-2 tensor m.
void MatTVec(const Tensor &m, std::span<const double> x, std::span<double> out);

// m += scale * a * b^T.
void AddOuter(Tensor &m, std::span<const double> a, std::span<const double> b,
              double scale = 1.0);

// y += scale * x.
void Axpy(double scale, std::span<const double> x, std::span<double> y);

}  // namespace hiertype

#endif  // HIERTYPE_TENSOR_H_
