// Copyright 2026 The sqen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQEN_MATRIX_H_
#define SQEN_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sqen {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  // Zero-filled rows x cols matrix. Both dimensions must be positive.
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return entries_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return entries_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }

  std::span<double> entries() { return entries_; }
  std::span<const double> entries() const { return entries_; }

  // "RxC", used in error messages.
  std::string ShapeString() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// m * v. Throws InvalidArgument when v.size() != m.cols().
std::vector<double> MatVec(const Matrix& m, std::span<const double> v);

// out = m * v + bias, writing into a caller-owned buffer of size m.rows().
void AffineInto(const Matrix& m, std::span<const double> v,
                std::span<const double> bias, std::span<double> out);

// out = m^T * v, out has size m.cols().
void TransposedMatVecInto(const Matrix& m, std::span<const double> v,
                          std::span<double> out);

// m += alpha * u * v^T.
void AddOuterProduct(Matrix& m, double alpha, std::span<const double> u,
                     std::span<const double> v);

// Frobenius norm, accumulated in row-major order.
double FrobeniusNorm(const Matrix& m);

}  // namespace sqen

#endif  // SQEN_MATRIX_H_
