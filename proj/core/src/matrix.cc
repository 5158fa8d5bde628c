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

#include "sqen/matrix.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sqen/errors.h"

namespace sqen {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("Matrix dimensions must be positive, got " +
                          ShapeString());
  }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("Matrix dimensions must be positive, got " +
                          ShapeString());
  }
  if (entries_.size() != rows * cols) {
    throw InvalidArgument("Matrix " + ShapeString() + " needs " +
                          std::to_string(rows * cols) + " entries, got " +
                          std::to_string(entries_.size()));
  }
}

Matrix Matrix::Identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::ShapeString() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

std::vector<double> MatVec(const Matrix& m, std::span<const double> v) {
  if (v.size() != m.cols()) {
    throw InvalidArgument("MatVec: matrix " + m.ShapeString() +
                          " vs vector of length " + std::to_string(v.size()));
  }
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

void AffineInto(const Matrix& m, std::span<const double> v,
                std::span<const double> bias, std::span<double> out) {
  if (v.size() != m.cols() || bias.size() != m.rows() ||
      out.size() != m.rows()) {
    throw InvalidArgument("AffineInto: matrix " + m.ShapeString() +
                          " vs input " + std::to_string(v.size()) +
                          ", bias " + std::to_string(bias.size()) +
                          ", output " + std::to_string(out.size()));
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto row = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * v[j];
    out[i] = acc + bias[i];
  }
}

void TransposedMatVecInto(const Matrix& m, std::span<const double> v,
                          std::span<double> out) {
  if (v.size() != m.rows() || out.size() != m.cols()) {
    throw InvalidArgument("TransposedMatVecInto: matrix " + m.ShapeString() +
                          " vs vector " + std::to_string(v.size()) +
                          ", output " + std::to_string(out.size()));
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += row[j] * vi;
  }
}

void AddOuterProduct(Matrix& m, double alpha, std::span<const double> u,
                     std::span<const double> v) {
  if (u.size() != m.rows() || v.size() != m.cols()) {
    throw InvalidArgument("AddOuterProduct: matrix " + m.ShapeString() +
                          " vs " + std::to_string(u.size()) + "x" +
                          std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double a = alpha * u[i];
    if (a == 0.0) continue;
    auto row = m.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += a * v[j];
  }
}

double FrobeniusNorm(const Matrix& m) {
  double sum = 0.0;
  for (double w : m.entries()) sum += w * w;
  return std::sqrt(sum);
}

}  // namespace sqen
