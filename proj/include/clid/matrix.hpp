/*
 * Copyright 2026 The clid Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLID_MATRIX_HPP
#define CLID_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace clid {

// Dense row-major matrix of doubles. All model math runs in 64-bit so the
// finite-difference gradient checks are meaningful.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

namespace kernels {

// Kernel execution mode. Parallel kernels split work across rows of the
// output, so each output element is accumulated in the same order as the
// serial kernel and the results are bitwise identical.
enum class Mode { Serial, Parallel };

// Process-wide default used by the model code; tests flip it to compare.
Mode& default_mode();

// out(m×n) = A(m×k) · B(k×n)
void matmul(const Matrix& a, const Matrix& b, Matrix& out, Mode mode = default_mode());

// out(m×n) = A(m×k) · B(n×k)ᵀ
void matmul_transb(const Matrix& a, const Matrix& b, Matrix& out,
                   Mode mode = default_mode());

// out(k×n) = A(m×k)ᵀ · B(m×n); used for weight gradients.
void matmul_transa(const Matrix& a, const Matrix& b, Matrix& out,
                   Mode mode = default_mode());

// out(n×c) = squared Euclidean distances between points(n×d) and centers(c×d).
void pairwise_sqdist(const Matrix& points, const Matrix& centers, Matrix& out,
                     Mode mode = default_mode());

}  // namespace kernels

}  // namespace clid

#endif  // CLID_MATRIX_HPP
