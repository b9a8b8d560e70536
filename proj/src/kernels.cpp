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

#include "clid/matrix.hpp"

#include <cassert>
#include <cstdint>

namespace clid::kernels {

Mode& default_mode() {
    static Mode mode = Mode::Parallel;
    return mode;
}

namespace {

inline void matmul_row(const Matrix& a, const Matrix& b, Matrix& out, std::size_t i) {
    const std::size_t k = a.cols();
    const std::size_t n = b.cols();
    const double* arow = a.data() + i * k;
    double* orow = out.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] = 0.0;
    for (std::size_t p = 0; p < k; ++p) {
        const double av = arow[p];
        if (av == 0.0) continue;
        const double* brow = b.data() + p * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
}

inline void matmul_transb_row(const Matrix& a, const Matrix& b, Matrix& out,
                              std::size_t i) {
    const std::size_t k = a.cols();
    const std::size_t n = b.rows();
    const double* arow = a.data() + i * k;
    double* orow = out.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) {
        const double* brow = b.data() + j * k;
        double acc = 0.0;
        for (std::size_t p = 0; p < k; ++p) acc += arow[p] * brow[p];
        orow[j] = acc;
    }
}

inline void matmul_transa_row(const Matrix& a, const Matrix& b, Matrix& out,
                              std::size_t i) {
    // Row i of out = column i of A dotted against B, accumulated over samples.
    const std::size_t m = a.rows();
    const std::size_t n = b.cols();
    double* orow = out.data() + i * n;
    for (std::size_t j = 0; j < n; ++j) orow[j] = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        const double av = a.at(s, i);
        if (av == 0.0) continue;
        const double* brow = b.data() + s * n;
        for (std::size_t j = 0; j < n; ++j) orow[j] += av * brow[j];
    }
}

inline void sqdist_row(const Matrix& points, const Matrix& centers, Matrix& out,
                       std::size_t i) {
    const std::size_t d = points.cols();
    const std::size_t c = centers.rows();
    const double* p = points.data() + i * d;
    double* orow = out.data() + i * c;
    for (std::size_t j = 0; j < c; ++j) {
        const double* q = centers.data() + j * d;
        double acc = 0.0;
        for (std::size_t t = 0; t < d; ++t) {
            const double diff = p[t] - q[t];
            acc += diff * diff;
        }
        orow[j] = acc;
    }
}

}  // namespace

void matmul(const Matrix& a, const Matrix& b, Matrix& out, Mode mode) {
    assert(a.cols() == b.rows());
    out = Matrix(a.rows(), b.cols());
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < m; ++i) matmul_row(a, b, out, i);
    } else {
        for (std::int64_t i = 0; i < m; ++i) matmul_row(a, b, out, i);
    }
}

void matmul_transb(const Matrix& a, const Matrix& b, Matrix& out, Mode mode) {
    assert(a.cols() == b.cols());
    out = Matrix(a.rows(), b.rows());
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < m; ++i) matmul_transb_row(a, b, out, i);
    } else {
        for (std::int64_t i = 0; i < m; ++i) matmul_transb_row(a, b, out, i);
    }
}

void matmul_transa(const Matrix& a, const Matrix& b, Matrix& out, Mode mode) {
    assert(a.rows() == b.rows());
    out = Matrix(a.cols(), b.cols());
    const std::int64_t k = static_cast<std::int64_t>(a.cols());
    if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < k; ++i) matmul_transa_row(a, b, out, i);
    } else {
        for (std::int64_t i = 0; i < k; ++i) matmul_transa_row(a, b, out, i);
    }
}

void pairwise_sqdist(const Matrix& points, const Matrix& centers, Matrix& out,
                     Mode mode) {
    assert(points.cols() == centers.cols());
    out = Matrix(points.rows(), centers.rows());
    const std::int64_t n = static_cast<std::int64_t>(points.rows());
    if (mode == Mode::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < n; ++i) sqdist_row(points, centers, out, i);
    } else {
        for (std::int64_t i = 0; i < n; ++i) sqdist_row(points, centers, out, i);
    }
}

}  // namespace clid::kernels
