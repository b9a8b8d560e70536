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

#include <vector>

#include "clid/matrix.hpp"
#include "clid/rng.hpp"
#include "doctest.h"

using namespace clid;
using kernels::Mode;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (auto& v : m.vec()) v = rng.next_gaussian();
    return m;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.vec().size(); ++i)
        if (a.vec()[i] != b.vec()[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("matmul matches a hand-computed product") {
    Matrix a(2, 3), b(3, 2);
    double va = 1;
    for (auto& v : a.vec()) v = va++;
    double vb = 1;
    for (auto& v : b.vec()) v = vb++;
    Matrix out;
    kernels::matmul(a, b, out, Mode::Serial);
    CHECK(out.at(0, 0) == 22);
    CHECK(out.at(0, 1) == 28);
    CHECK(out.at(1, 0) == 49);
    CHECK(out.at(1, 1) == 64);
}

TEST_CASE("parallel kernels are bitwise identical to serial") {
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t m = 3 + rng.next_below(30);
        const std::size_t k = 3 + rng.next_below(30);
        const std::size_t n = 3 + rng.next_below(30);
        const Matrix a = random_matrix(m, k, rng);
        const Matrix b = random_matrix(k, n, rng);
        const Matrix bt = random_matrix(n, k, rng);
        const Matrix c = random_matrix(m, n, rng);

        Matrix s, p;
        kernels::matmul(a, b, s, Mode::Serial);
        kernels::matmul(a, b, p, Mode::Parallel);
        CHECK(bitwise_equal(s, p));

        kernels::matmul_transb(a, bt, s, Mode::Serial);
        kernels::matmul_transb(a, bt, p, Mode::Parallel);
        CHECK(bitwise_equal(s, p));

        kernels::matmul_transa(a, c, s, Mode::Serial);
        kernels::matmul_transa(a, c, p, Mode::Parallel);
        CHECK(bitwise_equal(s, p));

        const Matrix centers = random_matrix(4, k, rng);
        kernels::pairwise_sqdist(a, centers, s, Mode::Serial);
        kernels::pairwise_sqdist(a, centers, p, Mode::Parallel);
        CHECK(bitwise_equal(s, p));
    }
}

TEST_CASE("pairwise_sqdist parallel equals serial and is correct") {
    Rng rng(11);
    const Matrix points = random_matrix(20, 5, rng);
    const Matrix centers = random_matrix(3, 5, rng);
    Matrix s, p;
    kernels::pairwise_sqdist(points, centers, s, Mode::Serial);
    kernels::pairwise_sqdist(points, centers, p, Mode::Parallel);
    CHECK(bitwise_equal(s, p));
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            double d = 0;
            for (std::size_t j = 0; j < 5; ++j) {
                const double diff = points.at(i, j) - centers.at(c, j);
                d += diff * diff;
            }
            CHECK(s.at(i, c) == doctest::Approx(d).epsilon(1e-12));
        }
    }
}

TEST_CASE("transpose variants agree with explicit transposition") {
    Rng rng(13);
    const Matrix a = random_matrix(6, 4, rng);
    const Matrix b = random_matrix(5, 4, rng);
    Matrix bt(4, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 4; ++j) bt.at(j, i) = b.at(i, j);
    Matrix direct, viat;
    kernels::matmul_transb(a, b, direct, Mode::Serial);
    kernels::matmul(a, bt, viat, Mode::Serial);
    for (std::size_t i = 0; i < direct.vec().size(); ++i)
        CHECK(direct.vec()[i] == doctest::Approx(viat.vec()[i]).epsilon(1e-12));
}
