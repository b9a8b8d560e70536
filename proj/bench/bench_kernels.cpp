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

// Serial vs OpenMP kernel timings. Each kernel is checked for bitwise
// agreement between the two modes before the timed runs.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "clid/matrix.hpp"
#include "clid/rng.hpp"

using namespace clid;
using kernels::Mode;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
    Matrix m(r, c);
    for (auto& v : m.vec()) v = rng.next_gaussian();
    return m;
}

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count() / reps;
}

void bench(const std::string& name,
           const std::function<void(Matrix&, Mode)>& run, int reps) {
    Matrix serial_out, parallel_out;
    run(serial_out, Mode::Serial);
    run(parallel_out, Mode::Parallel);
    bool identical = serial_out.rows() == parallel_out.rows() &&
                     serial_out.cols() == parallel_out.cols();
    if (identical)
        for (std::size_t i = 0; i < serial_out.vec().size(); ++i)
            if (serial_out.vec()[i] != parallel_out.vec()[i]) {
                identical = false;
                break;
            }
    const double ts = time_ms([&]() { run(serial_out, Mode::Serial); }, reps);
    const double tp = time_ms([&]() { run(parallel_out, Mode::Parallel); }, reps);
    std::printf("%-18s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
                name.c_str(), ts, tp, ts / tp,
                identical ? "bitwise-identical" : "MISMATCH");
}

}  // namespace

int main() {
    Rng rng(42);
    const std::size_t m = 512, k = 384, n = 256;
    const Matrix a = random_matrix(m, k, rng);
    const Matrix b = random_matrix(k, n, rng);
    const Matrix bt = random_matrix(n, k, rng);
    const Matrix c = random_matrix(m, n, rng);
    const Matrix points = random_matrix(4096, 64, rng);
    const Matrix centers = random_matrix(16, 64, rng);

    std::printf("matrix kernels, %zux%zu * %zux%zu\n", m, k, k, n);
    bench("matmul", [&](Matrix& out, Mode mode) { kernels::matmul(a, b, out, mode); }, 5);
    bench("matmul_transb",
          [&](Matrix& out, Mode mode) { kernels::matmul_transb(a, bt, out, mode); }, 5);
    bench("matmul_transa",
          [&](Matrix& out, Mode mode) { kernels::matmul_transa(a, c, out, mode); }, 5);
    bench("pairwise_sqdist",
          [&](Matrix& out, Mode mode) {
              kernels::pairwise_sqdist(points, centers, out, mode);
          },
          5);
    return 0;
}
