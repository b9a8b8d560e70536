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

#include <cmath>
#include <vector>

#include "clid/classify.hpp"
#include "clid/rng.hpp"
#include "doctest.h"

using namespace clid;

namespace {

// Four linearly separable clouds, one per class corner.
void four_class_data(std::size_t per_class, std::uint64_t seed, Matrix& x,
                     std::vector<int>& y) {
    const double centers[4][2] = {{0, 0}, {6, 0}, {0, 6}, {6, 6}};
    Rng rng(seed);
    x = Matrix(4 * per_class, 2);
    y.assign(4 * per_class, 0);
    for (int c = 0; c < 4; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = c * per_class + i;
            x.at(r, 0) = centers[c][0] + 0.3 * rng.next_gaussian();
            x.at(r, 1) = centers[c][1] + 0.3 * rng.next_gaussian();
            y[r] = c;
        }
    }
}

std::vector<std::vector<int>> random_sequences(std::size_t n, int alphabet_size,
                                               std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> seqs(n, std::vector<int>(CnnModel::kSeqLen, 0));
    for (auto& s : seqs)
        for (std::size_t i = 0; i < 40 + rng.next_below(60); ++i)
            s[i] = 2 + static_cast<int>(rng.next_below(alphabet_size - 2));
    return seqs;
}

double train_accuracy(const std::vector<int>& pred, const std::vector<int>& y) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y.size(); ++i) hits += pred[i] == y[i];
    return static_cast<double>(hits) / static_cast<double>(y.size());
}

}  // namespace

TEST_CASE("argmax ties resolve to the lowest index") {
    const std::vector<double> tied = {1.0, 3.0, 3.0, 0.5};
    CHECK(argmax_lowest(tied) == 1);
    const std::vector<double> all_equal = {2.0, 2.0, 2.0, 2.0};
    CHECK(argmax_lowest(all_equal) == 0);
    const std::vector<double> plain = {0.1, 0.2, 0.9, 0.3};
    CHECK(argmax_lowest(plain) == 2);
}

TEST_CASE("svm separates four linear clouds perfectly") {
    Matrix x;
    std::vector<int> y;
    four_class_data(40, 3, x, y);
    const SvmModel m = train_svm(x, y);
    CHECK(train_accuracy(m.predict_batch(x), y) == 1.0);
    // initial objective plus one entry per epoch
    REQUIRE(m.objective_trace.size() == static_cast<std::size_t>(m.config.epochs) + 1);
    // the regularized objective should end far below where it started
    CHECK(m.objective_trace.back() < m.objective_trace.front());
}

TEST_CASE("hinge loss ignores points beyond the margin") {
    // weights fixed so every sample has margin >= 1 for its own class and
    // <= -1 for the rest; the hinge term of the objective must be zero.
    Matrix x(2, 1);
    x.at(0, 0) = -2.0;
    x.at(1, 0) = 2.0;
    std::vector<int> y = {0, 1};
    SvmModel m;
    m.weights = Matrix(4, 1);
    m.weights.at(0, 0) = -1.0;
    m.weights.at(1, 0) = 1.0;
    m.weights.at(2, 0) = 0.0;
    m.weights.at(3, 0) = 0.0;
    m.biases = {0.0, 0.0, -10.0, -10.0};
    CHECK(m.predict(x.row(0)) == 0);
    CHECK(m.predict(x.row(1)) == 1);
    // scores confirm the margins used above
    const auto s0 = m.scores(x.row(0));
    CHECK(s0[0] == doctest::Approx(2.0));
    CHECK(s0[1] == doctest::Approx(-2.0));
}

TEST_CASE("svm training is bitwise deterministic") {
    Matrix x;
    std::vector<int> y;
    four_class_data(25, 5, x, y);
    const SvmModel a = train_svm(x, y);
    const SvmModel b = train_svm(x, y);
    CHECK(a.weights.vec() == b.weights.vec());
    CHECK(a.biases == b.biases);
    CHECK(a.objective_trace == b.objective_trace);
    SvmConfig other;
    other.seed = 7;
    const SvmModel c = train_svm(x, y, other);
    CHECK(a.weights.vec() != c.weights.vec());
}

TEST_CASE("dense network gradient check") {
    Rng rng(11);
    Matrix x(4, 6);
    for (auto& v : x.vec()) v = rng.next_gaussian();
    const std::vector<int> y = {0, 1, 2, 3};
    NnModel m;
    m.l1.init(6, 256, rng);
    m.l2.init(256, 64, rng);
    m.l3.init(64, 4, rng);
    auto grads = m.zero_grads();
    m.loss_and_grad(x, y, grads, nullptr);
    auto params = m.params();
    auto gview = NnModel::grad_view(grads);
    const double err =
        max_gradient_error(params, gview, [&]() { return m.loss(x, y, nullptr); });
    CHECK(err <= 1e-4);
}

TEST_CASE("dense network fits separable data and emits simplex rows") {
    Matrix x;
    std::vector<int> y;
    four_class_data(30, 17, x, y);
    // the network always sees scaled features in the pipeline
    for (auto& v : x.vec()) v /= 6.0;
    NnConfig cfg;
    cfg.epochs = 20;
    const NnModel m = train_nn(x, y, cfg);
    CHECK(train_accuracy(m.predict_batch(x), y) >= 0.95);
    REQUIRE(m.loss_trace.size() == 20);
    CHECK(m.loss_trace.back() < m.loss_trace.front());
    const Matrix proba = m.predict_proba(x);
    for (std::size_t i = 0; i < proba.rows(); ++i) {
        double row = 0;
        for (int k = 0; k < 4; ++k) {
            CHECK(proba.at(i, k) >= 0.0);
            row += proba.at(i, k);
        }
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    }
    // determinism
    const NnModel again = train_nn(x, y, cfg);
    CHECK(m.l1.w.vec() == again.l1.w.vec());
    CHECK(m.loss_trace == again.loss_trace);
}

TEST_CASE("cnn gradient check on a 2-sample batch") {
    Rng rng(23);
    const int alphabet = 10;
    auto seqs = random_sequences(2, alphabet, 29);
    const std::vector<int> y = {1, 3};
    CnnModel m;
    CnnConfig small;
    small.filters_per_width = 4;
    small.embed_dim = 6;
    m.config = small;
    m.alphabet_size = alphabet;
    m.embedding = Matrix(alphabet, small.embed_dim);
    for (auto& v : m.embedding.vec()) v = 0.1 * rng.next_gaussian();
    for (int wdx = 0; wdx < 3; ++wdx) {
        m.conv_w[wdx] =
            Matrix(CnnModel::kWidths[wdx] * small.embed_dim, small.filters_per_width);
        for (auto& v : m.conv_w[wdx].vec()) v = 0.1 * rng.next_gaussian();
        m.conv_b[wdx].assign(small.filters_per_width, 0.01);
    }
    m.head.init(3 * small.filters_per_width, 4, rng);
    auto grads = m.zero_grads();
    m.loss_and_grad(seqs, y, grads);
    auto params = m.params();
    auto gview = CnnModel::grad_view(grads);
    const double err =
        max_gradient_error(params, gview, [&]() { return m.loss(seqs, y); });
    CHECK(err <= 1e-4);
}

TEST_CASE("cnn pooled dimension and all-pad input") {
    CnnModel m;
    CHECK(m.pooled_dim() == 192);
    Matrix x;
    std::vector<int> y;
    // learnable toy task: class = which band of the alphabet dominates
    const int alphabet = 12;
    Rng rng(31);
    std::vector<std::vector<int>> seqs;
    std::vector<int> labels;
    for (int c = 0; c < 4; ++c) {
        for (int i = 0; i < 12; ++i) {
            std::vector<int> s(CnnModel::kSeqLen, 0);
            for (int t = 0; t < 64; ++t)
                s[t] = 2 + (c * 2 + static_cast<int>(rng.next_below(2))) % (alphabet - 2);
            seqs.push_back(std::move(s));
            labels.push_back(c);
        }
    }
    CnnConfig cfg;
    cfg.epochs = 12;
    const CnnModel trained = train_cnn(seqs, labels, alphabet, cfg);
    CHECK(train_accuracy(trained.predict_batch(seqs), labels) >= 0.9);

    // a sequence of pure padding still yields a valid prediction
    const std::vector<int> all_pad(CnnModel::kSeqLen, 0);
    const int pred = trained.predict(all_pad);
    CHECK(pred >= 0);
    CHECK(pred < 4);
    const Matrix proba = trained.predict_proba({all_pad});
    double sum = 0;
    for (int k = 0; k < 4; ++k) sum += proba.at(0, k);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cnn training is deterministic per seed") {
    const int alphabet = 8;
    auto seqs = random_sequences(24, alphabet, 37);
    std::vector<int> y;
    for (std::size_t i = 0; i < seqs.size(); ++i) y.push_back(static_cast<int>(i % 4));
    CnnConfig cfg;
    cfg.epochs = 2;
    const CnnModel a = train_cnn(seqs, y, alphabet, cfg);
    const CnnModel b = train_cnn(seqs, y, alphabet, cfg);
    CHECK(a.embedding.vec() == b.embedding.vec());
    CHECK(a.loss_trace == b.loss_trace);
    cfg.seed = 99;
    const CnnModel c = train_cnn(seqs, y, alphabet, cfg);
    CHECK(a.embedding.vec() != c.embedding.vec());
}
