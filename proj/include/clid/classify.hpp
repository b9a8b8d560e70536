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

#ifndef CLID_CLASSIFY_HPP
#define CLID_CLASSIFY_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "clid/matrix.hpp"
#include "clid/nnet.hpp"

namespace clid {

// Ties in argmax resolve to the lowest class index.
int argmax_lowest(std::span<const double> scores);

// ---------------------------------------------------------------------------
// Linear one-vs-rest SVM, subgradient descent on L2-regularized hinge loss
// ---------------------------------------------------------------------------

struct SvmConfig {
    double learning_rate = 1e-2;
    int epochs = 50;
    double lambda = 1e-4;
    std::uint64_t seed = 42;
};

struct SvmModel {
    Matrix weights;              // 4×D
    std::vector<double> biases;  // 4
    SvmConfig config;
    std::vector<double> objective_trace;  // per epoch

    std::vector<double> scores(std::span<const double> x) const;
    int predict(std::span<const double> x) const;
    std::vector<int> predict_batch(const Matrix& x) const;
};

SvmModel train_svm(const Matrix& x, const std::vector<int>& y,
                   const SvmConfig& config = {});

// ---------------------------------------------------------------------------
// Dense network: in→256 ReLU → dropout 0.3 → 64 ReLU → 4 softmax
// ---------------------------------------------------------------------------

struct NnConfig {
    double learning_rate = 1e-3;
    int epochs = 40;
    std::size_t batch_size = 64;
    double dropout = 0.3;
    std::uint64_t seed = 42;
};

struct NnModel {
    nnet::Dense l1, l2, l3;
    NnConfig config;
    std::vector<double> loss_trace;  // per epoch

    struct Grads {
        nnet::Dense l1, l2, l3;
    };

    Matrix predict_proba(const Matrix& x) const;
    int predict(std::span<const double> x) const;
    std::vector<int> predict_batch(const Matrix& x) const;

    // dropout_mask: per-element keep mask for the 256-unit layer, already
    // scaled by 1/(1-p); pass nullptr for evaluation-mode loss.
    double loss(const Matrix& x, const std::vector<int>& y,
                const Matrix* dropout_mask = nullptr) const;
    double loss_and_grad(const Matrix& x, const std::vector<int>& y, Grads& grads,
                         const Matrix* dropout_mask = nullptr) const;

    Grads zero_grads() const;
    nnet::ParamView params();
    static nnet::ParamView grad_view(Grads& g);
};

NnModel train_nn(const Matrix& x, const std::vector<int>& y, const NnConfig& config = {});

// ---------------------------------------------------------------------------
// Character CNN: embedding 32, conv widths {2,3,4} × 64 filters, max pool,
// 192→4 softmax head
// ---------------------------------------------------------------------------

struct CnnConfig {
    double learning_rate = 1e-3;
    int epochs = 40;
    std::size_t batch_size = 64;
    std::uint64_t seed = 42;
    int embed_dim = 32;
    int filters_per_width = 64;
};

struct CnnModel {
    static constexpr int kWidths[3] = {2, 3, 4};
    static constexpr std::size_t kSeqLen = 128;

    Matrix embedding;             // alphabet_size×embed_dim
    Matrix conv_w[3];             // (width·embed_dim)×filters
    std::vector<double> conv_b[3];
    nnet::Dense head;             // 192→4
    int alphabet_size = 0;
    CnnConfig config;
    std::vector<double> loss_trace;

    struct Grads {
        Matrix embedding;
        Matrix conv_w[3];
        std::vector<double> conv_b[3];
        nnet::Dense head;
    };

    std::size_t pooled_dim() const {
        return 3 * static_cast<std::size_t>(config.filters_per_width);
    }

    Matrix predict_proba(const std::vector<std::vector<int>>& seqs) const;
    int predict(const std::vector<int>& seq) const;
    std::vector<int> predict_batch(const std::vector<std::vector<int>>& seqs) const;

    double loss(const std::vector<std::vector<int>>& seqs,
                const std::vector<int>& y) const;
    double loss_and_grad(const std::vector<std::vector<int>>& seqs,
                         const std::vector<int>& y, Grads& grads) const;

    Grads zero_grads() const;
    nnet::ParamView params();
    static nnet::ParamView grad_view(Grads& g);
};

CnnModel train_cnn(const std::vector<std::vector<int>>& seqs, const std::vector<int>& y,
                   int alphabet_size, const CnnConfig& config = {});

// ---------------------------------------------------------------------------
// Gradient checking
// ---------------------------------------------------------------------------

// Compares the analytic gradient in `grads` against central finite
// differences of `loss_fn` (step 1e-5) on a seeded 200-parameter sample;
// returns the maximum relative error.
double max_gradient_error(nnet::ParamView params, nnet::ParamView grads,
                          const std::function<double()>& loss_fn,
                          std::size_t sample_size = 200, std::uint64_t seed = 1234,
                          double step = 1e-5);

}  // namespace clid

#endif  // CLID_CLASSIFY_HPP
