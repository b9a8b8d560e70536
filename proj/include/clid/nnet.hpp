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

#ifndef CLID_NNET_HPP
#define CLID_NNET_HPP

#include <cmath>
#include <span>
#include <vector>

#include "clid/matrix.hpp"
#include "clid/rng.hpp"

namespace clid::nnet {

// Flat view over a model's parameter blocks; lets the gradient-check
// harness address any scalar parameter by a single index.
class ParamView {
  public:
    void add(std::span<double> block) {
        blocks_.push_back(block);
        total_ += block.size();
    }
    std::size_t size() const { return total_; }
    double& at(std::size_t i) {
        for (auto& b : blocks_) {
            if (i < b.size()) return b[i];
            i -= b.size();
        }
        return blocks_.back().back();
    }

  private:
    std::vector<std::span<double>> blocks_;
    std::size_t total_ = 0;
};

struct Dense {
    Matrix w;               // in×out
    std::vector<double> b;  // out

    void init(std::size_t in, std::size_t out, Rng& rng) {
        w = Matrix(in, out);
        b.assign(out, 0.0);
        const double scale = std::sqrt(2.0 / static_cast<double>(in));
        for (auto& v : w.vec()) v = rng.next_gaussian() * scale;
    }

    Matrix forward(const Matrix& x) const {
        Matrix y;
        kernels::matmul(x, w, y);
        for (std::size_t i = 0; i < y.rows(); ++i)
            for (std::size_t j = 0; j < y.cols(); ++j) y.at(i, j) += b[j];
        return y;
    }

    // dy is the gradient at the output; returns gradient at the input and
    // accumulates parameter gradients into `grad`.
    Matrix backward(const Matrix& x, const Matrix& dy, Dense& grad) const {
        Matrix dw;
        kernels::matmul_transa(x, dy, dw);
        for (std::size_t i = 0; i < dw.vec().size(); ++i) grad.w.vec()[i] += dw.vec()[i];
        for (std::size_t i = 0; i < dy.rows(); ++i)
            for (std::size_t j = 0; j < dy.cols(); ++j) grad.b[j] += dy.at(i, j);
        Matrix dx;
        kernels::matmul_transb(dy, w, dx);
        return dx;
    }

    void zero_like(const Dense& other) {
        w = Matrix(other.w.rows(), other.w.cols());
        b.assign(other.b.size(), 0.0);
    }

    void add_to_view(ParamView& view) {
        view.add(std::span<double>(w.vec()));
        view.add(std::span<double>(b));
    }

    void sgd_step(const Dense& grad, double lr) {
        for (std::size_t i = 0; i < w.vec().size(); ++i)
            w.vec()[i] -= lr * grad.w.vec()[i];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] -= lr * grad.b[i];
    }
};

inline void relu_inplace(Matrix& x) {
    for (auto& v : x.vec())
        if (v < 0.0) v = 0.0;
}

// Masks dy by activation > 0 (post-activation values passed in).
inline Matrix relu_backward(const Matrix& activated, const Matrix& dy) {
    Matrix dx = dy;
    for (std::size_t i = 0; i < dx.vec().size(); ++i)
        if (activated.vec()[i] <= 0.0) dx.vec()[i] = 0.0;
    return dx;
}

inline Matrix softmax_rows(const Matrix& logits) {
    Matrix p = logits;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        auto row = p.row(i);
        double mx = row[0];
        for (double v : row) mx = std::max(mx, v);
        double total = 0.0;
        for (auto& v : row) {
            v = std::exp(v - mx);
            total += v;
        }
        for (auto& v : row) v /= total;
    }
    return p;
}

// Summed cross-entropy of softmax probabilities against integer labels.
inline double cross_entropy(const Matrix& probs, const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < probs.rows(); ++i)
        loss -= std::log(std::max(probs.at(i, static_cast<std::size_t>(y[i])), 1e-300));
    return loss;
}

// Gradient of summed cross-entropy w.r.t. logits: p - onehot.
inline Matrix ce_logit_grad(const Matrix& probs, const std::vector<int>& y) {
    Matrix d = probs;
    for (std::size_t i = 0; i < d.rows(); ++i)
        d.at(i, static_cast<std::size_t>(y[i])) -= 1.0;
    return d;
}

}  // namespace clid::nnet

#endif  // CLID_NNET_HPP
