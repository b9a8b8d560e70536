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

#include "clid/classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "clid/errors.hpp"
#include "clid/rng.hpp"

namespace clid {

int argmax_lowest(std::span<const double> scores) {
    int best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best]) best = static_cast<int>(i);
    return best;
}

namespace {

void check_labels(const Matrix& x, const std::vector<int>& y) {
    if (x.rows() != y.size()) throw DataError("feature/label row count mismatch");
    std::set<int> classes(y.begin(), y.end());
    if (classes.size() < 2)
        throw DataError("training requires at least 2 classes present");
}

}  // namespace

// ---------------------------------------------------------------------------
// SVM
// ---------------------------------------------------------------------------

std::vector<double> SvmModel::scores(std::span<const double> x) const {
    if (x.size() != weights.cols()) throw DataError("svm: feature dimension mismatch");
    std::vector<double> out(weights.rows());
    for (std::size_t c = 0; c < weights.rows(); ++c) {
        double acc = biases[c];
        const auto w = weights.row(c);
        for (std::size_t j = 0; j < x.size(); ++j) acc += w[j] * x[j];
        out[c] = acc;
    }
    return out;
}

int SvmModel::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return argmax_lowest(s);
}

std::vector<int> SvmModel::predict_batch(const Matrix& x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = predict(x.row(i));
    return out;
}

namespace {

double svm_objective(const SvmModel& m, const Matrix& x, const std::vector<int>& y) {
    const std::size_t n = x.rows();
    const std::size_t k = m.weights.rows();
    double obj = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double norm = 0.0;
        for (double w : m.weights.row(c)) norm += w * w;
        obj += 0.5 * m.config.lambda * norm;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto s = m.scores(x.row(i));
        for (std::size_t c = 0; c < k; ++c) {
            const double sign = (y[i] == static_cast<int>(c)) ? 1.0 : -1.0;
            obj += std::max(0.0, 1.0 - sign * s[c]) / static_cast<double>(n);
        }
    }
    return obj;
}

}  // namespace

SvmModel train_svm(const Matrix& x, const std::vector<int>& y, const SvmConfig& config) {
    check_labels(x, y);
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    constexpr std::size_t k = 4;

    SvmModel model;
    model.config = config;
    model.weights = Matrix(k, d);
    model.biases.assign(k, 0.0);

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double lr = config.learning_rate;
    double prev_obj = svm_objective(model, x, y);
    model.objective_trace.push_back(prev_obj);

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const auto row = x.row(idx);
            const auto s = model.scores(row);
            for (std::size_t c = 0; c < k; ++c) {
                const double sign = (y[idx] == static_cast<int>(c)) ? 1.0 : -1.0;
                auto w = model.weights.row(c);
                // L2 shrinkage every step, hinge subgradient when inside margin
                for (std::size_t j = 0; j < d; ++j) w[j] -= lr * config.lambda * w[j];
                if (sign * s[c] < 1.0) {
                    for (std::size_t j = 0; j < d; ++j)
                        if (row[j] != 0.0) w[j] += lr * sign * row[j];
                    model.biases[c] += lr * sign;
                }
            }
        }
        const double obj = svm_objective(model, x, y);
        model.objective_trace.push_back(obj);
        if (obj > prev_obj) lr *= 0.5;  // halve-on-increase schedule
        prev_obj = obj;
    }
    return model;
}

// ---------------------------------------------------------------------------
// Dense NN
// ---------------------------------------------------------------------------

namespace {

struct NnForward {
    Matrix h1, h2, probs;
};

NnForward nn_forward(const NnModel& m, const Matrix& x, const Matrix* mask) {
    NnForward f;
    f.h1 = m.l1.forward(x);
    nnet::relu_inplace(f.h1);
    if (mask) {
        for (std::size_t i = 0; i < f.h1.vec().size(); ++i)
            f.h1.vec()[i] *= mask->vec()[i];
    }
    f.h2 = m.l2.forward(f.h1);
    nnet::relu_inplace(f.h2);
    f.probs = nnet::softmax_rows(m.l3.forward(f.h2));
    return f;
}

}  // namespace

Matrix NnModel::predict_proba(const Matrix& x) const {
    return nn_forward(*this, x, nullptr).probs;
}

int NnModel::predict(std::span<const double> x) const {
    Matrix one(1, x.size());
    for (std::size_t j = 0; j < x.size(); ++j) one.at(0, j) = x[j];
    const Matrix p = predict_proba(one);
    return argmax_lowest(p.row(0));
}

std::vector<int> NnModel::predict_batch(const Matrix& x) const {
    const Matrix p = predict_proba(x);
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = argmax_lowest(p.row(i));
    return out;
}

double NnModel::loss(const Matrix& x, const std::vector<int>& y,
                     const Matrix* mask) const {
    return nnet::cross_entropy(nn_forward(*this, x, mask).probs, y);
}

double NnModel::loss_and_grad(const Matrix& x, const std::vector<int>& y, Grads& g,
                              const Matrix* mask) const {
    const NnForward f = nn_forward(*this, x, mask);
    const double loss = nnet::cross_entropy(f.probs, y);
    const Matrix dlogits = nnet::ce_logit_grad(f.probs, y);
    Matrix dh2 = l3.backward(f.h2, dlogits, g.l3);
    dh2 = nnet::relu_backward(f.h2, dh2);
    Matrix dh1 = l2.backward(f.h1, dh2, g.l2);
    if (mask) {
        for (std::size_t i = 0; i < dh1.vec().size(); ++i)
            dh1.vec()[i] *= mask->vec()[i];
    }
    // f.h1 already has the mask applied; zero entries block gradients the
    // same way the pre-mask ReLU would except where the mask dropped a
    // positive unit, which the mask multiplication above handles.
    dh1 = nnet::relu_backward(f.h1, dh1);
    l1.backward(x, dh1, g.l1);
    return loss;
}

NnModel::Grads NnModel::zero_grads() const {
    Grads g;
    g.l1.zero_like(l1);
    g.l2.zero_like(l2);
    g.l3.zero_like(l3);
    return g;
}

nnet::ParamView NnModel::params() {
    nnet::ParamView v;
    l1.add_to_view(v);
    l2.add_to_view(v);
    l3.add_to_view(v);
    return v;
}

nnet::ParamView NnModel::grad_view(Grads& g) {
    nnet::ParamView v;
    g.l1.add_to_view(v);
    g.l2.add_to_view(v);
    g.l3.add_to_view(v);
    return v;
}

NnModel train_nn(const Matrix& x, const std::vector<int>& y, const NnConfig& config) {
    check_labels(x, y);
    const std::size_t n = x.rows();

    NnModel m;
    m.config = config;
    Rng rng(config.seed);
    m.l1.init(x.cols(), 256, rng);
    m.l2.init(256, 64, rng);
    m.l3.init(64, 4, rng);

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double lr = config.learning_rate;
    double prev_loss = std::numeric_limits<double>::infinity();
    const double keep = 1.0 - config.dropout;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t bsz = std::min(config.batch_size, n - start);
            Matrix xb(bsz, x.cols());
            std::vector<int> yb(bsz);
            for (std::size_t i = 0; i < bsz; ++i) {
                for (std::size_t j = 0; j < x.cols(); ++j)
                    xb.at(i, j) = x.at(order[start + i], j);
                yb[i] = y[order[start + i]];
            }
            Matrix mask(bsz, 256);
            for (auto& v : mask.vec())
                v = (rng.next_double() < keep) ? 1.0 / keep : 0.0;

            auto grads = m.zero_grads();
            const double loss = m.loss_and_grad(xb, yb, grads, &mask);
            if (!std::isfinite(loss))
                throw NumericalError("NN: non-finite loss at epoch " +
                                     std::to_string(epoch) + " batch " +
                                     std::to_string(batches));
            m.l1.sgd_step(grads.l1, lr);
            m.l2.sgd_step(grads.l2, lr);
            m.l3.sgd_step(grads.l3, lr);
            epoch_loss += loss;
            ++batches;
        }
        epoch_loss /= static_cast<double>(n);  // per-sample mean for the trace
        m.loss_trace.push_back(epoch_loss);
        if (epoch_loss > prev_loss) lr *= 0.5;
        prev_loss = epoch_loss;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Character CNN
// ---------------------------------------------------------------------------

namespace {

struct CnnForward {
    // per width: pooled activations and argmax positions
    Matrix pooled;                      // n×192
    std::vector<std::vector<int>> argmax;  // [width][n*filters]
    Matrix probs;
};

CnnForward cnn_forward(const CnnModel& m, const std::vector<std::vector<int>>& seqs) {
    const std::size_t n = seqs.size();
    const int e = m.config.embed_dim;
    const int nf = m.config.filters_per_width;
    CnnForward f;
    f.pooled = Matrix(n, m.pooled_dim());
    f.argmax.assign(3, std::vector<int>(n * nf, -1));

    for (std::size_t s = 0; s < n; ++s) {
        const auto& seq = seqs[s];
        if (seq.size() != CnnModel::kSeqLen)
            throw DataError("CNN input sequence must have length 128");
        for (int wi = 0; wi < 3; ++wi) {
            const int width = CnnModel::kWidths[wi];
            const int positions = static_cast<int>(CnnModel::kSeqLen) - width + 1;
            // im2col: positions × (width·embed)
            Matrix windows(positions, static_cast<std::size_t>(width) * e);
            for (int p = 0; p < positions; ++p)
                for (int t = 0; t < width; ++t)
                    for (int d = 0; d < e; ++d)
                        windows.at(p, t * e + d) = m.embedding.at(seq[p + t], d);
            Matrix pre;
            kernels::matmul(windows, m.conv_w[wi], pre);
            for (int fl = 0; fl < nf; ++fl) {
                double best = 0.0;  // ReLU floor: all-negative window pools to 0
                int arg = -1;
                for (int p = 0; p < positions; ++p) {
                    const double v = pre.at(p, fl) + m.conv_b[wi][fl];
                    if (v > best) {
                        best = v;
                        arg = p;
                    }
                }
                f.pooled.at(s, wi * nf + fl) = best;
                f.argmax[wi][s * nf + fl] = arg;
            }
        }
    }
    f.probs = nnet::softmax_rows(m.head.forward(f.pooled));
    return f;
}

}  // namespace

Matrix CnnModel::predict_proba(const std::vector<std::vector<int>>& seqs) const {
    return cnn_forward(*this, seqs).probs;
}

int CnnModel::predict(const std::vector<int>& seq) const {
    const Matrix p = predict_proba({seq});
    return argmax_lowest(p.row(0));
}

std::vector<int> CnnModel::predict_batch(const std::vector<std::vector<int>>& seqs) const {
    const Matrix p = predict_proba(seqs);
    std::vector<int> out(seqs.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) out[i] = argmax_lowest(p.row(i));
    return out;
}

double CnnModel::loss(const std::vector<std::vector<int>>& seqs,
                      const std::vector<int>& y) const {
    return nnet::cross_entropy(cnn_forward(*this, seqs).probs, y);
}

double CnnModel::loss_and_grad(const std::vector<std::vector<int>>& seqs,
                               const std::vector<int>& y, Grads& g) const {
    const CnnForward f = cnn_forward(*this, seqs);
    const double loss = nnet::cross_entropy(f.probs, y);
    const Matrix dlogits = nnet::ce_logit_grad(f.probs, y);
    const Matrix dpooled = head.backward(f.pooled, dlogits, g.head);

    const std::size_t n = seqs.size();
    const int e = config.embed_dim;
    const int nf = config.filters_per_width;
    for (std::size_t s = 0; s < n; ++s) {
        const auto& seq = seqs[s];
        for (int wi = 0; wi < 3; ++wi) {
            const int width = kWidths[wi];
            for (int fl = 0; fl < nf; ++fl) {
                const double dv = dpooled.at(s, wi * nf + fl);
                if (dv == 0.0) continue;
                const int p = f.argmax[wi][s * nf + fl];
                if (p < 0) continue;  // pooled value was the ReLU floor
                g.conv_b[wi][fl] += dv;
                for (int t = 0; t < width; ++t) {
                    for (int d = 0; d < e; ++d) {
                        const double emb = embedding.at(seq[p + t], d);
                        g.conv_w[wi].at(t * e + d, fl) += dv * emb;
                        g.embedding.at(seq[p + t], d) +=
                            dv * conv_w[wi].at(t * e + d, fl);
                    }
                }
            }
        }
    }
    return loss;
}

CnnModel::Grads CnnModel::zero_grads() const {
    Grads g;
    g.embedding = Matrix(embedding.rows(), embedding.cols());
    for (int wi = 0; wi < 3; ++wi) {
        g.conv_w[wi] = Matrix(conv_w[wi].rows(), conv_w[wi].cols());
        g.conv_b[wi].assign(conv_b[wi].size(), 0.0);
    }
    g.head.zero_like(head);
    return g;
}

nnet::ParamView CnnModel::params() {
    nnet::ParamView v;
    v.add(std::span<double>(embedding.vec()));
    for (int wi = 0; wi < 3; ++wi) {
        v.add(std::span<double>(conv_w[wi].vec()));
        v.add(std::span<double>(conv_b[wi]));
    }
    head.add_to_view(v);
    return v;
}

nnet::ParamView CnnModel::grad_view(Grads& g) {
    nnet::ParamView v;
    v.add(std::span<double>(g.embedding.vec()));
    for (int wi = 0; wi < 3; ++wi) {
        v.add(std::span<double>(g.conv_w[wi].vec()));
        v.add(std::span<double>(g.conv_b[wi]));
    }
    g.head.add_to_view(v);
    return v;
}

CnnModel train_cnn(const std::vector<std::vector<int>>& seqs, const std::vector<int>& y,
                   int alphabet_size, const CnnConfig& config) {
    if (seqs.size() != y.size()) throw DataError("feature/label row count mismatch");
    std::set<int> classes(y.begin(), y.end());
    if (classes.size() < 2) throw DataError("training requires at least 2 classes present");

    CnnModel m;
    m.config = config;
    m.alphabet_size = alphabet_size;
    Rng rng(config.seed);
    m.embedding = Matrix(alphabet_size, config.embed_dim);
    for (auto& v : m.embedding.vec()) v = rng.next_gaussian() * 0.1;
    for (int wi = 0; wi < 3; ++wi) {
        const std::size_t in = static_cast<std::size_t>(CnnModel::kWidths[wi]) *
                               config.embed_dim;
        m.conv_w[wi] = Matrix(in, config.filters_per_width);
        const double scale = std::sqrt(2.0 / static_cast<double>(in));
        for (auto& v : m.conv_w[wi].vec()) v = rng.next_gaussian() * scale;
        m.conv_b[wi].assign(config.filters_per_width, 0.0);
    }
    m.head.init(m.pooled_dim(), 4, rng);

    const std::size_t n = seqs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double lr = config.learning_rate;
    double prev_loss = std::numeric_limits<double>::infinity();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t bsz = std::min(config.batch_size, n - start);
            std::vector<std::vector<int>> sb(bsz);
            std::vector<int> yb(bsz);
            for (std::size_t i = 0; i < bsz; ++i) {
                sb[i] = seqs[order[start + i]];
                yb[i] = y[order[start + i]];
            }
            auto grads = m.zero_grads();
            const double loss = m.loss_and_grad(sb, yb, grads);
            if (!std::isfinite(loss))
                throw NumericalError("CNN: non-finite loss at epoch " +
                                     std::to_string(epoch) + " batch " +
                                     std::to_string(batches));
            for (std::size_t i = 0; i < m.embedding.vec().size(); ++i)
                m.embedding.vec()[i] -= lr * grads.embedding.vec()[i];
            for (int wi = 0; wi < 3; ++wi) {
                for (std::size_t i = 0; i < m.conv_w[wi].vec().size(); ++i)
                    m.conv_w[wi].vec()[i] -= lr * grads.conv_w[wi].vec()[i];
                for (std::size_t i = 0; i < m.conv_b[wi].size(); ++i)
                    m.conv_b[wi][i] -= lr * grads.conv_b[wi][i];
            }
            m.head.sgd_step(grads.head, lr);
            epoch_loss += loss;
            ++batches;
        }
        epoch_loss /= static_cast<double>(n);  // per-sample mean for the trace
        m.loss_trace.push_back(epoch_loss);
        if (epoch_loss > prev_loss) lr *= 0.5;
        prev_loss = epoch_loss;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Gradient check harness
// ---------------------------------------------------------------------------

double max_gradient_error(nnet::ParamView params, nnet::ParamView grads,
                          const std::function<double()>& loss_fn,
                          std::size_t sample_size, std::uint64_t seed, double step) {
    Rng rng(seed);
    const std::size_t total = params.size();
    const std::size_t count = std::min(sample_size, total);
    double max_err = 0.0;
    for (std::size_t t = 0; t < count; ++t) {
        const std::size_t idx = rng.next_below(total);
        double& p = params.at(idx);
        const double original = p;
        p = original + step;
        const double lp = loss_fn();
        p = original - step;
        const double lm = loss_fn();
        p = original;
        const double fd = (lp - lm) / (2.0 * step);
        const double analytic = grads.at(idx);
        const double denom = std::max(std::abs(analytic) + std::abs(fd), 1e-6);
        max_err = std::max(max_err, std::abs(analytic - fd) / denom);
    }
    return max_err;
}

}  // namespace clid
