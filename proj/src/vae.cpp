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

#include "clid/vae.hpp"

#include <cmath>

#include "clid/errors.hpp"

namespace clid {

Matrix VaeModel::scale_sequences(const std::vector<std::vector<int>>& seqs) const {
    Matrix x(seqs.size(), kSeqLen);
    const double inv = 1.0 / static_cast<double>(alphabet_size);
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        if (seqs[i].size() != kSeqLen)
            throw DataError("VAE input sequence must have length 128");
        for (std::size_t j = 0; j < kSeqLen; ++j)
            x.at(i, j) = static_cast<double>(seqs[i][j]) * inv;
    }
    return x;
}

namespace {

struct Forward {
    Matrix h1, h2, mu, logvar, z, d1, d2, xhat;
};

Forward run_forward(const VaeModel& m, const Matrix& x, const Matrix& eps) {
    Forward f;
    f.h1 = m.enc1.forward(x);
    nnet::relu_inplace(f.h1);
    f.h2 = m.enc2.forward(f.h1);
    nnet::relu_inplace(f.h2);
    f.mu = m.enc_mu.forward(f.h2);
    f.logvar = m.enc_logvar.forward(f.h2);
    f.z = f.mu;
    for (std::size_t i = 0; i < f.z.rows(); ++i)
        for (std::size_t j = 0; j < f.z.cols(); ++j)
            f.z.at(i, j) += std::exp(0.5 * f.logvar.at(i, j)) * eps.at(i, j);
    f.d1 = m.dec1.forward(f.z);
    nnet::relu_inplace(f.d1);
    f.d2 = m.dec2.forward(f.d1);
    nnet::relu_inplace(f.d2);
    f.xhat = m.dec_out.forward(f.d2);
    return f;
}

VaeLoss compute_loss(const Forward& f, const Matrix& x) {
    const double n = static_cast<double>(x.rows());
    VaeLoss loss;
    for (std::size_t i = 0; i < x.vec().size(); ++i) {
        const double d = f.xhat.vec()[i] - x.vec()[i];
        loss.reconstruction += d * d;
    }
    loss.reconstruction /= n;
    for (std::size_t i = 0; i < f.mu.vec().size(); ++i) {
        const double mu = f.mu.vec()[i];
        const double lv = f.logvar.vec()[i];
        loss.kl += 0.5 * (mu * mu + std::exp(lv) - 1.0 - lv);
    }
    loss.kl /= n;
    return loss;
}

}  // namespace

VaeLoss VaeModel::loss(const Matrix& x, const Matrix& eps) const {
    return compute_loss(run_forward(*this, x, eps), x);
}

VaeLoss VaeModel::loss_and_grad(const Matrix& x, const Matrix& eps, Grads& g) const {
    const Forward f = run_forward(*this, x, eps);
    const VaeLoss loss = compute_loss(f, x);
    const double inv_n = 1.0 / static_cast<double>(x.rows());

    Matrix dxhat(f.xhat.rows(), f.xhat.cols());
    for (std::size_t i = 0; i < dxhat.vec().size(); ++i)
        dxhat.vec()[i] = 2.0 * (f.xhat.vec()[i] - x.vec()[i]) * inv_n;

    Matrix dd2 = dec_out.backward(f.d2, dxhat, g.dec_out);
    dd2 = nnet::relu_backward(f.d2, dd2);
    Matrix dd1 = dec2.backward(f.d1, dd2, g.dec2);
    dd1 = nnet::relu_backward(f.d1, dd1);
    Matrix dz = dec1.backward(f.z, dd1, g.dec1);

    // z = μ + exp(lv/2)·ε, plus the KL terms on μ and lv directly.
    Matrix dmu = dz;
    Matrix dlv(dz.rows(), dz.cols());
    for (std::size_t i = 0; i < dz.rows(); ++i) {
        for (std::size_t j = 0; j < dz.cols(); ++j) {
            const double lv = f.logvar.at(i, j);
            dlv.at(i, j) = dz.at(i, j) * eps.at(i, j) * 0.5 * std::exp(0.5 * lv) +
                           0.5 * (std::exp(lv) - 1.0) * inv_n;
            dmu.at(i, j) += f.mu.at(i, j) * inv_n;
        }
    }

    Matrix dh2_a = enc_mu.backward(f.h2, dmu, g.enc_mu);
    Matrix dh2_b = enc_logvar.backward(f.h2, dlv, g.enc_logvar);
    for (std::size_t i = 0; i < dh2_a.vec().size(); ++i)
        dh2_a.vec()[i] += dh2_b.vec()[i];
    Matrix dh2 = nnet::relu_backward(f.h2, dh2_a);
    Matrix dh1 = enc2.backward(f.h1, dh2, g.enc2);
    dh1 = nnet::relu_backward(f.h1, dh1);
    enc1.backward(x, dh1, g.enc1);
    return loss;
}

std::vector<double> VaeModel::encode(const std::vector<int>& seq) const {
    const Matrix x = scale_sequences({seq});
    const Matrix mu = encode_batch(x);
    return {mu.at(0, 0), mu.at(0, 1)};
}

Matrix VaeModel::encode_batch(const Matrix& x) const {
    Matrix h1 = enc1.forward(x);
    nnet::relu_inplace(h1);
    Matrix h2 = enc2.forward(h1);
    nnet::relu_inplace(h2);
    return enc_mu.forward(h2);
}

VaeModel::Grads VaeModel::zero_grads() const {
    Grads g;
    g.enc1.zero_like(enc1);
    g.enc2.zero_like(enc2);
    g.enc_mu.zero_like(enc_mu);
    g.enc_logvar.zero_like(enc_logvar);
    g.dec1.zero_like(dec1);
    g.dec2.zero_like(dec2);
    g.dec_out.zero_like(dec_out);
    return g;
}

nnet::ParamView VaeModel::params() {
    nnet::ParamView v;
    enc1.add_to_view(v);
    enc2.add_to_view(v);
    enc_mu.add_to_view(v);
    enc_logvar.add_to_view(v);
    dec1.add_to_view(v);
    dec2.add_to_view(v);
    dec_out.add_to_view(v);
    return v;
}

nnet::ParamView VaeModel::grad_view(Grads& g) {
    nnet::ParamView v;
    g.enc1.add_to_view(v);
    g.enc2.add_to_view(v);
    g.enc_mu.add_to_view(v);
    g.enc_logvar.add_to_view(v);
    g.dec1.add_to_view(v);
    g.dec2.add_to_view(v);
    g.dec_out.add_to_view(v);
    return v;
}

VaeModel fit_vae(const std::vector<std::vector<int>>& sequences, int alphabet_size,
                 const VaeConfig& config) {
    if (sequences.size() < config.batch_size)
        throw DataError("fit_vae: fewer sequences than one batch");
    VaeModel m;
    m.alphabet_size = alphabet_size;
    m.config = config;
    Rng rng(config.seed);
    m.enc1.init(VaeModel::kSeqLen, 128, rng);
    m.enc2.init(128, 64, rng);
    m.enc_mu.init(64, VaeModel::kLatent, rng);
    m.enc_logvar.init(64, VaeModel::kLatent, rng);
    m.dec1.init(VaeModel::kLatent, 64, rng);
    m.dec2.init(64, 128, rng);
    m.dec_out.init(128, VaeModel::kSeqLen, rng);

    const Matrix x_all = m.scale_sequences(sequences);
    const std::size_t n = sequences.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t bsz = std::min(config.batch_size, n - start);
            Matrix xb(bsz, VaeModel::kSeqLen);
            for (std::size_t i = 0; i < bsz; ++i)
                for (std::size_t j = 0; j < VaeModel::kSeqLen; ++j)
                    xb.at(i, j) = x_all.at(order[start + i], j);
            Matrix eps(bsz, VaeModel::kLatent);
            for (auto& v : eps.vec()) v = rng.next_gaussian();

            auto grads = m.zero_grads();
            const VaeLoss loss = m.loss_and_grad(xb, eps, grads);
            if (!std::isfinite(loss.total())) {
                throw NumericalError(
                    "VAE: non-finite loss at epoch " + std::to_string(epoch) + " batch " +
                    std::to_string(batches) + " (recon=" +
                    std::to_string(loss.reconstruction) + ", kl=" + std::to_string(loss.kl) +
                    ")");
            }
            const double lr = config.learning_rate;
            m.enc1.sgd_step(grads.enc1, lr);
            m.enc2.sgd_step(grads.enc2, lr);
            m.enc_mu.sgd_step(grads.enc_mu, lr);
            m.enc_logvar.sgd_step(grads.enc_logvar, lr);
            m.dec1.sgd_step(grads.dec1, lr);
            m.dec2.sgd_step(grads.dec2, lr);
            m.dec_out.sgd_step(grads.dec_out, lr);
            epoch_loss += loss.total();
            ++batches;
        }
        m.epoch_loss_trace.push_back(epoch_loss / static_cast<double>(batches));
    }
    return m;
}

}  // namespace clid
