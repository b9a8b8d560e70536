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

#ifndef CLID_VAE_HPP
#define CLID_VAE_HPP

#include <cstdint>
#include <vector>

#include "clid/matrix.hpp"
#include "clid/nnet.hpp"

namespace clid {

struct VaeConfig {
    int epochs = 30;
    double learning_rate = 1e-3;
    std::size_t batch_size = 64;
    std::uint64_t seed = 42;
};

struct VaeLoss {
    double reconstruction = 0.0;
    double kl = 0.0;
    double total() const { return reconstruction + kl; }
};

// Fully-connected VAE over scaled character-id sequences; 2-D latent.
// Encoder 128→128→64→(μ:2, logvar:2), decoder 2→64→128→128.
struct VaeModel {
    static constexpr std::size_t kSeqLen = 128;
    static constexpr std::size_t kLatent = 2;

    nnet::Dense enc1, enc2, enc_mu, enc_logvar;
    nnet::Dense dec1, dec2, dec_out;
    int alphabet_size = 0;
    VaeConfig config;
    std::vector<double> epoch_loss_trace;

    struct Grads {
        nnet::Dense enc1, enc2, enc_mu, enc_logvar, dec1, dec2, dec_out;
    };

    // Ids divided by the alphabet size → values in [0,1].
    Matrix scale_sequences(const std::vector<std::vector<int>>& seqs) const;

    VaeLoss loss(const Matrix& x, const Matrix& eps) const;
    VaeLoss loss_and_grad(const Matrix& x, const Matrix& eps, Grads& grads) const;

    // Latent mean μ; no sampling at inference.
    std::vector<double> encode(const std::vector<int>& seq) const;
    Matrix encode_batch(const Matrix& x) const;

    Grads zero_grads() const;
    nnet::ParamView params();
    static nnet::ParamView grad_view(Grads& g);
};

VaeModel fit_vae(const std::vector<std::vector<int>>& sequences, int alphabet_size,
                 const VaeConfig& config = {});

}  // namespace clid

#endif  // CLID_VAE_HPP
