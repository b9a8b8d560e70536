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
#include "clid/corpus.hpp"
#include "clid/errors.hpp"
#include "clid/features.hpp"
#include "clid/rng.hpp"
#include "clid/vae.hpp"
#include "doctest.h"

using namespace clid;

namespace {

std::vector<std::vector<int>> fixture_sequences(std::size_t n, int alphabet_size,
                                                std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> seqs(n, std::vector<int>(VaeModel::kSeqLen, 0));
    for (auto& s : seqs) {
        const std::size_t len = 20 + rng.next_below(100);
        for (std::size_t i = 0; i < len; ++i)
            s[i] = 2 + static_cast<int>(rng.next_below(alphabet_size - 2));
    }
    return seqs;
}

VaeModel fresh_model(int alphabet_size, std::uint64_t seed) {
    Rng rng(seed);
    VaeModel m;
    m.alphabet_size = alphabet_size;
    m.enc1.init(VaeModel::kSeqLen, 128, rng);
    m.enc2.init(128, 64, rng);
    m.enc_mu.init(64, VaeModel::kLatent, rng);
    m.enc_logvar.init(64, VaeModel::kLatent, rng);
    m.dec1.init(VaeModel::kLatent, 64, rng);
    m.dec2.init(64, 128, rng);
    m.dec_out.init(128, VaeModel::kSeqLen, rng);
    return m;
}

}  // namespace

TEST_CASE("analytic KL identities") {
    // KL(N(mu, sigma^2) || N(0,1)) per dim = 0.5*(mu^2 + sigma^2 - 1 - log sigma^2)
    // (mu, logvar) = (0, 0) gives 0; (1, 0) gives 0.5.
    VaeModel m = fresh_model(10, 1);
    for (auto* layer : {&m.enc_mu, &m.enc_logvar}) {
        layer->w.fill(0.0);
        for (auto& b : layer->b) b = 0.0;
    }
    const auto seqs = fixture_sequences(4, 10, 2);
    const Matrix x = m.scale_sequences(seqs);
    Matrix eps(x.rows(), VaeModel::kLatent);  // zero noise
    const VaeLoss zero_kl = m.loss(x, eps);
    CHECK(zero_kl.kl == doctest::Approx(0.0).epsilon(1e-12));

    for (auto& b : m.enc_mu.b) b = 1.0;  // mu = 1 in every dim
    const VaeLoss unit_mu = m.loss(x, eps);
    CHECK(unit_mu.kl == doctest::Approx(0.5 * VaeModel::kLatent).epsilon(1e-12));
}

TEST_CASE("scale_sequences maps ids into [0,1]") {
    VaeModel m = fresh_model(20, 3);
    const auto seqs = fixture_sequences(3, 20, 4);
    const Matrix x = m.scale_sequences(seqs);
    CHECK(x.rows() == 3);
    CHECK(x.cols() == VaeModel::kSeqLen);
    for (double v : x.vec()) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK(x.at(0, 0) == doctest::Approx(seqs[0][0] / 20.0));
}

TEST_CASE("vae gradient check on a 4-sample batch") {
    VaeModel m = fresh_model(12, 5);
    const auto seqs = fixture_sequences(4, 12, 6);
    const Matrix x = m.scale_sequences(seqs);
    Rng noise(7);
    Matrix eps(x.rows(), VaeModel::kLatent);
    for (auto& v : eps.vec()) v = noise.next_gaussian();

    auto grads = m.zero_grads();
    m.loss_and_grad(x, eps, grads);
    auto params = m.params();
    auto gview = VaeModel::grad_view(grads);
    const double err = max_gradient_error(
        params, gview, [&]() { return m.loss(x, eps).total(); });
    CHECK(err <= 1e-4);
}

TEST_CASE("vae training loss decreases and encode is deterministic") {
    const auto seqs = fixture_sequences(128, 15, 8);
    VaeConfig cfg;
    cfg.epochs = 5;
    cfg.learning_rate = 1e-4;  // unstructured random input needs a gentle step
    const VaeModel m = fit_vae(seqs, 15, cfg);
    REQUIRE(m.epoch_loss_trace.size() == 5);
    CHECK(m.epoch_loss_trace.back() < m.epoch_loss_trace.front());

    const auto z1 = m.encode(seqs[0]);
    const auto z2 = m.encode(seqs[0]);
    REQUIRE(z1.size() == 2);
    CHECK(z1 == z2);

    // batch encode equals element-wise encode
    const Matrix x = m.scale_sequences(seqs);
    const Matrix zb = m.encode_batch(x);
    for (std::size_t i = 0; i < 10; ++i) {
        const auto zi = m.encode(seqs[i]);
        CHECK(zb.at(i, 0) == zi[0]);
        CHECK(zb.at(i, 1) == zi[1]);
    }
}

TEST_CASE("a diverging run raises a numerical error with diagnostics") {
    const auto seqs = fixture_sequences(64, 15, 8);
    VaeConfig cfg;
    cfg.epochs = 3;
    cfg.learning_rate = 10.0;
    CHECK_THROWS_WITH_AS(fit_vae(seqs, 15, cfg), doctest::Contains("epoch"),
                         NumericalError);
}

TEST_CASE("vae training is bitwise deterministic per seed") {
    const auto seqs = fixture_sequences(96, 9, 10);
    VaeConfig cfg;
    cfg.epochs = 2;
    cfg.learning_rate = 1e-4;
    const VaeModel a = fit_vae(seqs, 9, cfg);
    const VaeModel b = fit_vae(seqs, 9, cfg);
    CHECK(a.enc1.w.vec() == b.enc1.w.vec());
    CHECK(a.dec_out.w.vec() == b.dec_out.w.vec());
    CHECK(a.epoch_loss_trace == b.epoch_loss_trace);
    cfg.seed = 43;
    const VaeModel c = fit_vae(seqs, 9, cfg);
    CHECK(a.enc1.w.vec() != c.enc1.w.vec());
}
