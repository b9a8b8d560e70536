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

#include "clid/lda.hpp"

#include <algorithm>
#include <unordered_map>

#include "clid/errors.hpp"
#include "clid/rng.hpp"

namespace clid {

LdaModel fit_lda(const std::vector<std::vector<std::string>>& docs,
                 const LdaConfig& config, const LdaSweepObserver& observer) {
    constexpr int K = LdaModel::kTopics;
    if (docs.size() < static_cast<std::size_t>(K))
        throw DataError("fit_lda: need at least as many documents as topics");

    LdaModel model;
    model.config = config;
    {
        std::unordered_map<std::string, std::uint64_t> freq;
        for (const auto& doc : docs)
            for (const auto& tok : doc) freq[tok]++;
        for (const auto& [tok, f] : freq)
            if (f >= static_cast<std::uint64_t>(config.min_term_freq)) model.vocab[tok] = 0;
        for (auto& [tok, col] : model.vocab) {
            col = model.vocab_names.size();
            model.vocab_names.push_back(tok);
        }
    }
    const std::size_t v = model.vocab_size();
    if (v == 0) throw DataError("fit_lda: empty vocabulary after pruning");

    // token ids per document, OOV dropped
    std::vector<std::vector<std::size_t>> ids(docs.size());
    std::size_t total_tokens = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto& tok : docs[d]) {
            const auto it = model.vocab.find(tok);
            if (it != model.vocab.end()) ids[d].push_back(it->second);
        }
        total_tokens += ids[d].size();
    }

    Matrix n_tw(K, v);
    std::vector<double> n_t(K, 0.0);
    std::vector<std::vector<double>> n_dt(docs.size(), std::vector<double>(K, 0.0));
    std::vector<std::vector<int>> z(docs.size());

    Rng rng(config.seed);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        z[d].resize(ids[d].size());
        for (std::size_t i = 0; i < ids[d].size(); ++i) {
            const int t = static_cast<int>(rng.next_below(K));
            z[d][i] = t;
            n_tw.at(t, ids[d][i]) += 1.0;
            n_t[t] += 1.0;
            n_dt[d][t] += 1.0;
        }
    }

    Matrix accum(K, v);
    std::vector<double> probs(K);
    const double vbeta = static_cast<double>(v) * config.beta;
    int sampled_sweeps = 0;

    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        for (std::size_t d = 0; d < docs.size(); ++d) {
            for (std::size_t i = 0; i < ids[d].size(); ++i) {
                const std::size_t w = ids[d][i];
                const int old_t = z[d][i];
                n_tw.at(old_t, w) -= 1.0;
                n_t[old_t] -= 1.0;
                n_dt[d][old_t] -= 1.0;

                double total = 0.0;
                for (int t = 0; t < K; ++t) {
                    probs[t] = (n_dt[d][t] + config.alpha) * (n_tw.at(t, w) + config.beta) /
                               (n_t[t] + vbeta);
                    total += probs[t];
                }
                const double target = rng.next_double() * total;
                int new_t = K - 1;
                double acc = 0.0;
                for (int t = 0; t < K; ++t) {
                    acc += probs[t];
                    if (acc >= target) {
                        new_t = t;
                        break;
                    }
                }
                z[d][i] = new_t;
                n_tw.at(new_t, w) += 1.0;
                n_t[new_t] += 1.0;
                n_dt[d][new_t] += 1.0;
            }
        }
        if (observer) observer(sweep, n_tw, n_t);
        if (sweep >= config.iterations - config.sample_window) {
            for (std::size_t i = 0; i < accum.vec().size(); ++i)
                accum.vec()[i] += n_tw.vec()[i];
            ++sampled_sweeps;
        }
    }

    if (sampled_sweeps == 0) sampled_sweeps = 1;
    model.topic_word = Matrix(K, v);
    model.topic_totals.assign(K, 0.0);
    for (int t = 0; t < K; ++t) {
        for (std::size_t w = 0; w < v; ++w) {
            model.topic_word.at(t, w) = accum.at(t, w) / sampled_sweeps;
            model.topic_totals[t] += model.topic_word.at(t, w);
        }
    }
    (void)total_tokens;
    return model;
}

std::vector<double> LdaModel::infer(const std::vector<std::string>& doc_tokens) const {
    constexpr int K = kTopics;
    constexpr int kSweeps = 100;
    constexpr int kAvgWindow = 50;

    std::vector<std::size_t> ids;
    for (const auto& tok : doc_tokens) {
        const auto it = vocab.find(tok);
        if (it != vocab.end()) ids.push_back(it->second);
    }
    if (ids.empty()) return std::vector<double>(K, 1.0 / K);

    const double vbeta = static_cast<double>(vocab_size()) * config.beta;
    std::vector<double> phi_denom(K);
    for (int t = 0; t < K; ++t) phi_denom[t] = topic_totals[t] + vbeta;

    Rng rng(config.seed);
    std::vector<int> z(ids.size());
    std::vector<double> n_dt(K, 0.0);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        z[i] = static_cast<int>(rng.next_below(K));
        n_dt[z[i]] += 1.0;
    }

    std::vector<double> probs(K), result(K, 0.0);
    const double len_alpha = static_cast<double>(ids.size()) + K * config.alpha;
    for (int sweep = 0; sweep < kSweeps; ++sweep) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            const std::size_t w = ids[i];
            n_dt[z[i]] -= 1.0;
            double total = 0.0;
            for (int t = 0; t < K; ++t) {
                probs[t] = (n_dt[t] + config.alpha) * (topic_word.at(t, w) + config.beta) /
                           phi_denom[t];
                total += probs[t];
            }
            const double target = rng.next_double() * total;
            int new_t = K - 1;
            double acc = 0.0;
            for (int t = 0; t < K; ++t) {
                acc += probs[t];
                if (acc >= target) {
                    new_t = t;
                    break;
                }
            }
            z[i] = new_t;
            n_dt[new_t] += 1.0;
        }
        if (sweep >= kSweeps - kAvgWindow) {
            for (int t = 0; t < K; ++t)
                result[t] += (n_dt[t] + config.alpha) / len_alpha;
        }
    }
    double total = 0.0;
    for (double& r : result) total += r;
    for (double& r : result) r /= total;
    return result;
}

Matrix LdaModel::topic_word_dist() const {
    Matrix dist = topic_word;
    const double vbeta = static_cast<double>(vocab_size()) * config.beta;
    for (int t = 0; t < kTopics; ++t) {
        const double denom = topic_totals[t] + vbeta;
        for (std::size_t w = 0; w < vocab_size(); ++w)
            dist.at(t, w) = (topic_word.at(t, w) + config.beta) / denom;
    }
    return dist;
}

std::vector<std::string> LdaModel::top_terms(int topic, std::size_t n) const {
    if (topic < 0 || topic >= kTopics) throw ConfigError("top_terms: topic out of range");
    const Matrix dist = topic_word_dist();
    std::vector<std::size_t> order(vocab_size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dist.at(topic, a) != dist.at(topic, b))
            return dist.at(topic, a) > dist.at(topic, b);
        return vocab_names[a] < vocab_names[b];
    });
    const std::size_t count = std::min(n, order.size());
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(vocab_names[order[i]]);
    return out;
}

}  // namespace clid
