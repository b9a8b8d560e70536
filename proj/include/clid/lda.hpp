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

#ifndef CLID_LDA_HPP
#define CLID_LDA_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "clid/matrix.hpp"

namespace clid {

struct LdaConfig {
    int iterations = 1000;
    int burn_in = 500;
    int sample_window = 100;  // trailing sweeps averaged into the counts
    double alpha = 0.1;
    double beta = 0.01;
    std::uint64_t seed = 42;
    int min_term_freq = 2;
};

// Called after each Gibbs sweep with (sweep index, topic-word counts,
// per-topic totals); used by the count-consistency checks.
using LdaSweepObserver =
    std::function<void(int, const Matrix&, const std::vector<double>&)>;

struct LdaModel {
    static constexpr int kTopics = 4;

    std::map<std::string, std::size_t> vocab;  // token → column
    std::vector<std::string> vocab_names;
    Matrix topic_word;                 // K×V counts, window-averaged
    std::vector<double> topic_totals;  // K
    LdaConfig config;

    std::size_t vocab_size() const { return vocab_names.size(); }

    // Fold-in Gibbs with frozen topic-word statistics: 100 sweeps,
    // proportions averaged over the last 50. OOV tokens are skipped;
    // an empty or all-OOV document yields the uniform vector.
    std::vector<double> infer(const std::vector<std::string>& doc_tokens) const;

    // Per-topic multinomial over the vocabulary (rows sum to 1).
    Matrix topic_word_dist() const;

    // n highest-probability terms, probability-descending, ties lexicographic.
    std::vector<std::string> top_terms(int topic, std::size_t n) const;
};

LdaModel fit_lda(const std::vector<std::vector<std::string>>& docs,
                 const LdaConfig& config = {},
                 const LdaSweepObserver& observer = nullptr);

}  // namespace clid

#endif  // CLID_LDA_HPP
