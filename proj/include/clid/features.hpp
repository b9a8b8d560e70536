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

#ifndef CLID_FEATURES_HPP
#define CLID_FEATURES_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "clid/corpus.hpp"
#include "clid/matrix.hpp"

namespace clid {

// Character → integer id mapping. 0 is padding, 1 is unknown, real
// characters get contiguous ids from 2 in codepoint order.
struct Alphabet {
    static constexpr int kPadId = 0;
    static constexpr int kUnkId = 1;

    std::map<char32_t, int> char_to_id;

    int size() const { return static_cast<int>(char_to_id.size()) + 2; }
    static Alphabet fit(const LabeledCorpus& corpus);
};

// Left-aligned ids, right-padded/truncated to max_len; unseen chars → unk.
std::vector<int> encode_chars(const std::string& text, const Alphabet& alphabet,
                              std::size_t max_len);

struct NgramVocab {
    std::map<std::string, std::size_t> ngram_to_col;
    std::vector<std::string> names;  // column → n-gram string
    int n_min = 1;
    int n_max = 3;
    std::size_t max_features = 3000;

    std::size_t size() const { return names.size(); }
};

// Most frequent character n-grams over the corpus (space counts as a
// character); ties broken lexicographically.
NgramVocab fit_ngram_vocab(const LabeledCorpus& corpus, int n_min = 1, int n_max = 3,
                           std::size_t max_features = 3000);

// Sparse raw counts, (column, count) pairs sorted by column.
std::vector<std::pair<std::size_t, double>> vectorize_ngrams(const std::string& text,
                                                             const NgramVocab& vocab);

struct TextStats {
    double avg_word_len = 0.0;
    double avg_consonants = 0.0;
};

TextStats text_stats(const std::string& text);

// Word uni-grams plus adjacent bi-grams joined by '_', in occurrence order.
std::vector<std::string> word_ngrams(const std::string& text);

// Per-column min-max scaling fitted on the training matrix and reused as-is
// on test data (values outside the training range are not clamped).
struct MinMaxScaler {
    std::vector<double> col_min;
    std::vector<double> col_max;

    static MinMaxScaler fit(const Matrix& x);
    void transform(Matrix& x) const;
};

// Dense n-gram count matrix for a batch of texts.
Matrix ngram_matrix(const std::vector<std::string>& texts, const NgramVocab& vocab);

// n×2 matrix of (avg_word_len, avg_consonants).
Matrix stats_matrix(const std::vector<std::string>& texts);

Matrix hconcat(const Matrix& a, const Matrix& b);

std::vector<std::string> corpus_texts(const LabeledCorpus& corpus);

}  // namespace clid

#endif  // CLID_FEATURES_HPP
