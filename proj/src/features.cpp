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

#include "clid/features.hpp"

#include <algorithm>
#include <unordered_map>

#include "clid/errors.hpp"
#include "clid/text.hpp"

namespace clid {

Alphabet Alphabet::fit(const LabeledCorpus& corpus) {
    Alphabet a;
    for (const auto& s : corpus.samples) {
        for (char32_t cp : text::utf8_decode(s.text)) a.char_to_id[cp] = 0;
    }
    int next = 2;
    for (auto& [cp, id] : a.char_to_id) id = next++;
    return a;
}

std::vector<int> encode_chars(const std::string& t, const Alphabet& alphabet,
                              std::size_t max_len) {
    std::vector<int> out(max_len, Alphabet::kPadId);
    const auto cps = text::utf8_decode(t);
    const std::size_t n = std::min(max_len, cps.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = alphabet.char_to_id.find(cps[i]);
        out[i] = (it == alphabet.char_to_id.end()) ? Alphabet::kUnkId : it->second;
    }
    return out;
}

namespace {

void count_ngrams(const std::string& t, int n_min, int n_max,
                  std::unordered_map<std::string, std::uint64_t>& counts) {
    const auto cps = text::utf8_decode(t);
    const int len = static_cast<int>(cps.size());
    for (int n = n_min; n <= n_max; ++n) {
        for (int i = 0; i + n <= len; ++i) {
            std::string key;
            for (int j = 0; j < n; ++j) key += text::utf8_encode_one(cps[i + j]);
            counts[key]++;
        }
    }
}

}  // namespace

NgramVocab fit_ngram_vocab(const LabeledCorpus& corpus, int n_min, int n_max,
                           std::size_t max_features) {
    if (corpus.samples.empty()) throw DataError("cannot fit n-gram vocab on empty corpus");
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& s : corpus.samples) count_ngrams(s.text, n_min, n_max, counts);

    std::vector<std::pair<std::string, std::uint64_t>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (items.size() > max_features) items.resize(max_features);

    NgramVocab vocab;
    vocab.n_min = n_min;
    vocab.n_max = n_max;
    vocab.max_features = max_features;
    // Columns in lexicographic order so feature names are stable.
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& item : items) {
        vocab.ngram_to_col[item.first] = vocab.names.size();
        vocab.names.push_back(item.first);
    }
    return vocab;
}

std::vector<std::pair<std::size_t, double>> vectorize_ngrams(const std::string& t,
                                                             const NgramVocab& vocab) {
    std::unordered_map<std::string, std::uint64_t> counts;
    count_ngrams(t, vocab.n_min, vocab.n_max, counts);
    std::vector<std::pair<std::size_t, double>> out;
    out.reserve(counts.size());
    for (const auto& [ngram, c] : counts) {
        const auto it = vocab.ngram_to_col.find(ngram);
        if (it != vocab.ngram_to_col.end())
            out.emplace_back(it->second, static_cast<double>(c));
    }
    std::sort(out.begin(), out.end());
    return out;
}

TextStats text_stats(const std::string& t) {
    TextStats st;
    if (t.empty()) return st;
    const auto cps = text::utf8_decode(t);
    std::size_t words = 1, letters = 0, consonants = 0;
    for (char32_t cp : cps) {
        if (cp == U' ') {
            ++words;
        } else {
            ++letters;
            if (!text::is_vowel(cp)) ++consonants;
        }
    }
    st.avg_word_len = static_cast<double>(letters) / static_cast<double>(words);
    st.avg_consonants = static_cast<double>(consonants) / static_cast<double>(words);
    return st;
}

std::vector<std::string> word_ngrams(const std::string& t) {
    std::vector<std::string> tokens;
    if (t.empty()) return tokens;
    std::vector<std::string> words;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.size(); ++i) {
        if (i == t.size() || t[i] == ' ') {
            if (i > start) words.push_back(t.substr(start, i - start));
            start = i + 1;
        }
    }
    tokens = words;
    for (std::size_t i = 0; i + 1 < words.size(); ++i)
        tokens.push_back(words[i] + "_" + words[i + 1]);
    return tokens;
}

MinMaxScaler MinMaxScaler::fit(const Matrix& x) {
    MinMaxScaler s;
    s.col_min.assign(x.cols(), 0.0);
    s.col_max.assign(x.cols(), 0.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        double lo = x.at(0, j), hi = x.at(0, j);
        for (std::size_t i = 1; i < x.rows(); ++i) {
            lo = std::min(lo, x.at(i, j));
            hi = std::max(hi, x.at(i, j));
        }
        s.col_min[j] = lo;
        s.col_max[j] = hi;
    }
    return s;
}

void MinMaxScaler::transform(Matrix& x) const {
    if (x.cols() != col_min.size())
        throw DataError("scaler dimensionality mismatch");
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const double range = col_max[j] - col_min[j];
        if (range == 0.0) {
            for (std::size_t i = 0; i < x.rows(); ++i) x.at(i, j) = 0.0;
        } else {
            for (std::size_t i = 0; i < x.rows(); ++i)
                x.at(i, j) = (x.at(i, j) - col_min[j]) / range;
        }
    }
}

Matrix ngram_matrix(const std::vector<std::string>& texts, const NgramVocab& vocab) {
    Matrix out(texts.size(), vocab.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        for (const auto& [col, count] : vectorize_ngrams(texts[i], vocab))
            out.at(i, col) = count;
    }
    return out;
}

Matrix stats_matrix(const std::vector<std::string>& texts) {
    Matrix out(texts.size(), 2);
    for (std::size_t i = 0; i < texts.size(); ++i) {
        const TextStats st = text_stats(texts[i]);
        out.at(i, 0) = st.avg_word_len;
        out.at(i, 1) = st.avg_consonants;
    }
    return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DataError("hconcat: row count mismatch");
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(i, a.cols() + j) = b.at(i, j);
    }
    return out;
}

std::vector<std::string> corpus_texts(const LabeledCorpus& corpus) {
    std::vector<std::string> texts;
    texts.reserve(corpus.samples.size());
    for (const auto& s : corpus.samples) texts.push_back(s.text);
    return texts;
}

}  // namespace clid
