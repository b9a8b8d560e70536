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

#ifndef CLID_CORPUS_HPP
#define CLID_CORPUS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace clid {

// Class order matches the confusion-matrix convention used in reports:
// Welsh, English, Irish, Scottish.
enum class Label : int { Welsh = 0, English = 1, Irish = 2, Scottish = 3 };

inline constexpr int kNumClasses = 4;

// Two-letter corpus-file codes: cy, en, ga, gd.
const char* label_code(Label l);
const char* label_name(Label l);
std::optional<Label> parse_label(const std::string& token);

struct LabeledSample {
    std::string text;  // preprocessed sentence
    Label label;
    std::string source_id;  // "file:line" provenance
};

struct LabeledCorpus {
    std::vector<LabeledSample> samples;
    std::array<std::size_t, kNumClasses> class_counts{};

    void recount();
    std::size_t size() const { return samples.size(); }
};

struct LoadReport {
    std::size_t kept = 0;
    std::size_t dropped = 0;  // lines emptied by preprocessing
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 42;
    bool stratified = true;
};

struct LabelBudget {
    double fraction = 1.0;
    std::uint64_t seed = 42;
};

struct ClassStats {
    std::size_t sentences = 0;
    std::size_t unique_sentences = 0;
    std::size_t words = 0;
    double avg_words_per_sentence = 0.0;  // 2-decimal, half-up
};

struct StatsReport {
    ClassStats total;
    std::array<ClassStats, kNumClasses> per_class;

    std::string to_table() const;
    std::string to_json() const;
};

// Lowercases, removes every non-letter codepoint, collapses whitespace.
// Idempotent; may return "".
std::string preprocess(const std::string& raw);

// Reads a `label<TAB>text` file, preprocessing every line and dropping the
// ones that come out empty. `#`-prefixed lines are ignored.
LabeledCorpus load_corpus(const std::string& path, LoadReport* report = nullptr);

void save_corpus(const LabeledCorpus& corpus, const std::string& path);

// Keeps the first occurrence of each exact preprocessed text.
LabeledCorpus deduplicate(const LabeledCorpus& corpus);

StatsReport corpus_stats(const LabeledCorpus& corpus);

// Stratified when spec.stratified: per-class train size is
// floor(fraction * class size). Deterministic per seed.
std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus,
                                              const SplitSpec& spec);

// Stratified per-class floor(fraction * class size); fraction 1 is identity.
LabeledCorpus subsample_labels(const LabeledCorpus& train, const LabelBudget& budget);

// Deterministic fixture corpus from four hard-coded order-2 character Markov
// chains. The Irish- and Scottish-like chains share part of their digraph
// mass; the other two are disjoint from everything.
LabeledCorpus generate_synthetic(std::uint64_t seed, std::size_t per_class,
                                 std::size_t avg_len = 8);

// Order-sensitive content hash over the (label, text) sequence.
std::uint64_t corpus_hash(const LabeledCorpus& corpus);

}  // namespace clid

#endif  // CLID_CORPUS_HPP
