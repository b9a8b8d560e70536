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

#include "clid/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "clid/errors.hpp"
#include "clid/rng.hpp"
#include "clid/text.hpp"

namespace clid {

const char* label_code(Label l) {
    switch (l) {
        case Label::Welsh: return "cy";
        case Label::English: return "en";
        case Label::Irish: return "ga";
        case Label::Scottish: return "gd";
    }
    return "?";
}

const char* label_name(Label l) {
    switch (l) {
        case Label::Welsh: return "welsh";
        case Label::English: return "english";
        case Label::Irish: return "irish";
        case Label::Scottish: return "scottish";
    }
    return "?";
}

std::optional<Label> parse_label(const std::string& token) {
    if (token == "cy" || token == "welsh") return Label::Welsh;
    if (token == "en" || token == "english") return Label::English;
    if (token == "ga" || token == "irish") return Label::Irish;
    if (token == "gd" || token == "scottish") return Label::Scottish;
    return std::nullopt;
}

void LabeledCorpus::recount() {
    class_counts = {};
    for (const auto& s : samples) class_counts[static_cast<int>(s.label)]++;
}

std::string preprocess(const std::string& raw) {
    const auto cps = text::utf8_decode(raw);
    std::vector<char32_t> out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t cp : cps) {
        if (text::is_letter(cp)) {
            if (pending_space && !out.empty()) out.push_back(U' ');
            pending_space = false;
            out.push_back(text::to_lower(cp));
        } else if (cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r') {
            pending_space = true;
        }
        // every other codepoint (punctuation, digits, symbols) is removed
        // without acting as a separator; "don't" → "dont" is NOT the rule
        // here: apostrophes vanish but do not join words either way because
        // they never emit a character
    }
    return text::utf8_encode(out);
}

LabeledCorpus load_corpus(const std::string& path, LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);
    LabeledCorpus corpus;
    LoadReport rep;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("malformed line (no tab) at line " + std::to_string(lineno) +
                            " in " + path);
        }
        const std::string token = line.substr(0, tab);
        const auto label = parse_label(token);
        if (!label) {
            throw DataError("unknown label '" + token + "' at line " +
                            std::to_string(lineno));
        }
        std::string cleaned = preprocess(line.substr(tab + 1));
        if (cleaned.empty()) {
            rep.dropped++;
            continue;
        }
        rep.kept++;
        corpus.samples.push_back(
            {std::move(cleaned), *label, path + ":" + std::to_string(lineno)});
    }
    corpus.recount();
    if (report) *report = rep;
    return corpus;
}

void save_corpus(const LabeledCorpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write corpus file: " + path);
    for (const auto& s : corpus.samples)
        out << label_code(s.label) << '\t' << s.text << '\n';
}

LabeledCorpus deduplicate(const LabeledCorpus& corpus) {
    LabeledCorpus out;
    std::unordered_set<std::string> seen;
    seen.reserve(corpus.samples.size() * 2);
    for (const auto& s : corpus.samples) {
        if (seen.insert(s.text).second) out.samples.push_back(s);
    }
    out.recount();
    return out;
}

namespace {

double round2_half_up(double x) {
    return std::floor(x * 100.0 + 0.5) / 100.0;
}

std::size_t count_words(const std::string& text) {
    if (text.empty()) return 0;
    std::size_t words = 1;
    for (char c : text)
        if (c == ' ') ++words;
    return words;
}

void finish_stats(ClassStats& cs) {
    cs.avg_words_per_sentence =
        cs.sentences == 0
            ? 0.0
            : round2_half_up(static_cast<double>(cs.words) / static_cast<double>(cs.sentences));
}

}  // namespace

StatsReport corpus_stats(const LabeledCorpus& corpus) {
    StatsReport rep;
    std::array<std::unordered_set<std::string>, kNumClasses> uniq;
    std::unordered_set<std::string> uniq_total;
    for (const auto& s : corpus.samples) {
        const int c = static_cast<int>(s.label);
        const std::size_t w = count_words(s.text);
        rep.per_class[c].sentences++;
        rep.per_class[c].words += w;
        uniq[c].insert(s.text);
        rep.total.sentences++;
        rep.total.words += w;
        uniq_total.insert(s.text);
    }
    for (int c = 0; c < kNumClasses; ++c) {
        rep.per_class[c].unique_sentences = uniq[c].size();
        finish_stats(rep.per_class[c]);
    }
    rep.total.unique_sentences = uniq_total.size();
    finish_stats(rep.total);
    return rep;
}

std::string StatsReport::to_table() const {
    std::ostringstream os;
    os << "column              total    irish scottish    welsh  english\n";
    auto row = [&](const char* name, auto get) {
        os << name;
        for (int pad = static_cast<int>(std::string(name).size()); pad < 16; ++pad)
            os << ' ';
        std::array<const ClassStats*, 5> cols = {
            &total, &per_class[static_cast<int>(Label::Irish)],
            &per_class[static_cast<int>(Label::Scottish)],
            &per_class[static_cast<int>(Label::Welsh)],
            &per_class[static_cast<int>(Label::English)]};
        for (const ClassStats* cs : cols) {
            std::ostringstream cell;
            cell << get(*cs);
            std::string v = cell.str();
            for (int pad = static_cast<int>(v.size()); pad < 9; ++pad) os << ' ';
            os << v;
        }
        os << '\n';
    };
    row("sentences", [](const ClassStats& c) { return std::to_string(c.sentences); });
    row("unique", [](const ClassStats& c) { return std::to_string(c.unique_sentences); });
    row("words", [](const ClassStats& c) { return std::to_string(c.words); });
    row("avg_words", [](const ClassStats& c) {
        std::ostringstream v;
        v.setf(std::ios::fixed);
        v.precision(2);
        v << c.avg_words_per_sentence;
        return v.str();
    });
    return os.str();
}

std::string StatsReport::to_json() const {
    auto obj = [](const ClassStats& c) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(2);
        os << "{\"sentences\":" << c.sentences << ",\"unique_sentences\":"
           << c.unique_sentences << ",\"words\":" << c.words
           << ",\"avg_words_per_sentence\":" << c.avg_words_per_sentence << "}";
        return os.str();
    };
    std::ostringstream os;
    os << "{\"total\":" << obj(total)
       << ",\"irish\":" << obj(per_class[static_cast<int>(Label::Irish)])
       << ",\"scottish\":" << obj(per_class[static_cast<int>(Label::Scottish)])
       << ",\"welsh\":" << obj(per_class[static_cast<int>(Label::Welsh)])
       << ",\"english\":" << obj(per_class[static_cast<int>(Label::English)]) << "}";
    return os.str();
}

namespace {

// Stratified index selection: per class, shuffle the class's indices with a
// class-derived seed and take the first floor(fraction * size).
std::array<std::vector<std::size_t>, kNumClasses> indices_by_class(
    const LabeledCorpus& corpus) {
    std::array<std::vector<std::size_t>, kNumClasses> by_class;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i)
        by_class[static_cast<int>(corpus.samples[i].label)].push_back(i);
    return by_class;
}

}  // namespace

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus,
                                              const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
        throw ConfigError("train_fraction must be in (0,1)");
    auto by_class = indices_by_class(corpus);
    for (int c = 0; c < kNumClasses; ++c) {
        if (corpus.class_counts[c] > 0 && by_class[c].size() < 2)
            throw DataError(std::string("class '") + label_name(static_cast<Label>(c)) +
                            "' has fewer than 2 samples");
    }
    std::vector<bool> in_train(corpus.samples.size(), false);
    if (spec.stratified) {
        for (int c = 0; c < kNumClasses; ++c) {
            auto& idx = by_class[c];
            Rng rng(Rng::derive(spec.seed, static_cast<std::uint64_t>(c)));
            rng.shuffle(idx);
            const std::size_t n_train =
                static_cast<std::size_t>(std::floor(spec.train_fraction * idx.size()));
            for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
        }
    } else {
        std::vector<std::size_t> idx(corpus.samples.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        Rng rng(spec.seed);
        rng.shuffle(idx);
        const std::size_t n_train =
            static_cast<std::size_t>(std::floor(spec.train_fraction * idx.size()));
        for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
    }
    LabeledCorpus train, test;
    for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
        (in_train[i] ? train : test).samples.push_back(corpus.samples[i]);
    }
    train.recount();
    test.recount();
    return {std::move(train), std::move(test)};
}

LabeledCorpus subsample_labels(const LabeledCorpus& train, const LabelBudget& budget) {
    if (budget.fraction <= 0.0 || budget.fraction > 1.0)
        throw ConfigError("label budget fraction must be in (0,1]");
    if (budget.fraction == 1.0) return train;
    auto by_class = indices_by_class(train);
    std::vector<bool> keep(train.samples.size(), false);
    for (int c = 0; c < kNumClasses; ++c) {
        auto& idx = by_class[c];
        Rng rng(Rng::derive(budget.seed, 16 + static_cast<std::uint64_t>(c)));
        rng.shuffle(idx);
        const std::size_t n_keep =
            static_cast<std::size_t>(std::floor(budget.fraction * idx.size()));
        for (std::size_t i = 0; i < n_keep; ++i) keep[idx[i]] = true;
    }
    LabeledCorpus out;
    for (std::size_t i = 0; i < train.samples.size(); ++i)
        if (keep[i]) out.samples.push_back(train.samples[i]);
    out.recount();
    return out;
}

namespace {

// Seed material for the four fixture chains. The Irish- and Scottish-like
// chains share the first block, which carries roughly 40% of their digraph
// mass; the Welsh- and English-like chains are distinct from everything.
constexpr const char* kSharedCeltic =
    "agus an ceann air an taigh agus na daoine anns an ait agus cha robh iad ann "
    "agus bha an cat aig an doras agus chan eil fios aca air an duine anns an ath";
constexpr const char* kIrishOnly =
    "nior mhaith liom imeacht go dti an baile mor agus duirt siad go raibh an la "
    "go brea inniu sa samhradh agus beidh me ag dul abhaile anois ta an fharraige "
    "go halainn ar maidin agus chonaic me an ghrian ag eiri os cionn na gcnoc "
    "nuair a bhi an aimsir go dona thainig na paisti isteach on ngairdin agus "
    "d ith siad a ndinnear go luath bionn an muinteoir ag leamh leabhair sa "
    "seomra ranga gach maidin agus scriobhann na daltai a gcuid ceachtanna";
constexpr const char* kScottishOnly =
    "bha sinn a faicinn gu bheil thu sgith agus tha mi uabhasach toilichte a bhith "
    "comhla ribh anns a mhadainn agus bidh sinn a falbh a maireach chunnaic mi "
    "a mhuir mhor bhreagha bho mhullach a bheinn agus bha na h eoin a seinn anns "
    "a choille nuair a thainig an geamhradh bha an sneachda trom air a mhonadh "
    "agus dh fhuirich sinn a staigh ri taobh an teine ag innse sgeulachdan "
    "bhiodh a chlann a cluich a muigh air an traigh fad an fheasgair";
constexpr const char* kWelshLike =
    "mae y dydd yn dda iawn a mae y dyn yn mynd i lawr y ffordd fawr gyda y ci "
    "mawr du a mae y plant yn chwarae wrth y mur melyn roedd yr haul yn "
    "disgleirio dros y mynyddoedd uchel a chanodd yr adar yn y coed wrth i ni "
    "gerdded drwy y pentref bach hyfryd gwelsom yr afon llydan yn llifo heibio "
    "yr eglwys hen a phrynodd y ferch fara ffres o y siop fach roedd pawb yn "
    "hapus iawn yn ystod yr haf pan ddaeth yr ymwelwyr i weld y castell";
constexpr const char* kEnglishLike =
    "the people went to the house and they said that it was a good day for them "
    "to see the old town near the river with the tall trees when the morning "
    "light reached the quiet street the children walked slowly towards the "
    "school and their teacher stood waiting beside the wooden gate during the "
    "long summer evenings the farmers worked in the green fields until the sun "
    "went down behind the distant hills and everyone returned home for supper";
// Neutral short words mixed into every class so the word-level (topic)
// signal is much weaker than the character-level one.
constexpr const char* kCommonWords =
    "is in an la ti se no ma do ra mi ne ta lo sa am el or un it os ul";

// Order-2 character chain counted cyclically over its seed text, so every
// reachable state has at least one successor.
class MarkovChain {
  public:
    explicit MarkovChain(const std::string& seed_text) : text_(seed_text) {
        const std::size_t n = text_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::string state = {text_[i], text_[(i + 1) % n]};
            table_[state].push_back(text_[(i + 2) % n]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (text_[i] == ' ' && text_[(i + 1) % n] != ' ') starts_.push_back((i + 1) % n);
        }
    }

    // min_len > 0 retries short draws so the word is almost surely unique
    // in a generated corpus (keeps the word-level signal weak).
    std::string word(Rng& rng, std::size_t min_len = 0) const {
        std::string w;
        for (int attempt = 0; attempt < 20; ++attempt) {
            w = word_once(rng);
            if (w.size() >= min_len) break;
        }
        return w;
    }

    // common/common_prob: chain of class-neutral filler words mixed in.
    std::string sentence(Rng& rng, std::size_t avg_len, const MarkovChain* common,
                         double common_prob) const {
        const std::size_t jitter = rng.next_below(5);  // 0..4
        std::size_t len = avg_len + jitter;
        len = (len >= 3) ? len - 2 : 1;
        std::string s;
        for (std::size_t i = 0; i < len; ++i) {
            if (i) s += ' ';
            if (common && rng.next_double() < common_prob)
                s += common->word(rng);
            else
                s += word(rng, 5);
        }
        return s;
    }

  private:
    std::string word_once(Rng& rng) const {
        const std::size_t n = text_.size();
        const std::size_t pos = starts_[rng.next_below(starts_.size())];
        std::string w = {text_[pos], text_[(pos + 1) % n]};
        if (w[1] == ' ') return w.substr(0, 1);
        while (w.size() < 12) {
            const std::string state = w.substr(w.size() - 2);
            const auto it = table_.find(state);
            if (it == table_.end()) break;
            const char next = it->second[rng.next_below(it->second.size())];
            if (next == ' ') break;
            w += next;
        }
        return w;
    }

    std::string text_;
    std::map<std::string, std::string> table_;
    std::vector<std::size_t> starts_;
};

}  // namespace

LabeledCorpus generate_synthetic(std::uint64_t seed, std::size_t per_class,
                                 std::size_t avg_len) {
    if (per_class < 1) throw ConfigError("per_class must be >= 1");
    const MarkovChain chains[kNumClasses] = {
        MarkovChain(kWelshLike),
        MarkovChain(kEnglishLike),
        MarkovChain(std::string(kSharedCeltic) + " " + kIrishOnly),
        MarkovChain(std::string(kSharedCeltic) + " " + kScottishOnly),
    };
    const MarkovChain common(kCommonWords);
    LabeledCorpus corpus;
    for (int c = 0; c < kNumClasses; ++c) {
        Rng rng(Rng::derive(seed, 32 + static_cast<std::uint64_t>(c)));
        for (std::size_t i = 0; i < per_class; ++i) {
            LabeledSample s;
            s.text = chains[c].sentence(rng, avg_len, &common, 0.5);
            s.label = static_cast<Label>(c);
            s.source_id = "synthetic:" + std::string(label_code(s.label)) + ":" +
                          std::to_string(i);
            corpus.samples.push_back(std::move(s));
        }
    }
    corpus.recount();
    return corpus;
}

std::uint64_t corpus_hash(const LabeledCorpus& corpus) {
    // FNV-1a over the (label, text) sequence; order-sensitive.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](unsigned char b) {
        h ^= b;
        h *= 0x100000001B3ULL;
    };
    for (const auto& s : corpus.samples) {
        mix(static_cast<unsigned char>(static_cast<int>(s.label)));
        for (char c : s.text) mix(static_cast<unsigned char>(c));
        mix(0xFF);
    }
    return h;
}

}  // namespace clid
