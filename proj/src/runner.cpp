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

#include "clid/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "clid/errors.hpp"
#include "clid/rng.hpp"
#include "clid/version.hpp"

namespace clid {

void ExperimentConfig::validate() const {
    if (!valid_combination(feature_set, model)) {
        throw ConfigError(std::string("invalid combination: features '") +
                          feature_set_name(feature_set) + "' with model '" +
                          model_choice_name(model) + "'");
    }
    if (split.train_fraction <= 0.0 || split.train_fraction >= 1.0)
        throw ConfigError("train_fraction must be in (0, 1)");
    if (label_budget.fraction <= 0.0 || label_budget.fraction > 1.0)
        throw ConfigError("label_fraction must be in (0, 1]");
    if (synthetic_per_class == 0 && corpus_path.empty())
        throw ConfigError("synthetic_per_class must be positive");
}

namespace {

TrainedClassifier train_classifier(const ExperimentConfig& cfg,
                                   const FeaturePipeline& pipeline,
                                   const std::vector<std::string>& texts,
                                   const std::vector<int>& labels) {
    TrainedClassifier out;
    out.kind = cfg.model;
    switch (cfg.model) {
        case ModelChoice::Svm: {
            SvmConfig c = cfg.svm;
            c.seed = Rng::derive(cfg.master_seed, 4);
            out.svm = train_svm(pipeline.transform(texts), labels, c);
            break;
        }
        case ModelChoice::Nn: {
            NnConfig c = cfg.nn;
            c.seed = Rng::derive(cfg.master_seed, 4);
            out.nn = train_nn(pipeline.transform(texts), labels, c);
            break;
        }
        case ModelChoice::Cnn: {
            CnnConfig c = cfg.cnn;
            c.seed = Rng::derive(cfg.master_seed, 4);
            out.cnn = train_cnn(pipeline.sequences(texts), labels,
                                pipeline.alphabet.size(), c);
            break;
        }
    }
    return out;
}

std::vector<int> label_ints(const LabeledCorpus& c) {
    std::vector<int> y;
    y.reserve(c.size());
    for (const auto& s : c.samples) y.push_back(static_cast<int>(s.label));
    return y;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    LabeledCorpus corpus =
        config.corpus_path.empty()
            ? generate_synthetic(config.synthetic_seed, config.synthetic_per_class)
            : load_corpus(config.corpus_path);
    return run_experiment(config, corpus);
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const LabeledCorpus& corpus) {
    config.validate();
    if (corpus.size() == 0) throw DataError("experiment corpus is empty");

    // Per-component seeds all fan out from the master seed.
    SplitSpec split_spec = config.split;
    split_spec.seed = Rng::derive(config.master_seed, 1);
    LabelBudget budget = config.label_budget;
    budget.seed = Rng::derive(config.master_seed, 2);
    PipelineConfig pipe_cfg = config.pipeline;
    pipe_cfg.seed = Rng::derive(config.master_seed, 3);

    auto [train, test] = split(corpus, split_spec);
    if (train.size() == 0 || test.size() == 0)
        throw DataError("split produced an empty train or test set");

    ExperimentResult result;
    result.test_hash_before = corpus_hash(test);

    // Unsupervised fitting sees every training text but no labels.
    FeaturePipeline pipeline =
        fit_pipeline(corpus_texts(train), config.feature_set, pipe_cfg);

    const LabeledCorpus labelled = subsample_labels(train, budget);
    TrainedClassifier classifier =
        train_classifier(config, pipeline, corpus_texts(labelled), label_ints(labelled));

    result.test_hash_after = corpus_hash(test);
    if (result.test_hash_after != result.test_hash_before)
        throw DataError("test set changed between split and evaluation");

    const std::vector<int> y_pred = classifier.predict(pipeline, corpus_texts(test));
    result.report = evaluate(label_ints(test), y_pred);
    result.report.model = model_choice_name(config.model);
    result.report.features = feature_set_name(config.feature_set);
    result.report.label_fraction = config.label_budget.fraction;
    result.report.seed = config.master_seed;
    result.artifact.pipeline = std::move(pipeline);
    result.artifact.classifier = std::move(classifier);
    return result;
}

// ---------------------------------------------------------------------------
// Grid execution
// ---------------------------------------------------------------------------

namespace {

std::string canonical_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << c.corpus_path << '|' << c.synthetic_per_class << '|' << c.synthetic_seed
       << '|' << c.split.train_fraction << '|' << c.split.stratified << '|'
       << c.label_budget.fraction << '|' << feature_set_name(c.feature_set) << '|'
       << model_choice_name(c.model) << '|' << c.master_seed << '|'
       << c.pipeline.max_features << '|' << c.pipeline.ngram_min << '|'
       << c.pipeline.ngram_max << '|' << c.pipeline.max_seq_len << '|'
       << c.pipeline.vae.epochs << '|' << c.pipeline.lda.iterations << '|'
       << c.svm.epochs << '|' << c.nn.epochs << '|' << c.cnn.epochs << '|'
       << c.show_confusion;
    return os.str();
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::size_t grid_threads() {
    const char* env = std::getenv("CLID_THREADS");
    if (!env) return 1;
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<std::size_t>(v) : 1;
}

}  // namespace

ReportBundle run_grid(const std::vector<ExperimentConfig>& configs) {
    for (const auto& c : configs) c.validate();

    ReportBundle bundle;
    bundle.version = kVersion;
    bundle.config_hash = 1469598103934665603ULL;
    for (const auto& c : configs)
        bundle.config_hash = fnv1a(bundle.config_hash, canonical_config(c));
    bundle.cells.resize(configs.size());

    // Each distinct corpus is loaded once and shared read-only. A corpus
    // that fails to load marks its cells failed instead of aborting the grid.
    std::map<std::string, LabeledCorpus> file_corpora;
    std::map<std::string, std::string> corpus_errors;
    for (const auto& c : configs) {
        if (c.corpus_path.empty() || file_corpora.count(c.corpus_path) ||
            corpus_errors.count(c.corpus_path))
            continue;
        try {
            file_corpora[c.corpus_path] = load_corpus(c.corpus_path);
        } catch (const std::exception& e) {
            corpus_errors[c.corpus_path] = e.what();
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            GridCellResult& cell = bundle.cells[i];
            cell.config = configs[i];
            try {
                const auto err = corpus_errors.find(configs[i].corpus_path);
                if (err != corpus_errors.end()) throw DataError(err->second);
                ExperimentResult r =
                    configs[i].corpus_path.empty()
                        ? run_experiment(configs[i])
                        : run_experiment(configs[i], file_corpora.at(configs[i].corpus_path));
                cell.report = r.report;
                cell.confusion = r.report.cm.counts;
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
        }
    };

    const std::size_t n_threads = std::min(grid_threads(), configs.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return bundle;
}

std::string ReportBundle::to_json() const {
    std::ostringstream os;
    os << "{\"version\":\"" << version << "\",\"config_hash\":" << config_hash
       << ",\"cells\":[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ",";
        const auto& c = cells[i];
        if (c.failed) {
            std::string msg;
            for (char ch : c.error) {
                if (ch == '"' || ch == '\\') msg += '\\';
                msg += ch;
            }
            os << "{\"failed\":true,\"error\":\"" << msg << "\"}";
        } else {
            os << "{\"failed\":false,\"report\":" << c.report.to_json() << "}";
        }
    }
    os << "]}";
    return os.str();
}

std::string ReportBundle::to_table() const {
    std::ostringstream os;
    os << "feature             model  budget  acc  mcc  mF1\n";
    for (const auto& c : cells) {
        std::string feat = feature_set_name(c.config.feature_set);
        feat.resize(18, ' ');
        std::string model = model_choice_name(c.config.model);
        model.resize(5, ' ');
        os << feat << "  " << model << "  ";
        std::ostringstream b;
        b << c.config.label_budget.fraction;
        std::string budget = b.str();
        budget.resize(6, ' ');
        os << budget << "  ";
        if (c.failed) {
            os << "FAILED: " << c.error << "\n";
            continue;
        }
        auto pct = [](double r) {
            return static_cast<int>(std::floor(r * 100.0 + 0.5));
        };
        os << pct(c.report.accuracy) << "%  " << pct(c.report.mcc) << "%  "
           << pct(c.report.macro_f1) << "%\n";
    }
    for (const auto& c : cells) {
        if (c.failed || !c.config.show_confusion) continue;
        os << "\nconfusion (" << feature_set_name(c.config.feature_set) << ", "
           << model_choice_name(c.config.model) << ", budget "
           << c.config.label_budget.fraction << "); rows true, cols predicted\n";
        os << "          ";
        for (int j = 0; j < kNumClasses; ++j)
            os << label_code(static_cast<Label>(j)) << "      ";
        os << "\n";
        for (int i = 0; i < kNumClasses; ++i) {
            std::string name = label_name(static_cast<Label>(i));
            name.resize(8, ' ');
            os << name << "  ";
            for (int j = 0; j < kNumClasses; ++j) {
                std::string v = std::to_string(c.confusion[i][j]);
                v.resize(6, ' ');
                os << v << "  ";
            }
            os << "\n";
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// TOML subset parser
// ---------------------------------------------------------------------------

namespace {

struct TomlValue {
    enum class Type { String, Integer, Float, Boolean } type = Type::String;
    std::string str;
    std::int64_t integer = 0;
    double real = 0.0;
    bool boolean = false;

    double as_number(const std::string& key) const {
        if (type == Type::Integer) return static_cast<double>(integer);
        if (type == Type::Float) return real;
        throw ConfigError("config key '" + key + "' must be a number");
    }
    std::int64_t as_int(const std::string& key) const {
        if (type != Type::Integer)
            throw ConfigError("config key '" + key + "' must be an integer");
        return integer;
    }
    const std::string& as_str(const std::string& key) const {
        if (type != Type::String)
            throw ConfigError("config key '" + key + "' must be a string");
        return str;
    }
    bool as_bool(const std::string& key) const {
        if (type != Type::Boolean)
            throw ConfigError("config key '" + key + "' must be a boolean");
        return boolean;
    }
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

TomlValue parse_value(const std::string& raw, const std::string& origin, int line) {
    TomlValue v;
    if (raw.empty())
        throw ConfigError(origin + ":" + std::to_string(line) + ": missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw ConfigError(origin + ":" + std::to_string(line) +
                              ": unterminated string");
        v.type = TomlValue::Type::String;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.type = TomlValue::Type::Boolean;
        v.boolean = raw == "true";
        return v;
    }
    if (raw.find('.') != std::string::npos || raw.find('e') != std::string::npos ||
        raw.find('E') != std::string::npos) {
        char* end = nullptr;
        v.type = TomlValue::Type::Float;
        v.real = std::strtod(raw.c_str(), &end);
        if (end != raw.c_str() + raw.size())
            throw ConfigError(origin + ":" + std::to_string(line) + ": bad number '" +
                              raw + "'");
        return v;
    }
    char* end = nullptr;
    v.type = TomlValue::Type::Integer;
    v.integer = std::strtoll(raw.c_str(), &end, 10);
    if (end != raw.c_str() + raw.size())
        throw ConfigError(origin + ":" + std::to_string(line) + ": bad value '" + raw +
                          "'");
    return v;
}

using TomlTable = std::map<std::string, TomlValue>;

void apply_key(ExperimentConfig& c, const std::string& key, const TomlValue& v) {
    if (key == "corpus_path") {
        c.corpus_path = v.as_str(key);
    } else if (key == "synthetic_per_class") {
        c.synthetic_per_class = static_cast<std::size_t>(v.as_int(key));
    } else if (key == "synthetic_seed") {
        c.synthetic_seed = static_cast<std::uint64_t>(v.as_int(key));
    } else if (key == "train_fraction") {
        c.split.train_fraction = v.as_number(key);
    } else if (key == "stratified") {
        c.split.stratified = v.as_bool(key);
    } else if (key == "label_fraction") {
        c.label_budget.fraction = v.as_number(key);
    } else if (key == "features") {
        const auto fs = parse_feature_set(v.as_str(key));
        if (!fs) throw ConfigError("unknown feature set '" + v.str + "'");
        c.feature_set = *fs;
    } else if (key == "model") {
        const auto m = parse_model_choice(v.as_str(key));
        if (!m) throw ConfigError("unknown model '" + v.str + "'");
        c.model = *m;
    } else if (key == "seed") {
        c.master_seed = static_cast<std::uint64_t>(v.as_int(key));
    } else if (key == "show_confusion") {
        c.show_confusion = v.as_bool(key);
    } else if (key == "max_features") {
        c.pipeline.max_features = static_cast<std::size_t>(v.as_int(key));
    } else if (key == "ngram_min") {
        c.pipeline.ngram_min = static_cast<int>(v.as_int(key));
    } else if (key == "ngram_max") {
        c.pipeline.ngram_max = static_cast<int>(v.as_int(key));
    } else if (key == "max_seq_len") {
        c.pipeline.max_seq_len = static_cast<std::size_t>(v.as_int(key));
    } else if (key == "vae_epochs") {
        c.pipeline.vae.epochs = static_cast<int>(v.as_int(key));
    } else if (key == "vae_learning_rate") {
        c.pipeline.vae.learning_rate = v.as_number(key);
    } else if (key == "lda_iterations") {
        c.pipeline.lda.iterations = static_cast<int>(v.as_int(key));
    } else if (key == "lda_sample_window") {
        c.pipeline.lda.sample_window = static_cast<int>(v.as_int(key));
    } else if (key == "svm_epochs") {
        c.svm.epochs = static_cast<int>(v.as_int(key));
    } else if (key == "svm_learning_rate") {
        c.svm.learning_rate = v.as_number(key);
    } else if (key == "svm_lambda") {
        c.svm.lambda = v.as_number(key);
    } else if (key == "nn_epochs") {
        c.nn.epochs = static_cast<int>(v.as_int(key));
    } else if (key == "nn_learning_rate") {
        c.nn.learning_rate = v.as_number(key);
    } else if (key == "nn_dropout") {
        c.nn.dropout = v.as_number(key);
    } else if (key == "cnn_epochs") {
        c.cnn.epochs = static_cast<int>(v.as_int(key));
    } else if (key == "cnn_learning_rate") {
        c.cnn.learning_rate = v.as_number(key);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

}  // namespace

GridFile parse_grid_toml(const std::string& text, const std::string& origin) {
    TomlTable defaults;
    TomlTable output;
    std::vector<TomlTable> grid;
    TomlTable* current = &defaults;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) {
            // '#' inside a quoted string is not a comment.
            const std::size_t quote = line.find('"');
            if (quote == std::string::npos || hash < quote) line.resize(hash);
        }
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t == "[[grid]]") {
            grid.emplace_back();
            current = &grid.back();
            continue;
        }
        if (t == "[output]") {
            current = &output;
            continue;
        }
        if (t.front() == '[')
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": unsupported table '" + t + "'");
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const TomlValue value = parse_value(trim(t.substr(eq + 1)), origin, lineno);
        (*current)[key] = value;
    }

    GridFile file;
    if (output.count("json")) file.output_json = output.at("json").as_str("json");
    if (output.count("csv")) file.output_csv = output.at("csv").as_str("csv");

    if (grid.empty()) grid.emplace_back();  // minimal config: one default cell
    for (const auto& cell : grid) {
        ExperimentConfig c;
        for (const auto& [k, v] : defaults) apply_key(c, k, v);
        for (const auto& [k, v] : cell) apply_key(c, k, v);
        c.validate();
        file.cells.push_back(std::move(c));
    }
    return file;
}

GridFile load_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_grid_toml(buf.str(), path);
}

}  // namespace clid
