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

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clid/errors.hpp"
#include "clid/pca.hpp"
#include "clid/rng.hpp"
#include "clid/runner.hpp"
#include "clid/version.hpp"

namespace {

using namespace clid;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
}

std::string csv_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_matrix_csv(std::ostream& out, const Matrix& m,
                      const std::vector<std::string>& header) {
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out << ",";
        out << header[j];
    }
    out << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ",";
            out << m.at(i, j);
        }
        out << "\n";
    }
}

int cmd_ingest(const std::string& input, const std::string& output, bool dedup) {
    LoadReport report;
    LabeledCorpus corpus = load_corpus(input, &report);
    const std::size_t before = corpus.size();
    if (dedup) corpus = deduplicate(corpus);
    save_corpus(corpus, output);
    std::cout << "kept " << corpus.size() << " sentences (" << report.dropped
              << " dropped empty, " << before - corpus.size() << " duplicates)\n";
    return 0;
}

int cmd_stats(const std::string& input, const std::string& format) {
    const LabeledCorpus corpus = load_corpus(input);
    const StatsReport stats = corpus_stats(corpus);
    std::cout << (format == "json" ? stats.to_json() : stats.to_table()) << "\n";
    return 0;
}

int cmd_split(const std::string& input, const std::string& train_out,
              const std::string& test_out, const SplitSpec& spec) {
    const LabeledCorpus corpus = load_corpus(input);
    const auto [train, test] = split(corpus, spec);
    save_corpus(train, train_out);
    save_corpus(test, test_out);
    std::cout << "train " << train.size() << ", test " << test.size() << "\n";
    return 0;
}

int cmd_features_dump(const std::string& input, const std::string& output,
                      const std::string& pca_out, const PipelineConfig& cfg) {
    const LabeledCorpus corpus = load_corpus(input);
    const NgramVocab vocab =
        fit_ngram_vocab(corpus, cfg.ngram_min, cfg.ngram_max, cfg.max_features);
    const auto texts = corpus_texts(corpus);
    const Matrix features = hconcat(ngram_matrix(texts, vocab), stats_matrix(texts));

    std::vector<std::string> header;
    for (const auto& name : vocab.names) header.push_back(csv_escape(name));
    header.push_back("avg_word_len");
    header.push_back("avg_consonants");
    auto out = open_out(output);
    write_matrix_csv(out, features, header);

    if (!pca_out.empty()) {
        Matrix scaled = features;
        MinMaxScaler::fit(scaled).transform(scaled);
        const PcaModel pca = fit_pca(scaled, 2);
        auto pout = open_out(pca_out);
        pout << "pc1,pc2,label\n";
        pout.precision(17);
        for (std::size_t i = 0; i < scaled.rows(); ++i) {
            const auto z = pca_transform(pca, scaled.row(i));
            pout << z[0] << "," << z[1] << ","
                 << label_code(corpus.samples[i].label) << "\n";
        }
    }
    return 0;
}

FeatureSet unsup_method(const std::string& method) {
    if (method == "clusters") return FeatureSet::Clusters;
    if (method == "vae") return FeatureSet::Vae;
    if (method == "lda") return FeatureSet::Lda;
    throw ConfigError("unknown unsup method '" + method + "'");
}

int cmd_unsup_fit(const std::string& input, const std::string& method,
                  const std::string& output, std::uint64_t seed) {
    const LabeledCorpus corpus = load_corpus(input);
    PipelineConfig cfg;
    cfg.seed = seed;
    const FeaturePipeline pipeline =
        fit_pipeline(corpus_texts(corpus), unsup_method(method), cfg);
    save_pipeline(output, pipeline);
    std::cout << "saved " << method << " model to " << output << "\n";
    return 0;
}

int cmd_unsup_transform(const std::string& model_path, const std::string& input,
                        const std::string& output) {
    const FeaturePipeline pipeline = load_pipeline(model_path);
    const LabeledCorpus corpus = load_corpus(input);
    const Matrix features = pipeline.transform(corpus_texts(corpus));
    std::vector<std::string> header;
    for (std::size_t j = 0; j < features.cols(); ++j)
        header.push_back("f" + std::to_string(j));
    auto out = open_out(output);
    write_matrix_csv(out, features, header);
    return 0;
}

int cmd_unsup_lda_topics(const std::string& model_path, std::size_t terms) {
    const FeaturePipeline pipeline = load_pipeline(model_path);
    if (!pipeline.lda) throw DataError("model file does not contain an LDA model");
    for (int t = 0; t < LdaModel::kTopics; ++t) {
        std::cout << "topic " << t << ":";
        for (const auto& term : pipeline.lda->top_terms(t, terms))
            std::cout << " " << term;
        std::cout << "\n";
    }
    return 0;
}

int cmd_unsup_map(const std::string& model_path, const std::string& input,
                  const std::string& output) {
    const FeaturePipeline pipeline = load_pipeline(model_path);
    const LabeledCorpus corpus = load_corpus(input);
    const auto texts = corpus_texts(corpus);
    auto out = open_out(output);
    out.precision(17);
    if (pipeline.clusters) {
        const Matrix stats = pipeline.scaled_stat_matrix(texts);
        out << "pc1,pc2,kmeans,gmm,birch,agglomerative,label\n";
        for (std::size_t i = 0; i < stats.rows(); ++i) {
            const auto z = pca_transform(pipeline.clusters->pca, stats.row(i));
            out << z[0] << "," << z[1] << "," << pipeline.clusters->kmeans.assign(z)
                << "," << pipeline.clusters->gmm.assign(z) << ","
                << pipeline.clusters->birch.assign(z) << ","
                << pipeline.clusters->agglomerative.assign(z) << ","
                << label_code(corpus.samples[i].label) << "\n";
        }
    } else if (pipeline.vae) {
        const Matrix latent = pipeline.transform(texts);
        out << "z1,z2,label\n";
        for (std::size_t i = 0; i < latent.rows(); ++i)
            out << latent.at(i, 0) << "," << latent.at(i, 1) << ","
                << label_code(corpus.samples[i].label) << "\n";
    } else {
        throw DataError("map requires a clusters or vae model");
    }
    return 0;
}

int cmd_train(const std::string& input, const std::string& features,
              const std::string& model, const std::string& output,
              std::uint64_t seed) {
    const auto fs = parse_feature_set(features);
    if (!fs) throw ConfigError("unknown feature set '" + features + "'");
    const auto mc = parse_model_choice(model);
    if (!mc) throw ConfigError("unknown model '" + model + "'");
    if (!valid_combination(*fs, *mc))
        throw ConfigError("invalid combination: features '" + features +
                          "' with model '" + model + "'");

    const LabeledCorpus corpus = load_corpus(input);
    const auto texts = corpus_texts(corpus);
    std::vector<int> y;
    for (const auto& s : corpus.samples) y.push_back(static_cast<int>(s.label));

    PipelineConfig cfg;
    cfg.seed = Rng::derive(seed, 3);
    ClassifierArtifact artifact;
    artifact.pipeline = fit_pipeline(texts, *fs, cfg);
    artifact.classifier.kind = *mc;
    switch (*mc) {
        case ModelChoice::Svm: {
            SvmConfig c;
            c.seed = Rng::derive(seed, 4);
            artifact.classifier.svm = train_svm(artifact.pipeline.transform(texts), y, c);
            break;
        }
        case ModelChoice::Nn: {
            NnConfig c;
            c.seed = Rng::derive(seed, 4);
            artifact.classifier.nn = train_nn(artifact.pipeline.transform(texts), y, c);
            break;
        }
        case ModelChoice::Cnn: {
            CnnConfig c;
            c.seed = Rng::derive(seed, 4);
            artifact.classifier.cnn = train_cnn(artifact.pipeline.sequences(texts), y,
                                                artifact.pipeline.alphabet.size(), c);
            break;
        }
    }
    save_classifier(output, artifact);
    std::cout << "saved " << model << " (" << features << ") model to " << output
              << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input) {
    const ClassifierArtifact artifact = load_classifier(model_path);
    std::ifstream in(input);
    if (!in) throw DataError("cannot open input file: " + input);
    std::vector<std::string> texts;
    std::string line;
    while (std::getline(in, line)) texts.push_back(preprocess(line));
    if (texts.empty()) throw DataError("no input lines");
    const auto preds = artifact.classifier.predict(artifact.pipeline, texts);
    for (int p : preds) std::cout << label_code(static_cast<Label>(p)) << "\n";
    return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& format) {
    const GridFile grid = load_grid_file(config_path);
    const ReportBundle bundle = run_grid(grid.cells);
    if (format == "json") {
        std::cout << bundle.to_json() << "\n";
    } else {
        std::cout << bundle.to_table();
    }
    if (!grid.output_json.empty()) open_out(grid.output_json) << bundle.to_json() << "\n";
    if (!grid.output_csv.empty()) {
        auto out = open_out(grid.output_csv);
        out << EvalReport::csv_header() << "\n";
        for (const auto& cell : bundle.cells)
            if (!cell.failed) out << cell.report.to_csv_row() << "\n";
    }
    for (const auto& cell : bundle.cells)
        if (cell.failed)
            std::cerr << "cell failed (" << feature_set_name(cell.config.feature_set)
                      << ", " << model_choice_name(cell.config.model)
                      << "): " << cell.error << "\n";
    return 0;
}

int cmd_synth(std::uint64_t seed, std::size_t per_class, const std::string& output) {
    const LabeledCorpus corpus = generate_synthetic(seed, per_class);
    save_corpus(corpus, output);
    std::cout << "wrote " << corpus.size() << " synthetic sentences to " << output
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"clid: Celtic language identification toolkit"};
    app.set_version_flag("--version", clid::kVersion);
    app.require_subcommand(1);

    std::string input, output, model_path, format = "table";
    std::string train_out, test_out, pca_out, features_arg, model_arg, method;
    std::string config_path;
    std::uint64_t seed = 42;
    std::size_t per_class = 400, terms = 10;
    bool no_dedup = false;
    clid::SplitSpec split_spec;
    clid::PipelineConfig pipe_cfg;

    auto* ingest = app.add_subcommand("ingest", "Preprocess and deduplicate a corpus");
    ingest->add_option("--input", input)->required();
    ingest->add_option("--output", output)->required();
    ingest->add_flag("--no-dedup", no_dedup, "Keep duplicate sentences");

    auto* stats = app.add_subcommand("stats", "Corpus statistics");
    stats->add_option("--input", input)->required();
    stats->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* split_cmd = app.add_subcommand("split", "Train/test split");
    split_cmd->add_option("--input", input)->required();
    split_cmd->add_option("--train-out", train_out)->required();
    split_cmd->add_option("--test-out", test_out)->required();
    split_cmd->add_option("--fraction", split_spec.train_fraction);
    split_cmd->add_option("--seed", split_spec.seed);
    split_cmd->add_flag("!--no-stratify", split_spec.stratified);

    auto* features_cmd = app.add_subcommand("features", "Feature extraction");
    auto* dump = features_cmd->add_subcommand("dump", "Write feature matrix as CSV");
    dump->add_option("--input", input)->required();
    dump->add_option("--output", output)->required();
    dump->add_option("--pca-out", pca_out, "2-D PCA coordinates CSV");
    dump->add_option("--max-features", pipe_cfg.max_features);
    dump->add_option("--ngram-min", pipe_cfg.ngram_min);
    dump->add_option("--ngram-max", pipe_cfg.ngram_max);

    auto* unsup = app.add_subcommand("unsup", "Unsupervised models");
    auto* ufit = unsup->add_subcommand("fit", "Fit an unsupervised model");
    ufit->add_option("--input", input)->required();
    ufit->add_option("--method", method)
        ->required()
        ->check(CLI::IsMember({"clusters", "vae", "lda"}));
    ufit->add_option("--output", output)->required();
    ufit->add_option("--seed", seed);
    auto* utrans = unsup->add_subcommand("transform", "Feature vectors as CSV");
    utrans->add_option("--model", model_path)->required();
    utrans->add_option("--input", input)->required();
    utrans->add_option("--output", output)->required();
    auto* utopics = unsup->add_subcommand("lda-topics", "Top terms per topic");
    utopics->add_option("--model", model_path)->required();
    utopics->add_option("--terms", terms);
    auto* umap = unsup->add_subcommand("map", "2-D coordinates and cluster ids");
    umap->add_option("--model", model_path)->required();
    umap->add_option("--input", input)->required();
    umap->add_option("--output", output)->required();

    auto* train = app.add_subcommand("train", "Train a classifier");
    train->add_option("--input", input)->required();
    train->add_option("--features", features_arg)->required();
    train->add_option("--model", model_arg)->required();
    train->add_option("--output", output)->required();
    train->add_option("--seed", seed);

    auto* predict = app.add_subcommand("predict", "Predict labels for plain text");
    predict->add_option("--model-file", model_path)->required();
    predict->add_option("--input", input)->required();

    auto* experiment = app.add_subcommand("experiment", "Run an experiment grid");
    experiment->add_option("--config", config_path)->required();
    experiment->add_option("--format", format)->check(CLI::IsMember({"table", "json"}));

    auto* synth = app.add_subcommand("synth", "Generate the synthetic fixture corpus");
    synth->add_option("--seed", seed);
    synth->add_option("--per-class", per_class);
    synth->add_option("--output", output)->required();

    try {
        app.parse(argc, argv);
        if (*ingest) return cmd_ingest(input, output, !no_dedup);
        if (*stats) return cmd_stats(input, format);
        if (*split_cmd) return cmd_split(input, train_out, test_out, split_spec);
        if (*dump) return cmd_features_dump(input, output, pca_out, pipe_cfg);
        if (*ufit) return cmd_unsup_fit(input, method, output, seed);
        if (*utrans) return cmd_unsup_transform(model_path, input, output);
        if (*utopics) return cmd_unsup_lda_topics(model_path, terms);
        if (*umap) return cmd_unsup_map(model_path, input, output);
        if (*train) return cmd_train(input, features_arg, model_arg, output, seed);
        if (*predict) return cmd_predict(model_path, input);
        if (*experiment) return cmd_experiment(config_path, format);
        if (*synth) return cmd_synth(seed, per_class, output);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const clid::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const clid::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const clid::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
