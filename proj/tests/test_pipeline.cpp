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

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "clid/corpus.hpp"
#include "clid/errors.hpp"
#include "clid/pipeline.hpp"
#include "doctest.h"

using namespace clid;

namespace {

std::vector<std::string> fixture_texts(std::size_t per_class = 40) {
    const LabeledCorpus corpus = generate_synthetic(3, per_class);
    std::vector<std::string> texts;
    for (const auto& s : corpus.samples) texts.push_back(s.text);
    return texts;
}

PipelineConfig fast_config() {
    PipelineConfig cfg;
    cfg.vae.epochs = 2;
    cfg.lda.iterations = 40;
    cfg.lda.burn_in = 20;
    cfg.lda.sample_window = 10;
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path(name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("valid_combination enforces the chars and cnn rules") {
    CHECK(!valid_combination(FeatureSet::Chars, ModelChoice::Svm));
    CHECK(valid_combination(FeatureSet::Chars, ModelChoice::Nn));
    CHECK(valid_combination(FeatureSet::Chars, ModelChoice::Cnn));
    for (FeatureSet fs : {FeatureSet::Ngram, FeatureSet::NgramStats, FeatureSet::Clusters,
                          FeatureSet::Vae, FeatureSet::Lda, FeatureSet::ClustersNgram,
                          FeatureSet::VaeNgram, FeatureSet::LdaNgram}) {
        CHECK(valid_combination(fs, ModelChoice::Svm));
        CHECK(valid_combination(fs, ModelChoice::Nn));
        CHECK(!valid_combination(fs, ModelChoice::Cnn));
    }
}

TEST_CASE("feature set and model names round-trip through the parsers") {
    for (FeatureSet fs : {FeatureSet::Chars, FeatureSet::Ngram, FeatureSet::NgramStats,
                          FeatureSet::Clusters, FeatureSet::Vae, FeatureSet::Lda,
                          FeatureSet::ClustersNgram, FeatureSet::VaeNgram,
                          FeatureSet::LdaNgram}) {
        const auto parsed = parse_feature_set(feature_set_name(fs));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == fs);
    }
    for (ModelChoice m : {ModelChoice::Svm, ModelChoice::Nn, ModelChoice::Cnn}) {
        const auto parsed = parse_model_choice(model_choice_name(m));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == m);
    }
    CHECK(!parse_feature_set("bogus").has_value());
    CHECK(!parse_model_choice("tree").has_value());
}

TEST_CASE("transform emits the documented width per feature set") {
    const auto texts = fixture_texts();
    const PipelineConfig cfg = fast_config();

    const FeaturePipeline ngram = fit_pipeline(texts, FeatureSet::Ngram, cfg);
    const std::size_t v = ngram.vocab.size();
    CHECK(v > 0);
    CHECK(v <= cfg.max_features);
    CHECK(ngram.transform(texts).cols() == v);

    const FeaturePipeline stats = fit_pipeline(texts, FeatureSet::NgramStats, cfg);
    CHECK(stats.transform(texts).cols() == stats.vocab.size() + 2);

    const FeaturePipeline chars = fit_pipeline(texts, FeatureSet::Chars, cfg);
    const Matrix cm = chars.transform(texts);
    CHECK(cm.cols() == cfg.max_seq_len);
    CHECK(chars.sequences(texts).size() == texts.size());

    const FeaturePipeline clusters = fit_pipeline(texts, FeatureSet::Clusters, cfg);
    CHECK(clusters.transform(texts).cols() == 16);

    const FeaturePipeline vae = fit_pipeline(texts, FeatureSet::Vae, cfg);
    CHECK(vae.transform(texts).cols() == 2);

    const FeaturePipeline lda = fit_pipeline(texts, FeatureSet::Lda, cfg);
    CHECK(lda.transform(texts).cols() == 4);

    const FeaturePipeline combo = fit_pipeline(texts, FeatureSet::VaeNgram, cfg);
    CHECK(combo.transform(texts).cols() == combo.vocab.size() + 2);
    const FeaturePipeline ccombo = fit_pipeline(texts, FeatureSet::ClustersNgram, cfg);
    CHECK(ccombo.transform(texts).cols() == ccombo.vocab.size() + 16);
    const FeaturePipeline lcombo = fit_pipeline(texts, FeatureSet::LdaNgram, cfg);
    CHECK(lcombo.transform(texts).cols() == lcombo.vocab.size() + 4);
}

TEST_CASE("transform is pure and deterministic after fitting") {
    const auto texts = fixture_texts(25);
    const FeaturePipeline p = fit_pipeline(texts, FeatureSet::ClustersNgram, fast_config());
    const Matrix a = p.transform(texts);
    const Matrix b = p.transform(texts);
    CHECK(a.vec() == b.vec());
    // a single text transforms to the same row as within a batch
    const Matrix single = p.transform({texts[3]});
    for (std::size_t j = 0; j < a.cols(); ++j)
        CHECK(single.at(0, j) == a.at(3, j));
}

TEST_CASE("pipeline save and load round-trips byte for byte") {
    const auto texts = fixture_texts(25);
    for (FeatureSet fs : {FeatureSet::Ngram, FeatureSet::Clusters, FeatureSet::Vae,
                          FeatureSet::Lda}) {
        const FeaturePipeline p = fit_pipeline(texts, fs, fast_config());
        TempPath f1("clid_test_pipe_a.bin");
        TempPath f2("clid_test_pipe_b.bin");
        save_pipeline(f1.path, p);
        const FeaturePipeline loaded = load_pipeline(f1.path);
        CHECK(loaded.feature_set == fs);
        save_pipeline(f2.path, loaded);
        CHECK(read_file(f1.path) == read_file(f2.path));
        const Matrix before = p.transform(texts);
        const Matrix after = loaded.transform(texts);
        CHECK(before.vec() == after.vec());
    }
}

TEST_CASE("classifier artifact round-trips and predicts identically") {
    const LabeledCorpus corpus = generate_synthetic(3, 30);
    std::vector<std::string> texts;
    std::vector<int> y;
    for (const auto& s : corpus.samples) {
        texts.push_back(s.text);
        y.push_back(static_cast<int>(s.label));
    }
    ClassifierArtifact art;
    art.pipeline = fit_pipeline(texts, FeatureSet::Ngram, fast_config());
    art.classifier.kind = ModelChoice::Svm;
    art.classifier.svm = train_svm(art.pipeline.transform(texts), y);

    TempPath f("clid_test_artifact.bin");
    save_classifier(f.path, art);
    const ClassifierArtifact loaded = load_classifier(f.path);
    CHECK(loaded.classifier.kind == ModelChoice::Svm);
    CHECK(loaded.classifier.predict(loaded.pipeline, texts) ==
          art.classifier.predict(art.pipeline, texts));
}

TEST_CASE("loaders reject mismatched container kinds") {
    const auto texts = fixture_texts(20);
    const FeaturePipeline p = fit_pipeline(texts, FeatureSet::Ngram, fast_config());
    TempPath pipe("clid_test_kind_pipe.bin");
    save_pipeline(pipe.path, p);
    CHECK_THROWS_AS(load_classifier(pipe.path), DataError);

    ClassifierArtifact art;
    art.pipeline = p;
    art.classifier.kind = ModelChoice::Svm;
    std::vector<int> y(texts.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<int>(i % 4);
    art.classifier.svm = train_svm(p.transform(texts), y);
    TempPath clf("clid_test_kind_clf.bin");
    save_classifier(clf.path, art);
    CHECK_THROWS_AS(load_pipeline(clf.path), DataError);
}

TEST_CASE("loaders reject bad magic and unknown versions") {
    TempPath junk("clid_test_junk.bin");
    {
        std::ofstream out(junk.path, std::ios::binary);
        out << "NOPE this is not a model file";
    }
    CHECK_THROWS_AS(load_pipeline(junk.path), DataError);
    CHECK_THROWS_AS(load_classifier(junk.path), DataError);

    // corrupt the version field of a valid file
    const auto texts = fixture_texts(20);
    const FeaturePipeline p = fit_pipeline(texts, FeatureSet::Ngram, fast_config());
    TempPath versioned("clid_test_version.bin");
    save_pipeline(versioned.path, p);
    std::string bytes = read_file(versioned.path);
    REQUIRE(bytes.size() > 6);
    bytes[4] = static_cast<char>(0xFF);  // version lives after the 4-byte magic
    bytes[5] = static_cast<char>(0xFF);
    {
        std::ofstream out(versioned.path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_pipeline(versioned.path), DataError);

    CHECK_THROWS_AS(load_pipeline("clid_no_such_file.bin"), DataError);
}
