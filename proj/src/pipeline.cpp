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

#include "clid/pipeline.hpp"

#include <fstream>

#include "clid/errors.hpp"
#include "clid/rng.hpp"
#include "clid/serialize.hpp"
#include "clid/text.hpp"

namespace clid {

const char* feature_set_name(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::Chars: return "chars";
        case FeatureSet::Ngram: return "ngram";
        case FeatureSet::NgramStats: return "ngram+stats";
        case FeatureSet::Clusters: return "clusters";
        case FeatureSet::Vae: return "vae";
        case FeatureSet::Lda: return "lda";
        case FeatureSet::ClustersNgram: return "clusters+ngram";
        case FeatureSet::VaeNgram: return "vae+ngram";
        case FeatureSet::LdaNgram: return "lda+ngram";
    }
    return "?";
}

const char* model_choice_name(ModelChoice m) {
    switch (m) {
        case ModelChoice::Svm: return "svm";
        case ModelChoice::Nn: return "nn";
        case ModelChoice::Cnn: return "cnn";
    }
    return "?";
}

std::optional<FeatureSet> parse_feature_set(const std::string& s) {
    for (FeatureSet fs :
         {FeatureSet::Chars, FeatureSet::Ngram, FeatureSet::NgramStats,
          FeatureSet::Clusters, FeatureSet::Vae, FeatureSet::Lda,
          FeatureSet::ClustersNgram, FeatureSet::VaeNgram, FeatureSet::LdaNgram}) {
        if (s == feature_set_name(fs)) return fs;
    }
    return std::nullopt;
}

std::optional<ModelChoice> parse_model_choice(const std::string& s) {
    for (ModelChoice m : {ModelChoice::Svm, ModelChoice::Nn, ModelChoice::Cnn})
        if (s == model_choice_name(m)) return m;
    return std::nullopt;
}

bool valid_combination(FeatureSet fs, ModelChoice m) {
    if (fs == FeatureSet::Chars) return m == ModelChoice::Nn || m == ModelChoice::Cnn;
    return m != ModelChoice::Cnn;
}

namespace {

bool needs_ngram_space(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::Chars:
        case FeatureSet::Vae:
        case FeatureSet::Lda:
            return false;
        default:
            return true;
    }
}

bool needs_alphabet(FeatureSet fs) {
    return fs == FeatureSet::Chars || fs == FeatureSet::Vae ||
           fs == FeatureSet::VaeNgram;
}

}  // namespace

Matrix FeaturePipeline::scaled_stat_matrix(const std::vector<std::string>& texts) const {
    Matrix m = hconcat(ngram_matrix(texts, vocab), stats_matrix(texts));
    scaler.transform(m);
    return m;
}

std::vector<std::vector<int>> FeaturePipeline::sequences(
    const std::vector<std::string>& texts) const {
    std::vector<std::vector<int>> out;
    out.reserve(texts.size());
    for (const auto& t : texts)
        out.push_back(encode_chars(t, alphabet, config.max_seq_len));
    return out;
}

namespace {

Matrix slice_cols(const Matrix& m, std::size_t count) {
    Matrix out(m.rows(), count);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < count; ++j) out.at(i, j) = m.at(i, j);
    return out;
}

}  // namespace

Matrix FeaturePipeline::transform(const std::vector<std::string>& texts) const {
    switch (feature_set) {
        case FeatureSet::Chars: {
            const auto seqs = sequences(texts);
            Matrix out(texts.size(), config.max_seq_len);
            const double inv = 1.0 / static_cast<double>(alphabet.size());
            for (std::size_t i = 0; i < seqs.size(); ++i)
                for (std::size_t j = 0; j < seqs[i].size(); ++j)
                    out.at(i, j) = seqs[i][j] * inv;
            return out;
        }
        case FeatureSet::NgramStats:
            return scaled_stat_matrix(texts);
        case FeatureSet::Ngram:
            return slice_cols(scaled_stat_matrix(texts), vocab.size());
        case FeatureSet::Clusters: {
            const Matrix stats = scaled_stat_matrix(texts);
            Matrix out(texts.size(), 16);
            for (std::size_t i = 0; i < stats.rows(); ++i) {
                const auto f = clusters->features(stats.row(i));
                for (std::size_t j = 0; j < 16; ++j) out.at(i, j) = f[j];
            }
            return out;
        }
        case FeatureSet::Vae: {
            const auto seqs = sequences(texts);
            return vae->encode_batch(vae->scale_sequences(seqs));
        }
        case FeatureSet::Lda: {
            Matrix out(texts.size(), LdaModel::kTopics);
            for (std::size_t i = 0; i < texts.size(); ++i) {
                const auto p = lda->infer(word_ngrams(texts[i]));
                for (int j = 0; j < LdaModel::kTopics; ++j) out.at(i, j) = p[j];
            }
            return out;
        }
        case FeatureSet::ClustersNgram: {
            const Matrix stats = scaled_stat_matrix(texts);
            Matrix unsup(texts.size(), 16);
            for (std::size_t i = 0; i < stats.rows(); ++i) {
                const auto f = clusters->features(stats.row(i));
                for (std::size_t j = 0; j < 16; ++j) unsup.at(i, j) = f[j];
            }
            return hconcat(unsup, slice_cols(stats, vocab.size()));
        }
        case FeatureSet::VaeNgram: {
            const auto seqs = sequences(texts);
            const Matrix latent = vae->encode_batch(vae->scale_sequences(seqs));
            return hconcat(latent, slice_cols(scaled_stat_matrix(texts), vocab.size()));
        }
        case FeatureSet::LdaNgram: {
            Matrix topics(texts.size(), LdaModel::kTopics);
            for (std::size_t i = 0; i < texts.size(); ++i) {
                const auto p = lda->infer(word_ngrams(texts[i]));
                for (int j = 0; j < LdaModel::kTopics; ++j) topics.at(i, j) = p[j];
            }
            return hconcat(topics, slice_cols(scaled_stat_matrix(texts), vocab.size()));
        }
    }
    throw ConfigError("unknown feature set");
}

FeaturePipeline fit_pipeline(const std::vector<std::string>& train_texts, FeatureSet fs,
                             const PipelineConfig& config) {
    if (train_texts.empty()) throw DataError("fit_pipeline: empty training set");
    FeaturePipeline p;
    p.feature_set = fs;
    p.config = config;

    LabeledCorpus pseudo;  // label-free view; labels never read here
    pseudo.samples.reserve(train_texts.size());
    for (const auto& t : train_texts)
        pseudo.samples.push_back({t, Label::Welsh, ""});
    pseudo.recount();

    if (needs_alphabet(fs) || fs == FeatureSet::Chars) p.alphabet = Alphabet::fit(pseudo);

    if (needs_ngram_space(fs)) {
        p.vocab = fit_ngram_vocab(pseudo, config.ngram_min, config.ngram_max,
                                  config.max_features);
        Matrix stats = hconcat(ngram_matrix(train_texts, p.vocab),
                               stats_matrix(train_texts));
        p.scaler = MinMaxScaler::fit(stats);
        if (fs == FeatureSet::Clusters || fs == FeatureSet::ClustersNgram) {
            p.scaler.transform(stats);
            p.clusters = fit_cluster_ensemble(stats, Rng::derive(config.seed, 101));
        }
    }

    if (fs == FeatureSet::Vae || fs == FeatureSet::VaeNgram) {
        std::vector<std::vector<int>> seqs;
        seqs.reserve(train_texts.size());
        for (const auto& t : train_texts)
            seqs.push_back(encode_chars(t, p.alphabet, config.max_seq_len));
        VaeConfig vc = config.vae;
        vc.seed = Rng::derive(config.seed, 102);
        p.vae = fit_vae(seqs, p.alphabet.size(), vc);
    }

    if (fs == FeatureSet::Lda || fs == FeatureSet::LdaNgram) {
        std::vector<std::vector<std::string>> docs;
        docs.reserve(train_texts.size());
        for (const auto& t : train_texts) docs.push_back(word_ngrams(t));
        LdaConfig lc = config.lda;
        lc.seed = Rng::derive(config.seed, 103);
        p.lda = fit_lda(docs, lc);
    }
    return p;
}

std::vector<int> TrainedClassifier::predict(const FeaturePipeline& pipeline,
                                            const std::vector<std::string>& texts) const {
    switch (kind) {
        case ModelChoice::Svm:
            return svm->predict_batch(pipeline.transform(texts));
        case ModelChoice::Nn:
            return nn->predict_batch(pipeline.transform(texts));
        case ModelChoice::Cnn:
            return cnn->predict_batch(pipeline.sequences(texts));
    }
    throw ConfigError("unknown classifier kind");
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

void write_dense(io::Writer& w, const nnet::Dense& d) {
    w.mat(d.w);
    w.vec(d.b);
}

nnet::Dense read_dense(io::Reader& r) {
    nnet::Dense d;
    d.w = r.mat();
    d.b = r.vec();
    return d;
}

void write_pipeline_body(io::Writer& w, const FeaturePipeline& p) {
    w.u16(static_cast<std::uint16_t>(p.feature_set));
    w.u64(p.config.seed);
    w.i64(p.config.ngram_min);
    w.i64(p.config.ngram_max);
    w.u64(p.config.max_features);
    w.u64(p.config.max_seq_len);

    w.u64(p.alphabet.char_to_id.size());
    for (const auto& [cp, id] : p.alphabet.char_to_id) {
        w.u64(cp);
        w.i64(id);
    }

    w.i64(p.vocab.n_min);
    w.i64(p.vocab.n_max);
    w.u64(p.vocab.max_features);
    w.u64(p.vocab.names.size());
    for (const auto& name : p.vocab.names) w.str(name);

    w.vec(p.scaler.col_min);
    w.vec(p.scaler.col_max);

    w.u8(p.clusters.has_value() ? 1 : 0);
    if (p.clusters) {
        const auto& e = *p.clusters;
        w.vec(e.pca.mean);
        w.mat(e.pca.components);
        w.vec(e.pca.explained_variance);
        w.mat(e.kmeans.centroids);
        w.f64(e.kmeans.inertia);
        w.mat(e.gmm.means);
        w.u64(e.gmm.covs.size());
        for (const auto& c : e.gmm.covs) w.mat(c);
        w.vec(e.gmm.weights);
        w.mat(e.birch.centroids);
        w.u64(e.birch.leaf_subclusters);
        w.mat(e.agglomerative.centroids);
    }

    w.u8(p.vae.has_value() ? 1 : 0);
    if (p.vae) {
        const auto& v = *p.vae;
        w.i64(v.alphabet_size);
        write_dense(w, v.enc1);
        write_dense(w, v.enc2);
        write_dense(w, v.enc_mu);
        write_dense(w, v.enc_logvar);
        write_dense(w, v.dec1);
        write_dense(w, v.dec2);
        write_dense(w, v.dec_out);
    }

    w.u8(p.lda.has_value() ? 1 : 0);
    if (p.lda) {
        const auto& l = *p.lda;
        w.u64(l.config.seed);
        w.f64(l.config.alpha);
        w.f64(l.config.beta);
        w.u64(l.vocab_names.size());
        for (const auto& name : l.vocab_names) w.str(name);
        w.mat(l.topic_word);
        w.vec(l.topic_totals);
    }
}

FeaturePipeline read_pipeline_body(io::Reader& r) {
    FeaturePipeline p;
    p.feature_set = static_cast<FeatureSet>(r.u16());
    p.config.seed = r.u64();
    p.config.ngram_min = static_cast<int>(r.i64());
    p.config.ngram_max = static_cast<int>(r.i64());
    p.config.max_features = r.u64();
    p.config.max_seq_len = r.u64();

    const std::uint64_t alpha_n = r.u64();
    for (std::uint64_t i = 0; i < alpha_n; ++i) {
        const char32_t cp = static_cast<char32_t>(r.u64());
        p.alphabet.char_to_id[cp] = static_cast<int>(r.i64());
    }

    p.vocab.n_min = static_cast<int>(r.i64());
    p.vocab.n_max = static_cast<int>(r.i64());
    p.vocab.max_features = r.u64();
    const std::uint64_t vocab_n = r.u64();
    for (std::uint64_t i = 0; i < vocab_n; ++i) {
        std::string name = r.str();
        p.vocab.ngram_to_col[name] = p.vocab.names.size();
        p.vocab.names.push_back(std::move(name));
    }

    p.scaler.col_min = r.vec();
    p.scaler.col_max = r.vec();

    if (r.u8()) {
        ClusterEnsemble e;
        e.pca.mean = r.vec();
        e.pca.components = r.mat();
        e.pca.explained_variance = r.vec();
        e.kmeans.centroids = r.mat();
        e.kmeans.inertia = r.f64();
        e.gmm.means = r.mat();
        const std::uint64_t covs = r.u64();
        for (std::uint64_t i = 0; i < covs; ++i) e.gmm.covs.push_back(r.mat());
        e.gmm.weights = r.vec();
        e.birch.centroids = r.mat();
        e.birch.leaf_subclusters = r.u64();
        e.agglomerative.centroids = r.mat();
        p.clusters = std::move(e);
    }

    if (r.u8()) {
        VaeModel v;
        v.alphabet_size = static_cast<int>(r.i64());
        v.enc1 = read_dense(r);
        v.enc2 = read_dense(r);
        v.enc_mu = read_dense(r);
        v.enc_logvar = read_dense(r);
        v.dec1 = read_dense(r);
        v.dec2 = read_dense(r);
        v.dec_out = read_dense(r);
        p.vae = std::move(v);
    }

    if (r.u8()) {
        LdaModel l;
        l.config.seed = r.u64();
        l.config.alpha = r.f64();
        l.config.beta = r.f64();
        const std::uint64_t vocab_size = r.u64();
        for (std::uint64_t i = 0; i < vocab_size; ++i) {
            std::string name = r.str();
            l.vocab[name] = l.vocab_names.size();
            l.vocab_names.push_back(std::move(name));
        }
        l.topic_word = r.mat();
        l.topic_totals = r.vec();
        p.lda = std::move(l);
    }
    return p;
}

io::Kind pipeline_kind(FeatureSet fs) {
    switch (fs) {
        case FeatureSet::Clusters:
        case FeatureSet::ClustersNgram:
            return io::Kind::Clusters;
        case FeatureSet::Vae:
        case FeatureSet::VaeNgram:
            return io::Kind::Vae;
        case FeatureSet::Lda:
        case FeatureSet::LdaNgram:
            return io::Kind::Lda;
        default:
            return io::Kind::Pipeline;
    }
}

}  // namespace

void save_pipeline(const std::string& path, const FeaturePipeline& pipeline) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    io::Writer w(out);
    w.header(pipeline_kind(pipeline.feature_set));
    write_pipeline_body(w, pipeline);
}

FeaturePipeline load_pipeline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    io::Reader r(in);
    const io::Kind kind = r.header();
    if (kind == io::Kind::Classifier)
        throw DataError("file contains a classifier, not an unsup model: " + path);
    return read_pipeline_body(r);
}

void save_classifier(const std::string& path, const ClassifierArtifact& artifact) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    io::Writer w(out);
    w.header(io::Kind::Classifier);
    write_pipeline_body(w, artifact.pipeline);
    w.u16(static_cast<std::uint16_t>(artifact.classifier.kind));
    switch (artifact.classifier.kind) {
        case ModelChoice::Svm: {
            const auto& m = *artifact.classifier.svm;
            w.mat(m.weights);
            w.vec(m.biases);
            break;
        }
        case ModelChoice::Nn: {
            const auto& m = *artifact.classifier.nn;
            write_dense(w, m.l1);
            write_dense(w, m.l2);
            write_dense(w, m.l3);
            break;
        }
        case ModelChoice::Cnn: {
            const auto& m = *artifact.classifier.cnn;
            w.i64(m.alphabet_size);
            w.i64(m.config.embed_dim);
            w.i64(m.config.filters_per_width);
            w.mat(m.embedding);
            for (int wi = 0; wi < 3; ++wi) {
                w.mat(m.conv_w[wi]);
                w.vec(m.conv_b[wi]);
            }
            write_dense(w, m.head);
            break;
        }
    }
}

ClassifierArtifact load_classifier(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    io::Reader r(in);
    if (r.header() != io::Kind::Classifier)
        throw DataError("file is an unsup model, not a classifier: " + path);
    ClassifierArtifact a;
    a.pipeline = read_pipeline_body(r);
    a.classifier.kind = static_cast<ModelChoice>(r.u16());
    switch (a.classifier.kind) {
        case ModelChoice::Svm: {
            SvmModel m;
            m.weights = r.mat();
            m.biases = r.vec();
            a.classifier.svm = std::move(m);
            break;
        }
        case ModelChoice::Nn: {
            NnModel m;
            m.l1 = read_dense(r);
            m.l2 = read_dense(r);
            m.l3 = read_dense(r);
            a.classifier.nn = std::move(m);
            break;
        }
        case ModelChoice::Cnn: {
            CnnModel m;
            m.alphabet_size = static_cast<int>(r.i64());
            m.config.embed_dim = static_cast<int>(r.i64());
            m.config.filters_per_width = static_cast<int>(r.i64());
            m.embedding = r.mat();
            for (int wi = 0; wi < 3; ++wi) {
                m.conv_w[wi] = r.mat();
                m.conv_b[wi] = r.vec();
            }
            m.head = read_dense(r);
            a.classifier.cnn = std::move(m);
            break;
        }
    }
    return a;
}

}  // namespace clid
