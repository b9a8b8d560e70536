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

#ifndef CLID_PIPELINE_HPP
#define CLID_PIPELINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "clid/classify.hpp"
#include "clid/cluster.hpp"
#include "clid/features.hpp"
#include "clid/lda.hpp"
#include "clid/vae.hpp"

namespace clid {

enum class FeatureSet {
    Chars,
    Ngram,
    NgramStats,
    Clusters,
    Vae,
    Lda,
    ClustersNgram,
    VaeNgram,
    LdaNgram,
};

enum class ModelChoice { Svm, Nn, Cnn };

const char* feature_set_name(FeatureSet fs);
const char* model_choice_name(ModelChoice m);
std::optional<FeatureSet> parse_feature_set(const std::string& s);
std::optional<ModelChoice> parse_model_choice(const std::string& s);

// chars works only with sequence models (nn, cnn); cnn works only on chars.
bool valid_combination(FeatureSet fs, ModelChoice m);

struct PipelineConfig {
    std::uint64_t seed = 42;
    int ngram_min = 1;
    int ngram_max = 3;
    std::size_t max_features = 3000;
    std::size_t max_seq_len = 128;
    VaeConfig vae;
    LdaConfig lda;
};

// Feature extractors fitted on the unlabelled training texts. Every fitted
// piece is immutable afterwards; transform calls are pure.
struct FeaturePipeline {
    FeatureSet feature_set = FeatureSet::Ngram;
    PipelineConfig config;
    Alphabet alphabet;
    NgramVocab vocab;
    MinMaxScaler scaler;  // over [n-gram counts ‖ avg_word_len ‖ avg_consonants]
    std::optional<ClusterEnsemble> clusters;
    std::optional<VaeModel> vae;
    std::optional<LdaModel> lda;

    // Scaled [n-gram ‖ stats] matrix (the clustering/PCA feature space).
    Matrix scaled_stat_matrix(const std::vector<std::string>& texts) const;

    // Dense features for SVM/NN according to feature_set.
    Matrix transform(const std::vector<std::string>& texts) const;

    // Character-id sequences for the CNN.
    std::vector<std::vector<int>> sequences(const std::vector<std::string>& texts) const;
};

// Fits only the pieces the feature set needs; never sees labels.
FeaturePipeline fit_pipeline(const std::vector<std::string>& train_texts, FeatureSet fs,
                             const PipelineConfig& config = {});

struct TrainedClassifier {
    ModelChoice kind = ModelChoice::Svm;
    std::optional<SvmModel> svm;
    std::optional<NnModel> nn;
    std::optional<CnnModel> cnn;

    std::vector<int> predict(const FeaturePipeline& pipeline,
                             const std::vector<std::string>& texts) const;
};

struct ClassifierArtifact {
    FeaturePipeline pipeline;
    TrainedClassifier classifier;
};

// Versioned binary container ("CLID" magic + format version).
void save_pipeline(const std::string& path, const FeaturePipeline& pipeline);
FeaturePipeline load_pipeline(const std::string& path);
void save_classifier(const std::string& path, const ClassifierArtifact& artifact);
ClassifierArtifact load_classifier(const std::string& path);

}  // namespace clid

#endif  // CLID_PIPELINE_HPP
