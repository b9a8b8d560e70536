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

#ifndef CLID_RUNNER_HPP
#define CLID_RUNNER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "clid/corpus.hpp"
#include "clid/eval.hpp"
#include "clid/pipeline.hpp"

namespace clid {

// One experiment cell: data source, protocol knobs, feature set, classifier.
struct ExperimentConfig {
    std::string corpus_path;           // empty → synthetic fixture
    std::size_t synthetic_per_class = 400;
    std::uint64_t synthetic_seed = 7;

    SplitSpec split;
    LabelBudget label_budget;
    FeatureSet feature_set = FeatureSet::Ngram;
    ModelChoice model = ModelChoice::Nn;

    // Master seed; per-component seeds are derived from it.
    std::uint64_t master_seed = 42;

    PipelineConfig pipeline;
    SvmConfig svm;
    NnConfig nn;
    CnnConfig cnn;

    // True for cells whose confusion matrix should be rendered in the bundle.
    bool show_confusion = false;

    void validate() const;  // throws ConfigError on a bad combination
};

struct ExperimentResult {
    EvalReport report;
    std::uint64_t test_hash_before = 0;
    std::uint64_t test_hash_after = 0;
    ClassifierArtifact artifact;
};

// Fixed protocol: split; fit unsupervised extractors on the full unlabelled
// training set; subsample labels; train the classifier on the subsample;
// evaluate on the untouched test set. The test-set hash is taken right after
// the split and re-checked at evaluation. A preloaded corpus may be passed to
// amortize I/O across grid cells.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const LabeledCorpus& corpus);

struct GridCellResult {
    ExperimentConfig config;
    bool failed = false;
    std::string error;
    EvalReport report;
    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> confusion{};
};

struct ReportBundle {
    std::vector<GridCellResult> cells;
    std::string version;
    std::uint64_t config_hash = 0;

    std::string to_json() const;
    std::string to_table() const;  // Tables-4/5-style rows + confusion panels
};

// Runs every cell, continue-and-mark on failure. CLID_THREADS caps the
// number of concurrent cells (default 1).
ReportBundle run_grid(const std::vector<ExperimentConfig>& configs);

struct GridFile {
    std::vector<ExperimentConfig> cells;
    std::string output_json;  // optional [output] json = "path"
    std::string output_csv;
};

// Minimal TOML subset: key = value, [table], [[grid]] array-of-tables,
// strings, integers, floats, booleans, # comments.
GridFile load_grid_file(const std::string& path);
GridFile parse_grid_toml(const std::string& text, const std::string& origin);

}  // namespace clid

#endif  // CLID_RUNNER_HPP
