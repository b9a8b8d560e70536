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

#ifndef CLID_CLUSTER_HPP
#define CLID_CLUSTER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "clid/matrix.hpp"
#include "clid/pca.hpp"

namespace clid {

struct KMeansConfig {
    int k = 4;
    std::uint64_t seed = 42;
    int restarts = 10;
    int max_iter = 300;
    double tol = 1e-4;  // centroid shift threshold
};

struct KMeansModel {
    Matrix centroids;  // k×d
    double inertia = 0.0;
    std::vector<double> objective_trace;  // per Lloyd iteration, winning restart

    int assign(std::span<const double> x) const;
    std::vector<int> assign_batch(const Matrix& x) const;
};

KMeansModel fit_kmeans(const Matrix& x, const KMeansConfig& cfg = {});

struct GmmConfig {
    int k = 4;
    std::uint64_t seed = 42;
    int max_iter = 100;
    double tol = 1e-3;  // log-likelihood gain threshold
    double ridge = 1e-6;
};

struct GmmModel {
    Matrix means;              // k×d
    std::vector<Matrix> covs;  // k full d×d covariances
    std::vector<double> weights;
    std::vector<double> loglik_trace;  // per EM iteration

    std::vector<double> posterior(std::span<const double> x) const;
    int assign(std::span<const double> x) const;
};

GmmModel fit_gmm(const Matrix& x, const GmmConfig& cfg = {});

struct BirchConfig {
    int k = 4;
    double threshold = 0.25;  // leaf subcluster radius, scaled-space units
    int branching = 50;
};

struct BirchModel {
    Matrix centroids;  // k×d final cluster centroids
    std::size_t leaf_subclusters = 0;

    int assign(std::span<const double> x) const;
};

BirchModel fit_birch(const Matrix& x, const BirchConfig& cfg = {});

struct AggloModel {
    Matrix centroids;  // k×d final cluster centroids

    int assign(std::span<const double> x) const;
};

// Ward linkage to k clusters; out-of-sample rule is nearest final centroid.
AggloModel fit_agglomerative(const Matrix& x, int k = 4);

// Ward partition labels for the training points themselves (used by tests
// and the cluster-map export).
std::vector<int> agglomerative_labels(const Matrix& x, int k);

// Four clusterers over the 2-D PCA projection of the scaled statistical
// feature space.
struct ClusterEnsemble {
    PcaModel pca;  // k=2 over the statistical feature space
    KMeansModel kmeans;
    GmmModel gmm;
    BirchModel birch;
    AggloModel agglomerative;

    // One-hot of the four assignments: 16 entries, exactly four ones.
    std::vector<double> features(std::span<const double> stat_vector) const;
};

ClusterEnsemble fit_cluster_ensemble(const Matrix& scaled_stats, std::uint64_t seed);

}  // namespace clid

#endif  // CLID_CLUSTER_HPP
