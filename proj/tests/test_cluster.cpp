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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "clid/cluster.hpp"
#include "clid/errors.hpp"
#include "clid/rng.hpp"
#include "doctest.h"

using namespace clid;

namespace {

// Four tight blobs at the corners of a square.
Matrix four_blobs(std::size_t per_blob, double sep, std::uint64_t seed) {
    const double centers[4][2] = {{0, 0}, {sep, 0}, {0, sep}, {sep, sep}};
    Rng rng(seed);
    Matrix x(4 * per_blob, 2);
    for (int b = 0; b < 4; ++b) {
        for (std::size_t i = 0; i < per_blob; ++i) {
            x.at(b * per_blob + i, 0) = centers[b][0] + 0.1 * rng.next_gaussian();
            x.at(b * per_blob + i, 1) = centers[b][1] + 0.1 * rng.next_gaussian();
        }
    }
    return x;
}

}  // namespace

TEST_CASE("kmeans finds symmetric centroids") {
    Matrix x(4, 2);
    x.at(0, 0) = 0;  x.at(0, 1) = 0;
    x.at(1, 0) = 0;  x.at(1, 1) = 1;
    x.at(2, 0) = 10; x.at(2, 1) = 0;
    x.at(3, 0) = 10; x.at(3, 1) = 1;
    KMeansConfig cfg;
    cfg.k = 2;
    const KMeansModel m = fit_kmeans(x, cfg);
    std::vector<std::pair<double, double>> cs = {
        {m.centroids.at(0, 0), m.centroids.at(0, 1)},
        {m.centroids.at(1, 0), m.centroids.at(1, 1)}};
    std::sort(cs.begin(), cs.end());
    CHECK(cs[0].first == doctest::Approx(0.0));
    CHECK(cs[0].second == doctest::Approx(0.5));
    CHECK(cs[1].first == doctest::Approx(10.0));
    CHECK(cs[1].second == doctest::Approx(0.5));
    // a duplicate of a training point lands in that point's cluster
    CHECK(m.assign(x.row(0)) == m.assign(x.row(1)));
    CHECK(m.assign(x.row(0)) != m.assign(x.row(2)));
}

TEST_CASE("kmeans objective trace is non-increasing on seeded fixtures") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const Matrix x = four_blobs(25, 3.0, seed);
        KMeansConfig cfg;
        cfg.seed = seed;
        const KMeansModel m = fit_kmeans(x, cfg);
        REQUIRE(!m.objective_trace.empty());
        for (std::size_t i = 1; i < m.objective_trace.size(); ++i)
            CHECK(m.objective_trace[i] <= m.objective_trace[i - 1] + 1e-9);
        CHECK(m.inertia == doctest::Approx(m.objective_trace.back()));
    }
}

TEST_CASE("kmeans rejects n < k and is deterministic") {
    Matrix tiny(2, 2);
    KMeansConfig cfg;
    CHECK_THROWS_AS(fit_kmeans(tiny, cfg), DataError);
    const Matrix x = four_blobs(10, 4.0, 9);
    const KMeansModel a = fit_kmeans(x, cfg);
    const KMeansModel b = fit_kmeans(x, cfg);
    CHECK(a.centroids.vec() == b.centroids.vec());
}

TEST_CASE("gmm separates two blobs with confident posteriors") {
    Rng rng(21);
    Matrix x(60, 2);
    for (int i = 0; i < 30; ++i) {
        x.at(i, 0) = 0.2 * rng.next_gaussian();
        x.at(i, 1) = 0.2 * rng.next_gaussian();
        x.at(30 + i, 0) = 8.0 + 0.2 * rng.next_gaussian();
        x.at(30 + i, 1) = 8.0 + 0.2 * rng.next_gaussian();
    }
    GmmConfig cfg;
    cfg.k = 2;
    const GmmModel m = fit_gmm(x, cfg);
    for (std::size_t i = 0; i < 60; ++i) {
        const auto post = m.posterior(x.row(i));
        double sum = 0;
        double mx = 0;
        for (double p : post) {
            sum += p;
            mx = std::max(mx, p);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mx >= 0.99);
    }
    // points from the same blob share an assignment
    for (std::size_t i = 1; i < 30; ++i) CHECK(m.assign(x.row(i)) == m.assign(x.row(0)));
    CHECK(m.assign(x.row(30)) != m.assign(x.row(0)));
}

TEST_CASE("gmm log-likelihood trace is non-decreasing on seeded fixtures") {
    for (std::uint64_t seed : {11ull, 12ull, 13ull, 14ull, 15ull}) {
        const Matrix x = four_blobs(20, 2.5, seed);
        GmmConfig cfg;
        cfg.seed = seed;
        const GmmModel m = fit_gmm(x, cfg);
        REQUIRE(!m.loglik_trace.empty());
        for (std::size_t i = 1; i < m.loglik_trace.size(); ++i)
            CHECK(m.loglik_trace[i] >= m.loglik_trace[i - 1] - 1e-9);
    }
}

TEST_CASE("birch recovers four well separated blobs") {
    const Matrix x = four_blobs(25, 5.0, 33);
    BirchConfig cfg;
    const BirchModel m = fit_birch(x, cfg);
    CHECK(m.leaf_subclusters >= 4);
    std::set<int> blob_clusters;
    for (int b = 0; b < 4; ++b) {
        const int c0 = m.assign(x.row(b * 25));
        blob_clusters.insert(c0);
        for (int i = 1; i < 25; ++i) CHECK(m.assign(x.row(b * 25 + i)) == c0);
    }
    CHECK(blob_clusters.size() == 4);
}

TEST_CASE("birch reports an error when the threshold leaves too few leaves") {
    Matrix x(6, 2);  // all identical points collapse into one CF leaf
    BirchConfig cfg;
    cfg.threshold = 100.0;
    CHECK_THROWS_WITH_AS(fit_birch(x, cfg), doctest::Contains("threshold"), DataError);
}

TEST_CASE("agglomerative ward merges the closest pair first") {
    Matrix x(3, 1);
    x.at(0, 0) = 0;
    x.at(1, 0) = 1;
    x.at(2, 0) = 10;
    const auto labels = agglomerative_labels(x, 2);
    REQUIRE(labels.size() == 3);
    CHECK(labels[0] == labels[1]);
    CHECK(labels[0] != labels[2]);
    // k = n keeps every point alone
    const auto singletons = agglomerative_labels(x, 3);
    CHECK(std::set<int>(singletons.begin(), singletons.end()).size() == 3);
}

TEST_CASE("agglomerative recovers blobs and assigns by nearest centroid") {
    const Matrix x = four_blobs(15, 6.0, 44);
    const AggloModel m = fit_agglomerative(x, 4);
    const auto labels = agglomerative_labels(x, 4);
    for (std::size_t i = 0; i < x.rows(); ++i) CHECK(m.assign(x.row(i)) == labels[i]);
    std::set<int> seen(labels.begin(), labels.end());
    CHECK(seen.size() == 4);
}

TEST_CASE("cluster ensemble emits 16-dim one-hot with four ones") {
    const Matrix x = four_blobs(30, 4.0, 55);
    // lift to 5 columns so the internal PCA has work to do
    Rng rng(3);
    Matrix wide(x.rows(), 5);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        wide.at(i, 0) = x.at(i, 0);
        wide.at(i, 1) = x.at(i, 1);
        wide.at(i, 2) = 0.3 * x.at(i, 0) + 0.01 * rng.next_gaussian();
        wide.at(i, 3) = 0.5;
        wide.at(i, 4) = 0.1 * rng.next_gaussian();
    }
    const ClusterEnsemble e = fit_cluster_ensemble(wide, 42);
    CHECK(e.pca.k() == 2);
    for (std::size_t i = 0; i < wide.rows(); ++i) {
        const auto f = e.features(wide.row(i));
        REQUIRE(f.size() == 16);
        double sum = 0;
        for (double v : f) {
            CHECK((v == 0.0 || v == 1.0));
            sum += v;
        }
        CHECK(sum == 4.0);
        // each 4-wide block holds exactly one 1
        for (int b = 0; b < 4; ++b) {
            double bs = 0;
            for (int j = 0; j < 4; ++j) bs += f[b * 4 + j];
            CHECK(bs == 1.0);
        }
        const auto f2 = e.features(wide.row(i));
        CHECK(f == f2);
    }
}
