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

#include "clid/cluster.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "clid/errors.hpp"
#include "clid/rng.hpp"

namespace clid {

namespace {

double sqdist(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

int nearest_row(const Matrix& centroids, std::span<const double> x) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.rows(); ++c) {
        const double d = sqdist(centroids.row(c), x);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// k-means
// ---------------------------------------------------------------------------

int KMeansModel::assign(std::span<const double> x) const {
    if (x.size() != centroids.cols()) throw DataError("kmeans assign: dim mismatch");
    return nearest_row(centroids, x);
}

std::vector<int> KMeansModel::assign_batch(const Matrix& x) const {
    std::vector<int> out(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) out[i] = assign(x.row(i));
    return out;
}

namespace {

Matrix kmeanspp_init(const Matrix& x, int k, Rng& rng) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    Matrix centroids(k, d);
    std::size_t first = rng.next_below(n);
    for (std::size_t j = 0; j < d; ++j) centroids.at(0, j) = x.at(first, j);
    std::vector<double> min_d(n);
    for (int c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (int p = 0; p < c; ++p)
                best = std::min(best, sqdist(x.row(i), centroids.row(p)));
            min_d[i] = best;
            total += best;
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = rng.next_double() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += min_d[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.next_below(n);
        }
        for (std::size_t j = 0; j < d; ++j) centroids.at(c, j) = x.at(pick, j);
    }
    return centroids;
}

}  // namespace

KMeansModel fit_kmeans(const Matrix& x, const KMeansConfig& cfg) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < static_cast<std::size_t>(cfg.k))
        throw DataError("fit_kmeans: fewer samples than clusters");

    KMeansModel best_model;
    best_model.inertia = std::numeric_limits<double>::infinity();
    Rng rng(cfg.seed);

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        Matrix centroids = kmeanspp_init(x, cfg.k, rng);
        std::vector<int> labels(n, -1);
        std::vector<double> trace;
        Matrix dists;
        double inertia = 0.0;
        for (int iter = 0; iter < cfg.max_iter; ++iter) {
            kernels::pairwise_sqdist(x, centroids, dists);
            inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                int arg = 0;
                double bd = dists.at(i, 0);
                for (int c = 1; c < cfg.k; ++c) {
                    if (dists.at(i, c) < bd) {
                        bd = dists.at(i, c);
                        arg = c;
                    }
                }
                labels[i] = arg;
                inertia += bd;
            }
            trace.push_back(inertia);

            Matrix next(cfg.k, d);
            std::vector<std::size_t> counts(cfg.k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                counts[labels[i]]++;
                for (std::size_t j = 0; j < d; ++j) next.at(labels[i], j) += x.at(i, j);
            }
            for (int c = 0; c < cfg.k; ++c) {
                if (counts[c] == 0) {
                    // re-seed empty cluster at the farthest point
                    std::size_t far = 0;
                    double fd = -1.0;
                    for (std::size_t i = 0; i < n; ++i) {
                        const double dd = dists.at(i, labels[i]);
                        if (dd > fd) {
                            fd = dd;
                            far = i;
                        }
                    }
                    for (std::size_t j = 0; j < d; ++j) next.at(c, j) = x.at(far, j);
                } else {
                    for (std::size_t j = 0; j < d; ++j)
                        next.at(c, j) /= static_cast<double>(counts[c]);
                }
            }
            double shift = 0.0;
            for (int c = 0; c < cfg.k; ++c)
                shift = std::max(shift, std::sqrt(sqdist(next.row(c), centroids.row(c))));
            centroids = std::move(next);
            if (shift < cfg.tol) break;
        }
        // final objective with settled centroids
        kernels::pairwise_sqdist(x, centroids, dists);
        inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double bd = dists.at(i, 0);
            for (int c = 1; c < cfg.k; ++c) bd = std::min(bd, dists.at(i, c));
            inertia += bd;
        }
        trace.push_back(inertia);
        if (inertia < best_model.inertia) {
            best_model.centroids = std::move(centroids);
            best_model.inertia = inertia;
            best_model.objective_trace = std::move(trace);
        }
    }
    return best_model;
}

// ---------------------------------------------------------------------------
// Gaussian mixture, full covariance EM
// ---------------------------------------------------------------------------

namespace {

struct GaussianParams {
    Eigen::MatrixXd inv;
    double log_norm = 0.0;  // -0.5 * (d*log(2π) + logdet)
};

GaussianParams precompute(const Matrix& cov, int component) {
    const std::size_t d = cov.rows();
    Eigen::MatrixXd c(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) c(i, j) = cov.at(i, j);
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success)
        throw NumericalError("GMM: singular covariance in component " +
                             std::to_string(component));
    const Eigen::MatrixXd l = llt.matrixL();
    double logdet = 0.0;
    for (std::size_t i = 0; i < d; ++i) logdet += 2.0 * std::log(l(i, i));
    GaussianParams p;
    p.inv = llt.solve(Eigen::MatrixXd::Identity(d, d));
    p.log_norm = -0.5 * (static_cast<double>(d) * std::log(2.0 * M_PI) + logdet);
    return p;
}

double log_gaussian(const GaussianParams& g, std::span<const double> x,
                    std::span<const double> mean) {
    const std::size_t d = x.size();
    Eigen::VectorXd diff(d);
    for (std::size_t i = 0; i < d; ++i) diff(i) = x[i] - mean[i];
    return g.log_norm - 0.5 * diff.dot(g.inv * diff);
}

}  // namespace

std::vector<double> GmmModel::posterior(std::span<const double> x) const {
    const int k = static_cast<int>(means.rows());
    std::vector<double> logp(k);
    double max_lp = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        const GaussianParams g = precompute(covs[c], c);
        logp[c] = std::log(weights[c]) + log_gaussian(g, x, means.row(c));
        max_lp = std::max(max_lp, logp[c]);
    }
    double total = 0.0;
    std::vector<double> out(k);
    for (int c = 0; c < k; ++c) {
        out[c] = std::exp(logp[c] - max_lp);
        total += out[c];
    }
    for (int c = 0; c < k; ++c) out[c] /= total;
    return out;
}

int GmmModel::assign(std::span<const double> x) const {
    const auto post = posterior(x);
    return static_cast<int>(std::max_element(post.begin(), post.end()) - post.begin());
}

GmmModel fit_gmm(const Matrix& x, const GmmConfig& cfg) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < static_cast<std::size_t>(cfg.k))
        throw DataError("fit_gmm: fewer samples than components");

    // k-means initialization for the means
    KMeansConfig kmc;
    kmc.k = cfg.k;
    kmc.seed = cfg.seed;
    kmc.restarts = 3;
    const KMeansModel km = fit_kmeans(x, kmc);

    GmmModel model;
    model.means = km.centroids;
    model.weights.assign(cfg.k, 1.0 / cfg.k);
    model.covs.assign(cfg.k, Matrix(d, d));
    {
        // shared data covariance as the starting point
        std::vector<double> mean(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) mean[j] += x.at(i, j);
        for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
        Matrix cov(d, d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b)
                    cov.at(a, b) += (x.at(i, a) - mean[a]) * (x.at(i, b) - mean[b]);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) cov.at(a, b) /= static_cast<double>(n);
            cov.at(a, a) += cfg.ridge;
        }
        for (int c = 0; c < cfg.k; ++c) model.covs[c] = cov;
    }

    Matrix resp(n, cfg.k);
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        // E step
        std::vector<GaussianParams> params;
        params.reserve(cfg.k);
        for (int c = 0; c < cfg.k; ++c) params.push_back(precompute(model.covs[c], c));
        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double max_lp = -std::numeric_limits<double>::infinity();
            std::vector<double> logp(cfg.k);
            for (int c = 0; c < cfg.k; ++c) {
                logp[c] = std::log(model.weights[c]) +
                          log_gaussian(params[c], x.row(i), model.means.row(c));
                max_lp = std::max(max_lp, logp[c]);
            }
            double total = 0.0;
            for (int c = 0; c < cfg.k; ++c) total += std::exp(logp[c] - max_lp);
            ll += max_lp + std::log(total);
            for (int c = 0; c < cfg.k; ++c)
                resp.at(i, c) = std::exp(logp[c] - max_lp) / total;
        }
        model.loglik_trace.push_back(ll);

        // M step
        for (int c = 0; c < cfg.k; ++c) {
            double nc = 0.0;
            for (std::size_t i = 0; i < n; ++i) nc += resp.at(i, c);
            model.weights[c] = nc / static_cast<double>(n);
            std::vector<double> mean(d, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < d; ++j) mean[j] += resp.at(i, c) * x.at(i, j);
            for (std::size_t j = 0; j < d; ++j) {
                mean[j] /= nc;
                model.means.at(c, j) = mean[j];
            }
            Matrix cov(d, d);
            for (std::size_t i = 0; i < n; ++i) {
                const double r = resp.at(i, c);
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b)
                        cov.at(a, b) += r * (x.at(i, a) - mean[a]) * (x.at(i, b) - mean[b]);
            }
            for (std::size_t a = 0; a < d; ++a) {
                for (std::size_t b = 0; b < d; ++b) cov.at(a, b) /= nc;
                cov.at(a, a) += cfg.ridge;
            }
            model.covs[c] = std::move(cov);
        }

        if (iter > 0 && ll - prev_ll < cfg.tol) break;
        prev_ll = ll;
    }
    return model;
}

// ---------------------------------------------------------------------------
// Ward agglomerative (greedy global-minimum merging, centroid formula)
// ---------------------------------------------------------------------------

namespace {

struct WardCluster {
    std::vector<double> centroid;
    double size = 0.0;
    bool active = false;
};

double ward_dist(const WardCluster& a, const WardCluster& b) {
    double sq = 0.0;
    for (std::size_t j = 0; j < a.centroid.size(); ++j) {
        const double d = a.centroid[j] - b.centroid[j];
        sq += d * d;
    }
    return (a.size * b.size) / (a.size + b.size) * sq;
}

// Labels points 0..n-1 into k Ward clusters. Seeds may carry weights (used
// by Birch's global step).
std::vector<int> ward_cut(std::vector<WardCluster> clusters, int k) {
    const std::size_t n = clusters.size();
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    std::vector<std::vector<int>> members(n);
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};

    // nearest active neighbor per cluster, lazily recomputed
    std::vector<int> nn(n, -1);
    std::vector<double> nn_d(n, std::numeric_limits<double>::infinity());
    auto recompute_nn = [&](std::size_t i) {
        nn[i] = -1;
        nn_d[i] = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !clusters[j].active) continue;
            const double d = ward_dist(clusters[i], clusters[j]);
            if (d < nn_d[i]) {
                nn_d[i] = d;
                nn[i] = static_cast<int>(j);
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i)
        if (clusters[i].active) recompute_nn(i);

    std::size_t active = 0;
    for (const auto& c : clusters) active += c.active ? 1 : 0;

    while (active > static_cast<std::size_t>(k)) {
        // global minimum; scanning order breaks ties at the lowest index pair
        std::size_t best_i = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!clusters[i].active || nn[i] < 0) continue;
            if (nn_d[i] < best_d) {
                best_d = nn_d[i];
                best_i = i;
            }
        }
        const std::size_t a = std::min(best_i, static_cast<std::size_t>(nn[best_i]));
        const std::size_t b = std::max(best_i, static_cast<std::size_t>(nn[best_i]));

        const double total = clusters[a].size + clusters[b].size;
        for (std::size_t j = 0; j < clusters[a].centroid.size(); ++j)
            clusters[a].centroid[j] =
                (clusters[a].size * clusters[a].centroid[j] +
                 clusters[b].size * clusters[b].centroid[j]) /
                total;
        clusters[a].size = total;
        clusters[b].active = false;
        for (int m : members[b]) members[a].push_back(m);
        members[b].clear();
        --active;

        recompute_nn(a);
        for (std::size_t i = 0; i < n; ++i) {
            if (!clusters[i].active || i == a) continue;
            if (nn[i] == static_cast<int>(a) || nn[i] == static_cast<int>(b)) {
                recompute_nn(i);
            } else {
                const double d = ward_dist(clusters[i], clusters[a]);
                if (d < nn_d[i]) {
                    nn_d[i] = d;
                    nn[i] = static_cast<int>(a);
                }
            }
        }
    }

    std::vector<int> labels(n, -1);
    int next_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!clusters[i].active) continue;
        for (int m : members[i]) labels[m] = next_label;
        ++next_label;
    }
    return labels;
}

std::vector<WardCluster> points_to_clusters(const Matrix& x) {
    std::vector<WardCluster> clusters(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        clusters[i].centroid.assign(x.row(i).begin(), x.row(i).end());
        clusters[i].size = 1.0;
        clusters[i].active = true;
    }
    return clusters;
}

Matrix labels_to_centroids(const Matrix& x, const std::vector<int>& labels, int k,
                           const std::vector<double>* weights = nullptr) {
    Matrix centroids(k, x.cols());
    std::vector<double> sizes(k, 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const double w = weights ? (*weights)[i] : 1.0;
        sizes[labels[i]] += w;
        for (std::size_t j = 0; j < x.cols(); ++j)
            centroids.at(labels[i], j) += w * x.at(i, j);
    }
    for (int c = 0; c < k; ++c)
        for (std::size_t j = 0; j < x.cols(); ++j) centroids.at(c, j) /= sizes[c];
    return centroids;
}

}  // namespace

std::vector<int> agglomerative_labels(const Matrix& x, int k) {
    if (x.rows() < static_cast<std::size_t>(k))
        throw DataError("fit_agglomerative: fewer samples than clusters");
    return ward_cut(points_to_clusters(x), k);
}

int AggloModel::assign(std::span<const double> x) const {
    if (x.size() != centroids.cols()) throw DataError("agglomerative assign: dim mismatch");
    return nearest_row(centroids, x);
}

AggloModel fit_agglomerative(const Matrix& x, int k) {
    const auto labels = agglomerative_labels(x, k);
    AggloModel model;
    model.centroids = labels_to_centroids(x, labels, k);
    return model;
}

// ---------------------------------------------------------------------------
// Birch: CF tree + Ward global step over leaf subcluster centroids
// ---------------------------------------------------------------------------

namespace {

struct CfEntry {
    double n = 0.0;
    std::vector<double> linear_sum;
    double sq_sum = 0.0;

    void add_point(std::span<const double> x) {
        if (linear_sum.empty()) linear_sum.assign(x.size(), 0.0);
        n += 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            linear_sum[j] += x[j];
            sq_sum += x[j] * x[j];
        }
    }

    std::vector<double> centroid() const {
        std::vector<double> c(linear_sum.size());
        for (std::size_t j = 0; j < c.size(); ++j) c[j] = linear_sum[j] / n;
        return c;
    }

    // RMS distance of member points to the centroid, after adding x.
    double radius_with(std::span<const double> x) const {
        const double nn = n + 1.0;
        double ls_sq = 0.0, sq = sq_sum;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double ls = linear_sum[j] + x[j];
            ls_sq += ls * ls;
            sq += x[j] * x[j];
        }
        const double var = sq / nn - ls_sq / (nn * nn);
        return std::sqrt(std::max(0.0, var));
    }
};

// Single-level CF leaf list with a capacity-driven coarsening pass: exact
// enough for the 2-D inputs used here while honoring threshold/branching.
class CfTree {
  public:
    CfTree(double threshold, int branching) : threshold_(threshold), branching_(branching) {}

    void insert(std::span<const double> x) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < leaves_.size(); ++i) {
            const auto c = leaves_[i].centroid();
            const double d = sqdist(c, x);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0 && leaves_[best].radius_with(x) <= threshold_) {
            leaves_[best].add_point(x);
            return;
        }
        CfEntry e;
        e.add_point(x);
        leaves_.push_back(std::move(e));
        if (static_cast<int>(leaves_.size()) > branching_ * branching_)
            coarsen();
    }

    const std::vector<CfEntry>& leaves() const { return leaves_; }

  private:
    // Merge the closest subcluster pairs until the leaf list fits again.
    void coarsen() {
        while (static_cast<int>(leaves_.size()) > branching_ * branching_ / 2) {
            std::size_t bi = 0, bj = 1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < leaves_.size(); ++i) {
                const auto ci = leaves_[i].centroid();
                for (std::size_t j = i + 1; j < leaves_.size(); ++j) {
                    const double d = sqdist(ci, leaves_[j].centroid());
                    if (d < best) {
                        best = d;
                        bi = i;
                        bj = j;
                    }
                }
            }
            CfEntry& a = leaves_[bi];
            const CfEntry& b = leaves_[bj];
            a.n += b.n;
            for (std::size_t j = 0; j < a.linear_sum.size(); ++j)
                a.linear_sum[j] += b.linear_sum[j];
            a.sq_sum += b.sq_sum;
            leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(bj));
        }
    }

    double threshold_;
    int branching_;
    std::vector<CfEntry> leaves_;
};

}  // namespace

int BirchModel::assign(std::span<const double> x) const {
    if (x.size() != centroids.cols()) throw DataError("birch assign: dim mismatch");
    return nearest_row(centroids, x);
}

BirchModel fit_birch(const Matrix& x, const BirchConfig& cfg) {
    if (x.rows() < static_cast<std::size_t>(cfg.k))
        throw DataError("fit_birch: fewer samples than clusters");
    CfTree tree(cfg.threshold, cfg.branching);
    for (std::size_t i = 0; i < x.rows(); ++i) tree.insert(x.row(i));

    const auto& leaves = tree.leaves();
    if (leaves.size() < static_cast<std::size_t>(cfg.k))
        throw DataError("fit_birch: only " + std::to_string(leaves.size()) +
                        " leaf subclusters; use a smaller threshold");

    std::vector<WardCluster> seeds(leaves.size());
    Matrix seed_centroids(leaves.size(), x.cols());
    std::vector<double> seed_weights(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        seeds[i].centroid = leaves[i].centroid();
        seeds[i].size = leaves[i].n;
        seeds[i].active = true;
        seed_weights[i] = leaves[i].n;
        for (std::size_t j = 0; j < x.cols(); ++j)
            seed_centroids.at(i, j) = seeds[i].centroid[j];
    }
    const auto labels = ward_cut(std::move(seeds), cfg.k);

    BirchModel model;
    model.leaf_subclusters = leaves.size();
    model.centroids = labels_to_centroids(seed_centroids, labels, cfg.k, &seed_weights);
    return model;
}

// ---------------------------------------------------------------------------
// Ensemble
// ---------------------------------------------------------------------------

std::vector<double> ClusterEnsemble::features(std::span<const double> stat_vector) const {
    const auto p = pca_transform(pca, stat_vector);
    const int ids[4] = {kmeans.assign(p), gmm.assign(p), birch.assign(p),
                        agglomerative.assign(p)};
    std::vector<double> out(16, 0.0);
    for (int m = 0; m < 4; ++m) out[m * 4 + ids[m]] = 1.0;
    return out;
}

ClusterEnsemble fit_cluster_ensemble(const Matrix& scaled_stats, std::uint64_t seed) {
    ClusterEnsemble e;
    e.pca = fit_pca(scaled_stats, 2);
    const Matrix proj = pca_transform_batch(e.pca, scaled_stats);
    KMeansConfig kmc;
    kmc.seed = Rng::derive(seed, 1);
    e.kmeans = fit_kmeans(proj, kmc);
    GmmConfig gmc;
    gmc.seed = Rng::derive(seed, 2);
    e.gmm = fit_gmm(proj, gmc);
    e.birch = fit_birch(proj);
    e.agglomerative = fit_agglomerative(proj);
    return e;
}

}  // namespace clid
