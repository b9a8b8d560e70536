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

#include "clid/pca.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "clid/errors.hpp"

namespace clid {

PcaModel fit_pca(const Matrix& x, std::size_t k) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2) throw DataError("fit_pca needs at least 2 rows");
    if (k > std::min(n, d))
        throw ConfigError("fit_pca: k exceeds min(rows, cols)");

    PcaModel model;
    model.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) model.mean[j] += x.at(i, j);
    for (std::size_t j = 0; j < d; ++j) model.mean[j] /= static_cast<double>(n);

    Eigen::MatrixXd centered(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) centered(i, j) = x.at(i, j) - model.mean[j];

    model.components = Matrix(k, d);
    model.explained_variance.assign(k, 0.0);

    if (d <= n) {
        const Eigen::MatrixXd cov =
            (centered.transpose() * centered) / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
        if (solver.info() != Eigen::Success)
            throw NumericalError("PCA eigendecomposition failed");
        // Eigen returns eigenvalues ascending; take the top k from the back.
        for (std::size_t c = 0; c < k; ++c) {
            const auto idx = static_cast<Eigen::Index>(d - 1 - c);
            model.explained_variance[c] = std::max(0.0, solver.eigenvalues()(idx));
            Eigen::VectorXd v = solver.eigenvectors().col(idx);
            for (std::size_t j = 0; j < d; ++j) model.components.at(c, j) = v(j);
        }
    } else {
        // Gram-matrix route for wide data: eigenvectors of X·Xᵀ lift to
        // component directions via Xᵀu.
        const Eigen::MatrixXd gram =
            (centered * centered.transpose()) / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
        if (solver.info() != Eigen::Success)
            throw NumericalError("PCA eigendecomposition failed");
        for (std::size_t c = 0; c < k; ++c) {
            const auto idx = static_cast<Eigen::Index>(n - 1 - c);
            model.explained_variance[c] = std::max(0.0, solver.eigenvalues()(idx));
            Eigen::VectorXd v = centered.transpose() * solver.eigenvectors().col(idx);
            const double norm = v.norm();
            if (norm > 0.0) v /= norm;
            for (std::size_t j = 0; j < d; ++j) model.components.at(c, j) = v(j);
        }
    }

    // Sign convention: largest-magnitude entry of each component positive.
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double mag = std::abs(model.components.at(c, j));
            if (mag > best) {
                best = mag;
                arg = j;
            }
        }
        if (model.components.at(c, arg) < 0.0)
            for (std::size_t j = 0; j < d; ++j) model.components.at(c, j) *= -1.0;
    }
    return model;
}

std::vector<double> pca_transform(const PcaModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim())
        throw DataError("pca_transform: dimension mismatch");
    std::vector<double> out(model.k(), 0.0);
    for (std::size_t c = 0; c < model.k(); ++c) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += model.components.at(c, j) * (x[j] - model.mean[j]);
        out[c] = acc;
    }
    return out;
}

Matrix pca_transform_batch(const PcaModel& model, const Matrix& x) {
    Matrix out(x.rows(), model.k());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto row = pca_transform(model, x.row(i));
        for (std::size_t c = 0; c < row.size(); ++c) out.at(i, c) = row[c];
    }
    return out;
}

}  // namespace clid
