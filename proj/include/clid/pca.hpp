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

#ifndef CLID_PCA_HPP
#define CLID_PCA_HPP

#include <vector>

#include "clid/matrix.hpp"

namespace clid {

struct PcaModel {
    std::vector<double> mean;        // length D
    Matrix components;               // k×D, row-orthonormal
    std::vector<double> explained_variance;  // length k, non-increasing

    std::size_t input_dim() const { return mean.size(); }
    std::size_t k() const { return components.rows(); }
};

// Principal components of the sample covariance (divisor n-1). Uses the
// D×D covariance eigendecomposition when D <= n, otherwise the n×n Gram
// matrix of the centered data. Sign convention: the largest-magnitude entry
// of each component is positive; eigenvalues sorted descending.
PcaModel fit_pca(const Matrix& x, std::size_t k);

// components · (x - mean)
std::vector<double> pca_transform(const PcaModel& model, std::span<const double> x);

Matrix pca_transform_batch(const PcaModel& model, const Matrix& x);

}  // namespace clid

#endif  // CLID_PCA_HPP
