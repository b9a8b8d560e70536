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

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "clid/errors.hpp"
#include "clid/eval.hpp"
#include "clid/rng.hpp"
#include "doctest.h"

using namespace clid;

namespace {

ConfusionMatrix make_cm(const std::array<std::array<std::uint64_t, 4>, 4>& counts) {
    ConfusionMatrix cm;
    cm.counts = counts;
    return cm;
}

// Expand a confusion matrix back into label sequences.
void expand(const ConfusionMatrix& cm, std::vector<int>& y_true,
            std::vector<int>& y_pred) {
    y_true.clear();
    y_pred.clear();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (std::uint64_t n = 0; n < cm.counts[i][j]; ++n) {
                y_true.push_back(i);
                y_pred.push_back(j);
            }
}

// Correlation between the one-hot encodings of the two label sequences:
// covariances are taken column-wise (one column per class, each with its
// own mean) and summed. The multiclass R_K statistic must equal this.
double onehot_pearson(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    const double n = static_cast<double>(y_true.size());
    double cov = 0, va = 0, vb = 0;
    for (int k = 0; k < 4; ++k) {
        double ma = 0, mb = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            ma += y_true[i] == k ? 1.0 : 0.0;
            mb += y_pred[i] == k ? 1.0 : 0.0;
        }
        ma /= n;
        mb /= n;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            const double a = (y_true[i] == k ? 1.0 : 0.0) - ma;
            const double b = (y_pred[i] == k ? 1.0 : 0.0) - mb;
            cov += a * b;
            va += a * a;
            vb += b * b;
        }
    }
    const double den = std::sqrt(va * vb);
    return den > 0 ? cov / den : 0.0;
}

ConfusionMatrix random_cm(Rng& rng, int classes = 4, std::uint64_t max_count = 20) {
    ConfusionMatrix cm;
    for (int i = 0; i < classes; ++i)
        for (int j = 0; j < classes; ++j) cm.counts[i][j] = rng.next_below(max_count + 1);
    return cm;
}

}  // namespace

TEST_CASE("mcc equals the one-hot Pearson correlation on random matrices") {
    Rng rng(101);
    int nontrivial = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const ConfusionMatrix cm = random_cm(rng);
        if (cm.total() == 0) continue;
        std::vector<int> yt, yp;
        expand(cm, yt, yp);
        const double oracle = onehot_pearson(yt, yp);
        CHECK(mcc(cm) == doctest::Approx(oracle).epsilon(1e-10));
        ++nontrivial;
    }
    CHECK(nontrivial > 900);
}

TEST_CASE("multiclass mcc reduces to the binary formula on 2x2 matrices") {
    Rng rng(202);
    for (int trial = 0; trial < 1000; ++trial) {
        const ConfusionMatrix cm = random_cm(rng, 2);
        if (cm.total() == 0) continue;
        const double tp = static_cast<double>(cm.counts[0][0]);
        const double fn = static_cast<double>(cm.counts[0][1]);
        const double fp = static_cast<double>(cm.counts[1][0]);
        const double tn = static_cast<double>(cm.counts[1][1]);
        const double den_sq = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
        const double oracle =
            den_sq > 0 ? (tp * tn - fp * fn) / std::sqrt(den_sq) : 0.0;
        CHECK(mcc(cm) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("mcc extremes and zero-denominator rule") {
    ConfusionMatrix diag = make_cm({{{5, 0, 0, 0}, {0, 7, 0, 0}, {0, 0, 3, 0}, {0, 0, 0, 9}}});
    CHECK(mcc(diag) == doctest::Approx(1.0).epsilon(1e-12));
    // every prediction in one column: both marginals degenerate
    ConfusionMatrix one_col = make_cm({{{4, 0, 0, 0}, {6, 0, 0, 0}, {5, 0, 0, 0}, {5, 0, 0, 0}}});
    CHECK(mcc(one_col) == 0.0);
}

TEST_CASE("metrics are invariant to label permutation and count scaling") {
    Rng rng(303);
    const int perm[4] = {2, 0, 3, 1};
    for (int trial = 0; trial < 50; ++trial) {
        ConfusionMatrix cm = random_cm(rng);
        if (cm.total() == 0) continue;
        ConfusionMatrix permuted;
        ConfusionMatrix scaled;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                permuted.counts[perm[i]][perm[j]] = cm.counts[i][j];
                scaled.counts[i][j] = 7 * cm.counts[i][j];
            }
        CHECK(accuracy(permuted) == doctest::Approx(accuracy(cm)).epsilon(1e-12));
        CHECK(macro_f1(permuted) == doctest::Approx(macro_f1(cm)).epsilon(1e-12));
        CHECK(mcc(permuted) == doctest::Approx(mcc(cm)).epsilon(1e-12));
        CHECK(accuracy(scaled) == doctest::Approx(accuracy(cm)).epsilon(1e-12));
        CHECK(macro_f1(scaled) == doctest::Approx(macro_f1(cm)).epsilon(1e-12));
        CHECK(mcc(scaled) == doctest::Approx(mcc(cm)).epsilon(1e-12));
    }
}

TEST_CASE("per-class f1 on a worked example with the zero rule") {
    const ConfusionMatrix cm =
        make_cm({{{2, 1, 0, 0}, {1, 2, 0, 0}, {0, 0, 0, 0}, {0, 0, 0, 0}}});
    const auto f1 = per_class_f1(cm);
    CHECK(f1[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(f1[2] == 0.0);  // no support and no predictions
    CHECK(f1[3] == 0.0);
    CHECK(macro_f1(cm) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("published confusion matrices reproduce the reported percentages") {
    // Feed-forward network, 30% labelled set, VAE+n-gram features.
    const ConfusionMatrix vae_cm = make_cm(
        {{{611, 2, 0, 0}, {0, 300, 0, 1}, {2, 9, 512, 11}, {0, 1, 9, 528}}});
    CHECK(vae_cm.total() == 1986);
    CHECK(accuracy(vae_cm) == doctest::Approx(1951.0 / 1986.0).epsilon(1e-12));
    const auto f1 = per_class_f1(vae_cm);
    // independently derived from precision/recall on the Irish column/row
    const double p_irish = 512.0 / 521.0;
    const double r_irish = 512.0 / 534.0;
    CHECK(f1[2] == doctest::Approx(2 * p_irish * r_irish / (p_irish + r_irish))
                       .epsilon(1e-12));
    EvalReport rep;
    rep.accuracy = accuracy(vae_cm);
    rep.macro_f1 = macro_f1(vae_cm);
    rep.mcc = mcc(vae_cm);
    rep.f1 = f1;
    rep.features = "vae+ngram";
    const std::string row = rep.to_table_row();
    CHECK(row.find("98%  98%  97%  98%") != std::string::npos);

    // Full labelled set, n-gram features.
    const ConfusionMatrix full_cm = make_cm(
        {{{611, 2, 0, 0}, {1, 299, 1, 0}, {0, 3, 519, 12}, {0, 1, 8, 529}}});
    CHECK(accuracy(full_cm) == doctest::Approx(1958.0 / 1986.0).epsilon(1e-12));
    CHECK(accuracy(full_cm) == doctest::Approx(0.986).epsilon(1e-3));
}

TEST_CASE("table rows round half-up to integer percentages") {
    EvalReport rep;
    rep.accuracy = 0.978;
    rep.mcc = 0.975;
    rep.macro_f1 = 0.9849;
    rep.f1 = {0.5, 0.5, 0.995, 0.004};
    rep.features = "ngram";
    const std::string row = rep.to_table_row();
    CHECK(row.find("98%  98%  98%  100%  0%") != std::string::npos);
}

TEST_CASE("json report carries the full schema") {
    std::vector<int> yt = {0, 1, 2, 3, 2, 2};
    std::vector<int> yp = {0, 1, 2, 3, 3, 2};
    EvalReport rep = evaluate(yt, yp);
    rep.model = "svm";
    rep.features = "ngram";
    rep.label_fraction = 0.3;
    rep.seed = 42;
    const std::string json = rep.to_json();
    CHECK(json.find("\"meta\":{\"model\":\"svm\",\"features\":\"ngram\"") !=
          std::string::npos);
    CHECK(json.find("\"label_fraction\":0.29999999999999999") != std::string::npos);
    CHECK(json.find("\"seed\":42") != std::string::npos);
    CHECK(json.find("\"metrics\":{\"accuracy\":") != std::string::npos);
    CHECK(json.find("\"f1\":{\"welsh\":") != std::string::npos);
    CHECK(json.find("\"english\":") != std::string::npos);
    CHECK(json.find("\"irish\":") != std::string::npos);
    CHECK(json.find("\"scottish\":") != std::string::npos);
    CHECK(json.find("\"confusion\":[[1,0,0,0],[0,1,0,0],[0,0,2,1],[0,0,0,1]]") !=
          std::string::npos);
    // round-trip precision: parsing the printed accuracy back gives the value
    const auto pos = json.find("\"accuracy\":") + 11;
    const double parsed = std::stod(json.substr(pos));
    CHECK(parsed == rep.accuracy);
}

TEST_CASE("csv header and row stay aligned") {
    CHECK(EvalReport::csv_header() ==
          "model,features,label_fraction,seed,accuracy,macro_f1,mcc,"
          "f1_welsh,f1_english,f1_irish,f1_scottish");
    EvalReport rep = evaluate({0, 1}, {0, 1});
    rep.model = "nn";
    rep.features = "lda+ngram";
    const std::string csv = render_report(rep, ReportFormat::Csv);
    CHECK(csv.find(EvalReport::csv_header()) == 0);
    const std::string row = csv.substr(csv.find('\n') + 1);
    std::size_t commas = 0;
    for (char c : row) commas += c == ',';
    CHECK(commas == 10);
    CHECK(row.rfind("nn,lda+ngram,", 0) == 0);
}

TEST_CASE("evaluate rejects mismatched or empty inputs") {
    CHECK_THROWS_AS(evaluate({0, 1}, {0}), DataError);
    CHECK_THROWS_AS(evaluate({}, {}), DataError);
}
