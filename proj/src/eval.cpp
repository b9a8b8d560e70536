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

#include "clid/eval.hpp"

#include <cmath>
#include <sstream>

#include "clid/errors.hpp"

namespace clid {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (std::uint64_t v : row) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t t = 0;
    for (int i = 0; i < kNumClasses; ++i) t += counts[i][i];
    return t;
}

std::uint64_t ConfusionMatrix::row_sum(int c) const {
    std::uint64_t t = 0;
    for (std::uint64_t v : counts[c]) t += v;
    return t;
}

std::uint64_t ConfusionMatrix::col_sum(int c) const {
    std::uint64_t t = 0;
    for (int i = 0; i < kNumClasses; ++i) t += counts[i][c];
    return t;
}

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size())
        throw DataError("confusion_matrix: length mismatch");
    if (y_true.empty()) throw DataError("confusion_matrix: no samples");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) cm.counts[y_true[i]][y_pred[i]]++;
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

std::array<double, kNumClasses> per_class_f1(const ConfusionMatrix& cm) {
    std::array<double, kNumClasses> f1{};
    for (int c = 0; c < kNumClasses; ++c) {
        const double tp = static_cast<double>(cm.counts[c][c]);
        const double col = static_cast<double>(cm.col_sum(c));
        const double row = static_cast<double>(cm.row_sum(c));
        const double precision = col > 0 ? tp / col : 0.0;
        const double recall = row > 0 ? tp / row : 0.0;
        f1[c] = (precision + recall > 0) ? 2.0 * precision * recall / (precision + recall)
                                         : 0.0;
    }
    return f1;
}

double macro_f1(const ConfusionMatrix& cm) {
    const auto f1 = per_class_f1(cm);
    double total = 0.0;
    for (double v : f1) total += v;
    return total / kNumClasses;
}

double mcc(const ConfusionMatrix& cm) {
    const double c = static_cast<double>(cm.trace());
    const double s = static_cast<double>(cm.total());
    double sum_pt = 0.0, sum_pp = 0.0, sum_tt = 0.0;
    for (int k = 0; k < kNumClasses; ++k) {
        const double t_k = static_cast<double>(cm.row_sum(k));
        const double p_k = static_cast<double>(cm.col_sum(k));
        sum_pt += p_k * t_k;
        sum_pp += p_k * p_k;
        sum_tt += t_k * t_k;
    }
    const double denom_sq = (s * s - sum_pp) * (s * s - sum_tt);
    if (denom_sq <= 0.0) return 0.0;
    return (c * s - sum_pt) / std::sqrt(denom_sq);
}

EvalReport evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    EvalReport r;
    r.cm = confusion_matrix(y_true, y_pred);
    r.accuracy = accuracy(r.cm);
    r.f1 = per_class_f1(r.cm);
    r.macro_f1 = clid::macro_f1(r.cm);
    r.mcc = clid::mcc(r.cm);
    return r;
}

namespace {

std::string fmt_full(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int pct_half_up(double ratio) {
    return static_cast<int>(std::floor(ratio * 100.0 + 0.5));
}

}  // namespace

std::string EvalReport::to_json() const {
    std::ostringstream os;
    os << "{\"meta\":{\"model\":\"" << model << "\",\"features\":\"" << features
       << "\",\"label_fraction\":" << fmt_full(label_fraction) << ",\"seed\":" << seed
       << "},\"metrics\":{\"accuracy\":" << fmt_full(accuracy)
       << ",\"macro_f1\":" << fmt_full(macro_f1) << ",\"mcc\":" << fmt_full(mcc)
       << ",\"f1\":{";
    for (int c = 0; c < kNumClasses; ++c) {
        if (c) os << ",";
        os << "\"" << label_name(static_cast<Label>(c)) << "\":" << fmt_full(f1[c]);
    }
    os << "}},\"confusion\":[";
    for (int i = 0; i < kNumClasses; ++i) {
        if (i) os << ",";
        os << "[";
        for (int j = 0; j < kNumClasses; ++j) {
            if (j) os << ",";
            os << cm.counts[i][j];
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

std::string EvalReport::csv_header() {
    return "model,features,label_fraction,seed,accuracy,macro_f1,mcc,"
           "f1_welsh,f1_english,f1_irish,f1_scottish";
}

std::string EvalReport::to_csv_row() const {
    std::ostringstream os;
    os << model << "," << features << "," << fmt_full(label_fraction) << "," << seed << ","
       << fmt_full(accuracy) << "," << fmt_full(macro_f1) << "," << fmt_full(mcc);
    for (int c = 0; c < kNumClasses; ++c) os << "," << fmt_full(f1[c]);
    return os.str();
}

std::string EvalReport::to_table_row() const {
    std::ostringstream os;
    std::string feat = features;
    feat.resize(18, ' ');
    os << feat << "  " << pct_half_up(accuracy) << "%  " << pct_half_up(mcc) << "%  "
       << pct_half_up(macro_f1) << "%  "
       << pct_half_up(f1[static_cast<int>(Label::Irish)]) << "%  "
       << pct_half_up(f1[static_cast<int>(Label::Scottish)]) << "%";
    return os.str();
}

std::string render_report(const EvalReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::Json:
            return report.to_json();
        case ReportFormat::Csv:
            return EvalReport::csv_header() + "\n" + report.to_csv_row();
        case ReportFormat::Table: {
            std::ostringstream os;
            os << "feature             acc  mcc  mF1  F1(ga)  F1(gd)\n"
               << report.to_table_row();
            return os.str();
        }
    }
    return {};
}

}  // namespace clid
