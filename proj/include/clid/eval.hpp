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

#ifndef CLID_EVAL_HPP
#define CLID_EVAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clid/corpus.hpp"

namespace clid {

// Rows are true labels, columns predictions; label order Welsh, English,
// Irish, Scottish (the Label enum order).
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

    std::uint64_t total() const;
    std::uint64_t trace() const;
    std::uint64_t row_sum(int c) const;
    std::uint64_t col_sum(int c) const;
};

ConfusionMatrix confusion_matrix(const std::vector<int>& y_true,
                                 const std::vector<int>& y_pred);

double accuracy(const ConfusionMatrix& cm);

// F1 per class; 0 when precision + recall is 0.
std::array<double, kNumClasses> per_class_f1(const ConfusionMatrix& cm);

double macro_f1(const ConfusionMatrix& cm);

// Multiclass R_K statistic; 0 on a zero denominator.
double mcc(const ConfusionMatrix& cm);

struct EvalReport {
    double accuracy = 0.0;
    std::array<double, kNumClasses> f1{};
    double macro_f1 = 0.0;
    double mcc = 0.0;
    ConfusionMatrix cm;
    // metadata
    std::string model;
    std::string features;
    double label_fraction = 1.0;
    std::uint64_t seed = 42;

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
    std::string to_table_row() const;  // integer percentages, half-up
};

EvalReport evaluate(const std::vector<int>& y_true, const std::vector<int>& y_pred);

enum class ReportFormat { Table, Json, Csv };

std::string render_report(const EvalReport& report, ReportFormat format);

}  // namespace clid

#endif  // CLID_EVAL_HPP
