// Copyright 2026 The learnspec Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace learnspec {

// One-vs-rest counts for each class.
struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
  std::size_t correct = 0;
  std::size_t total = 0;

  std::size_t num_classes() const { return per_class.size(); }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Throws ContractViolation on length mismatch or labels >= num_classes.
ConfusionCounts confusion(std::span<const std::size_t> predictions,
                          std::span<const std::size_t> truths,
                          std::size_t num_classes);

// All values are fractions in [0, 1].
struct MetricReport {
  double accuracy = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  double macc = 0.0;
};

// num / den, or 0 when den == 0.
double safe_ratio(double num, double den);
double f1_score(double precision, double sensitivity);
double modified_accuracy(double sensitivity, double specificity);

// Binary (two classes): class 1 is the positive class. Multiclass: accuracy
// is overall, the rest are unweighted means of the one-vs-rest values.
MetricReport metric_report(const ConfusionCounts& counts);

// Percentages with two decimals.
std::string report_csv(const MetricReport& report);
std::string report_text(const MetricReport& report);

}  // namespace learnspec
