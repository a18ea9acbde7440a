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

#include "learnspec/metrics.hpp"

#include <cstdio>
#include <string>

#include "learnspec/error.hpp"

namespace learnspec {

ConfusionCounts confusion(std::span<const std::size_t> predictions,
                          std::span<const std::size_t> truths,
                          std::size_t num_classes) {
  if (predictions.size() != truths.size()) {
    throw ContractViolation("confusion: " + std::to_string(predictions.size()) +
                            " predictions vs " + std::to_string(truths.size()) +
                            " truths");
  }
  ConfusionCounts counts;
  counts.per_class.assign(num_classes, ClassCounts{});
  counts.total = truths.size();
  for (std::size_t j = 0; j < truths.size(); ++j) {
    const std::size_t pred = predictions[j];
    const std::size_t truth = truths[j];
    if (pred >= num_classes || truth >= num_classes) {
      throw ContractViolation("confusion: label out of range at position " +
                              std::to_string(j));
    }
    if (pred == truth) {
      ++counts.correct;
      ++counts.per_class[truth].tp;
    } else {
      ++counts.per_class[pred].fp;
      ++counts.per_class[truth].fn;
    }
  }
  for (auto& c : counts.per_class) c.tn = counts.total - c.tp - c.fp - c.fn;
  return counts;
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_score(double precision, double sensitivity) {
  return safe_ratio(2.0 * precision * sensitivity, precision + sensitivity);
}

double modified_accuracy(double sensitivity, double specificity) {
  return (sensitivity + specificity) / 2.0;
}

namespace {

struct OneVsRest {
  double sensitivity;
  double specificity;
  double precision;
  double f1;
};

OneVsRest one_vs_rest(const ClassCounts& c) {
  OneVsRest r{};
  r.sensitivity = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fn));
  r.specificity = safe_ratio(static_cast<double>(c.tn), static_cast<double>(c.tn + c.fp));
  r.precision = safe_ratio(static_cast<double>(c.tp), static_cast<double>(c.tp + c.fp));
  r.f1 = f1_score(r.precision, r.sensitivity);
  return r;
}

}  // namespace

MetricReport metric_report(const ConfusionCounts& counts) {
  if (counts.total == 0 || counts.per_class.empty()) {
    throw ContractViolation("metric_report: no samples");
  }
  MetricReport report;
  report.accuracy = static_cast<double>(counts.correct) / static_cast<double>(counts.total);

  if (counts.num_classes() == 2) {
    const OneVsRest pos = one_vs_rest(counts.per_class[1]);
    report.sensitivity = pos.sensitivity;
    report.specificity = pos.specificity;
    report.precision = pos.precision;
    report.f1 = pos.f1;
  } else {
    const double n = static_cast<double>(counts.num_classes());
    for (const auto& c : counts.per_class) {
      const OneVsRest r = one_vs_rest(c);
      report.sensitivity += r.sensitivity / n;
      report.specificity += r.specificity / n;
      report.precision += r.precision / n;
      report.f1 += r.f1 / n;
    }
  }
  report.macc = modified_accuracy(report.sensitivity, report.specificity);
  return report;
}

namespace {

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

std::string report_csv(const MetricReport& r) {
  return "accuracy,sensitivity,specificity,precision,f1,macc\n" + pct(r.accuracy) +
         "," + pct(r.sensitivity) + "," + pct(r.specificity) + "," +
         pct(r.precision) + "," + pct(r.f1) + "," + pct(r.macc) + "\n";
}

std::string report_text(const MetricReport& r) {
  const std::pair<const char*, double> rows[] = {
      {"Accuracy", r.accuracy},   {"Sensitivity", r.sensitivity},
      {"Specificity", r.specificity}, {"Precision", r.precision},
      {"F1", r.f1},               {"MACC", r.macc}};
  std::string out;
  for (const auto& [name, value] : rows) {
    char line[64];
    std::snprintf(line, sizeof line, "%-12s %7s\n", name, pct(value).c_str());
    out += line;
  }
  return out;
}

}  // namespace learnspec
