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

#include "learnspec/head.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "learnspec/error.hpp"

namespace learnspec {

HeadParams HeadParams::zeros(std::size_t num_classes, std::size_t num_features) {
  return HeadParams{Matrix(num_classes, num_features),
                    std::vector<double>(num_classes, 0.0)};
}

std::size_t HeadOutput::predicted_class() const {
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) -
      probabilities.begin());
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double top = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

double cross_entropy(std::span<const double> probabilities,
                     std::size_t true_class) {
  if (true_class >= probabilities.size()) {
    throw ContractViolation("cross_entropy: class index out of range");
  }
  return -std::log(probabilities[true_class] + kLogFloor);
}

HeadOutput head_forward(const Spectrogram& spec, const HeadParams& head) {
  if (spec.filter_count() != head.num_features()) {
    throw ContractViolation("head: spectrogram has " +
                            std::to_string(spec.filter_count()) +
                            " columns, head expects " +
                            std::to_string(head.num_features()));
  }
  if (head.weights.rows() != head.biases.size()) {
    throw ContractViolation("head: weight rows and bias length differ");
  }
  if (spec.frame_count() == 0) throw ContractViolation("head: empty spectrogram");

  HeadOutput out;
  const std::size_t frames = spec.frame_count();
  const std::size_t features = spec.filter_count();
  out.pooled.assign(features, 0.0);
  for (std::size_t m = 0; m < frames; ++m) {
    auto row = spec.values.row(m);
    for (std::size_t k = 0; k < features; ++k) out.pooled[k] += row[k];
  }
  for (double& v : out.pooled) v /= static_cast<double>(frames);

  out.logits.resize(head.num_classes());
  for (std::size_t c = 0; c < head.num_classes(); ++c) {
    double acc = head.biases[c];
    auto w = head.weights.row(c);
    for (std::size_t k = 0; k < features; ++k) acc += w[k] * out.pooled[k];
    out.logits[c] = acc;
  }
  out.probabilities = softmax(out.logits);
  return out;
}

LossReport head_loss(const Spectrogram& spec, const HeadParams& head,
                     std::size_t true_class) {
  HeadOutput fwd = head_forward(spec, head);
  LossReport report;
  report.loss = cross_entropy(fwd.probabilities, true_class);
  report.predicted_class = fwd.predicted_class();
  report.probabilities = std::move(fwd.probabilities);
  return report;
}

HeadBackward head_backward(const Spectrogram& spec, const HeadParams& head,
                           std::size_t true_class) {
  if (true_class >= head.num_classes()) {
    throw ContractViolation("head_backward: class " + std::to_string(true_class) +
                            " out of range for " +
                            std::to_string(head.num_classes()) + " classes");
  }
  HeadOutput fwd = head_forward(spec, head);
  const std::size_t classes = head.num_classes();
  const std::size_t features = head.num_features();
  const std::size_t frames = spec.frame_count();

  std::vector<double> d_logits = fwd.probabilities;
  d_logits[true_class] -= 1.0;
  // Exact derivative of the floored log; the factor is 1 unless p_y is tiny.
  const double p_true = fwd.probabilities[true_class];
  const double floor_scale = p_true / (p_true + kLogFloor);
  for (double& d : d_logits) d *= floor_scale;

  HeadBackward out;
  out.loss = cross_entropy(fwd.probabilities, true_class);
  out.head.d_biases = d_logits;
  out.head.d_weights = Matrix(classes, features);
  std::vector<double> d_pooled(features, 0.0);
  for (std::size_t c = 0; c < classes; ++c) {
    auto w = head.weights.row(c);
    auto dw = out.head.d_weights.row(c);
    for (std::size_t k = 0; k < features; ++k) {
      dw[k] = d_logits[c] * fwd.pooled[k];
      d_pooled[k] += d_logits[c] * w[k];
    }
  }

  out.frames.d_values = Matrix(frames, features);
  const double inv_frames = 1.0 / static_cast<double>(frames);
  for (std::size_t m = 0; m < frames; ++m) {
    auto row = out.frames.d_values.row(m);
    for (std::size_t k = 0; k < features; ++k) row[k] = d_pooled[k] * inv_frames;
  }
  return out;
}

}  // namespace learnspec
