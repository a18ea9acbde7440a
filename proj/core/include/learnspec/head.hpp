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
#include <vector>

#include "learnspec/frontend.hpp"
#include "learnspec/matrix.hpp"

namespace learnspec {

// Mean-over-time pooling, affine map, softmax. weights is
// num_classes x num_filters.
struct HeadParams {
  Matrix weights;
  std::vector<double> biases;

  std::size_t num_classes() const { return biases.size(); }
  std::size_t num_features() const { return weights.cols(); }

  static HeadParams zeros(std::size_t num_classes, std::size_t num_features);
  friend bool operator==(const HeadParams&, const HeadParams&) = default;
};

struct HeadOutput {
  std::vector<double> pooled;
  std::vector<double> logits;
  std::vector<double> probabilities;

  std::size_t predicted_class() const;
};

struct LossReport {
  double loss = 0.0;
  std::vector<double> probabilities;
  std::size_t predicted_class = 0;
};

struct HeadGrads {
  Matrix d_weights;
  std::vector<double> d_biases;
};

inline constexpr double kLogFloor = 1e-12;

// Softmax with max-subtraction.
std::vector<double> softmax(std::span<const double> logits);

// -log(p[true_class] + 1e-12).
double cross_entropy(std::span<const double> probabilities,
                     std::size_t true_class);

// Throws ContractViolation if the spectrogram column count differs from the
// head's feature count.
HeadOutput head_forward(const Spectrogram& spec, const HeadParams& head);

LossReport head_loss(const Spectrogram& spec, const HeadParams& head,
                     std::size_t true_class);

struct HeadBackward {
  HeadGrads head;
  FrameGrad frames;
  double loss = 0.0;
};

// Softmax cross-entropy gradients. The frame gradient is the mean-pool
// adjoint: (1/M) sum_c (p_c - [c == true]) W[c][k], identical in every row.
HeadBackward head_backward(const Spectrogram& spec, const HeadParams& head,
                           std::size_t true_class);

}  // namespace learnspec
