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

#include "learnspec/gammatone.hpp"
#include "learnspec/matrix.hpp"

namespace learnspec {

// Stacked filter outputs: row m is time frame m, column k is filter k.
struct Spectrogram {
  Matrix values;

  std::size_t frame_count() const { return values.rows(); }
  std::size_t filter_count() const { return values.cols(); }
};

// dL/dz_k(m), same shape as the Spectrogram it belongs to.
struct FrameGrad {
  Matrix d_values;
};

// floor((n_samples - kernel_len) / stride) + 1. Trailing samples that do not
// fill a window are dropped.
std::size_t output_len(std::size_t n_samples, std::size_t kernel_len,
                       std::size_t stride);

std::vector<std::vector<double>> synth_kernels(const FilterBank& bank);

// z_k(m) = sum_i g_k(i) x(m*s + i). Correlation, no kernel flip. Kernels are
// re-synthesized from the bank parameters on every call.
Spectrogram forward(std::span<const double> audio, const FilterBank& bank);

// Same as forward() with caller-supplied taps (all of equal length).
Spectrogram forward_with_kernels(std::span<const double> audio,
                                 const std::vector<std::vector<double>>& kernels,
                                 std::size_t stride);

// dL/dg_k(i) = sum_m d_values[m][k] x(m*s + i). One vector of K taps per
// filter. Throws ContractViolation when grad does not match forward's shape.
std::vector<std::vector<double>> backward_to_kernels(
    std::span<const double> audio, const FrameGrad& grad, const FilterBank& bank);

std::vector<std::vector<double>> backward_to_kernels(
    std::span<const double> audio, const FrameGrad& grad,
    std::size_t kernel_len, std::size_t stride);

// Entry-wise log(z^2 + epsilon).
Spectrogram log_compress(const Spectrogram& spec, double epsilon);

// Chain rule through log_compress: d_in = d_out * 2z / (z^2 + epsilon), where
// raw is the uncompressed spectrogram.
FrameGrad log_compress_backward(const Spectrogram& raw, const FrameGrad& d_out,
                                double epsilon);

struct FrontendOptions {
  bool log_compress = false;
  double epsilon = 1e-16;  // unit-amplitude kernels give z^2 around 1e-12

  friend bool operator==(const FrontendOptions&, const FrontendOptions&) = default;
};

// forward() followed by log_compress() when enabled.
Spectrogram extract(std::span<const double> audio, const FilterBank& bank,
                    const FrontendOptions& options);

}  // namespace learnspec
