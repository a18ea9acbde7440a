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

#include "learnspec/frontend.hpp"

#include <cmath>
#include <string>

#include "learnspec/error.hpp"

namespace learnspec {
namespace {

void check_finite(std::span<const double> audio) {
  for (std::size_t i = 0; i < audio.size(); ++i) {
    if (!std::isfinite(audio[i])) {
      throw NumericError("non-finite audio sample at index " + std::to_string(i));
    }
  }
}

}  // namespace

std::size_t output_len(std::size_t n_samples, std::size_t kernel_len,
                       std::size_t stride) {
  if (stride == 0) throw ContractViolation("stride must be >= 1");
  if (kernel_len == 0) throw ContractViolation("kernel_len must be >= 1");
  if (n_samples < kernel_len) throw InputTooShortError(n_samples, kernel_len);
  return (n_samples - kernel_len) / stride + 1;
}

std::vector<std::vector<double>> synth_kernels(const FilterBank& bank) {
  std::vector<std::vector<double>> kernels;
  kernels.reserve(bank.params.size());
  for (const auto& p : bank.params) {
    kernels.push_back(
        synth_kernel(p, bank.config.kernel_len, bank.config.sample_rate));
  }
  return kernels;
}

Spectrogram forward_with_kernels(std::span<const double> audio,
                                 const std::vector<std::vector<double>>& kernels,
                                 std::size_t stride) {
  if (kernels.empty()) throw ContractViolation("forward: empty filter bank");
  const std::size_t kernel_len = kernels.front().size();
  for (const auto& k : kernels) {
    if (k.size() != kernel_len) {
      throw ContractViolation("forward: kernels of unequal length");
    }
  }
  const std::size_t frames = output_len(audio.size(), kernel_len, stride);
  check_finite(audio);

  Spectrogram spec{Matrix(frames, kernels.size())};
  for (std::size_t m = 0; m < frames; ++m) {
    const double* window = audio.data() + m * stride;
    auto row = spec.values.row(m);
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      const double* taps = kernels[k].data();
      double acc = 0.0;
      for (std::size_t i = 0; i < kernel_len; ++i) acc += taps[i] * window[i];
      row[k] = acc;
    }
  }
  return spec;
}

Spectrogram forward(std::span<const double> audio, const FilterBank& bank) {
  return forward_with_kernels(audio, synth_kernels(bank), bank.config.stride);
}

std::vector<std::vector<double>> backward_to_kernels(
    std::span<const double> audio, const FrameGrad& grad, std::size_t kernel_len,
    std::size_t stride) {
  const std::size_t frames = output_len(audio.size(), kernel_len, stride);
  if (grad.d_values.rows() != frames) {
    throw ContractViolation("backward: frame gradient has " +
                            std::to_string(grad.d_values.rows()) +
                            " rows, forward produces " + std::to_string(frames));
  }
  const std::size_t filters = grad.d_values.cols();
  std::vector<std::vector<double>> taps(filters, std::vector<double>(kernel_len, 0.0));
  for (std::size_t k = 0; k < filters; ++k) {
    auto& out = taps[k];
    for (std::size_t m = 0; m < frames; ++m) {
      const double u = grad.d_values(m, k);
      if (u == 0.0) continue;
      const double* window = audio.data() + m * stride;
      for (std::size_t i = 0; i < kernel_len; ++i) out[i] += u * window[i];
    }
  }
  return taps;
}

std::vector<std::vector<double>> backward_to_kernels(
    std::span<const double> audio, const FrameGrad& grad, const FilterBank& bank) {
  if (grad.d_values.cols() != bank.params.size()) {
    throw ContractViolation("backward: frame gradient has " +
                            std::to_string(grad.d_values.cols()) +
                            " columns, bank has " +
                            std::to_string(bank.params.size()) + " filters");
  }
  return backward_to_kernels(audio, grad, bank.config.kernel_len,
                             bank.config.stride);
}

Spectrogram log_compress(const Spectrogram& spec, double epsilon) {
  if (!(epsilon > 0.0)) throw ContractViolation("log_compress: epsilon must be > 0");
  Spectrogram out{spec.values};
  for (double& z : out.values.data()) z = std::log(z * z + epsilon);
  return out;
}

FrameGrad log_compress_backward(const Spectrogram& raw, const FrameGrad& d_out,
                                double epsilon) {
  if (!raw.values.same_shape(d_out.d_values)) {
    throw ContractViolation("log_compress_backward: shape mismatch");
  }
  FrameGrad d_in{d_out.d_values};
  auto in = d_in.d_values.data();
  auto z = raw.values.data();
  for (std::size_t j = 0; j < in.size(); ++j) {
    in[j] *= 2.0 * z[j] / (z[j] * z[j] + epsilon);
  }
  return d_in;
}

Spectrogram extract(std::span<const double> audio, const FilterBank& bank,
                    const FrontendOptions& options) {
  Spectrogram raw = forward(audio, bank);
  if (!options.log_compress) return raw;
  return log_compress(raw, options.epsilon);
}

}  // namespace learnspec
