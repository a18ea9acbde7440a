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

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string_view>

#include "learnspec/gammatone.hpp"

namespace learnspec {

enum class Param { Amplitude, Order, Bandwidth, CenterFreq };

inline constexpr std::array<Param, 4> kLearnableParams = {
    Param::Amplitude, Param::Order, Param::Bandwidth, Param::CenterFreq};

std::string_view param_name(Param p);
double get_param(const FilterParams& params, Param p);
void set_param(FilterParams& params, Param p, double value);

struct ParamGrads {
  double d_amplitude = 0.0;
  double d_order = 0.0;
  double d_bandwidth = 0.0;
  double d_center_freq = 0.0;

  double get(Param p) const;
  ParamGrads& operator+=(const ParamGrads& other);
};

// Chain rule from kernel-tap gradients to the four learnable parameters,
// using the closed-form partials of the gammatone kernel. Sums run over taps
// in ascending order. Throws NumericError (naming filter_index and the
// parameter) if any accumulated value is non-finite.
ParamGrads param_grads(const FilterParams& params,
                       std::span<const double> tap_grads, double sample_rate,
                       std::size_t filter_index = 0);

using KernelLoss = std::function<double(std::span<const double>)>;

// Central difference (loss(p + h) - loss(p - h)) / 2h, re-synthesizing the
// kernel at each probe.
double fd_oracle(const FilterParams& params, Param which, const KernelLoss& loss,
                 double step, std::size_t kernel_len, double sample_rate);

// Step used by the gradient checks: 1e-4 * max(1, |p|).
double default_fd_step(const FilterParams& params, Param which);

inline constexpr double kBandwidthFloor = 1.0;  // Hz
inline constexpr double kOrderCap = 10.0;

// Clamp into the physical region: center in [0, fs/2], bandwidth >= 1 Hz,
// order in [1, 10]. Amplitude and phase pass through.
FilterParams project(const FilterParams& params, const BankConfig& config);

}  // namespace learnspec
