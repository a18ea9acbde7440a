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

#include "learnspec/paramgrad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "learnspec/error.hpp"

namespace learnspec {

std::string_view param_name(Param p) {
  switch (p) {
    case Param::Amplitude: return "amplitude";
    case Param::Order: return "order";
    case Param::Bandwidth: return "bandwidth";
    case Param::CenterFreq: return "center_freq";
  }
  return "?";
}

double get_param(const FilterParams& params, Param p) {
  switch (p) {
    case Param::Amplitude: return params.amplitude;
    case Param::Order: return params.order;
    case Param::Bandwidth: return params.bandwidth;
    case Param::CenterFreq: return params.center_freq;
  }
  return 0.0;
}

void set_param(FilterParams& params, Param p, double value) {
  switch (p) {
    case Param::Amplitude: params.amplitude = value; break;
    case Param::Order: params.order = value; break;
    case Param::Bandwidth: params.bandwidth = value; break;
    case Param::CenterFreq: params.center_freq = value; break;
  }
}

double ParamGrads::get(Param p) const {
  switch (p) {
    case Param::Amplitude: return d_amplitude;
    case Param::Order: return d_order;
    case Param::Bandwidth: return d_bandwidth;
    case Param::CenterFreq: return d_center_freq;
  }
  return 0.0;
}

ParamGrads& ParamGrads::operator+=(const ParamGrads& other) {
  d_amplitude += other.d_amplitude;
  d_order += other.d_order;
  d_bandwidth += other.d_bandwidth;
  d_center_freq += other.d_center_freq;
  return *this;
}

ParamGrads param_grads(const FilterParams& params,
                       std::span<const double> tap_grads, double sample_rate,
                       std::size_t filter_index) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double a = params.amplitude;
  const double n = params.order;
  const double b = params.bandwidth;
  const double f = params.center_freq;
  const double sigma = params.phase;

  ParamGrads out;
  for (std::size_t i = 0; i < tap_grads.size(); ++i) {
    const double upstream = tap_grads[i];
    const double t = tap_time(i, sample_rate);
    const double log_t = std::log(t);
    // t^(n-1) e^(-2 pi b t)
    const double envelope = std::exp((n - 1.0) * log_t - two_pi * b * t);
    const double phase = two_pi * f * t + sigma;
    const double c = std::cos(phase);
    const double s = std::sin(phase);

    out.d_center_freq += upstream * a * envelope * (-s * two_pi * t);
    out.d_amplitude += upstream * envelope * c;
    out.d_bandwidth += upstream * a * envelope * (-c * two_pi * t);
    out.d_order += upstream * a * envelope * log_t * c;
  }

  for (Param p : kLearnableParams) {
    if (!std::isfinite(out.get(p))) {
      throw NumericError("non-finite gradient for filter " +
                         std::to_string(filter_index) + " parameter " +
                         std::string(param_name(p)));
    }
  }
  return out;
}

double fd_oracle(const FilterParams& params, Param which, const KernelLoss& loss,
                 double step, std::size_t kernel_len, double sample_rate) {
  if (!(step > 0.0)) throw ContractViolation("fd_oracle: step must be > 0");
  FilterParams plus = params;
  FilterParams minus = params;
  const double value = get_param(params, which);
  set_param(plus, which, value + step);
  set_param(minus, which, value - step);
  const double up = loss(synth_kernel(plus, kernel_len, sample_rate));
  const double down = loss(synth_kernel(minus, kernel_len, sample_rate));
  return (up - down) / (2.0 * step);
}

double default_fd_step(const FilterParams& params, Param which) {
  return 1e-4 * std::max(1.0, std::abs(get_param(params, which)));
}

FilterParams project(const FilterParams& params, const BankConfig& config) {
  FilterParams out = params;
  out.center_freq = std::clamp(out.center_freq, 0.0, config.sample_rate / 2.0);
  out.bandwidth = std::max(out.bandwidth, kBandwidthFloor);
  out.order = std::clamp(out.order, 1.0, kOrderCap);
  return out;
}

}  // namespace learnspec
