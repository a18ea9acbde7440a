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
#include <utility>
#include <vector>

namespace learnspec {

// One gammatone filter, g(t) = a t^(n-1) exp(-2 pi b t) cos(2 pi f t + phase).
// amplitude, order, bandwidth and center_freq are learnable; phase is fixed.
struct FilterParams {
  double amplitude = 1.0;
  double order = 4.0;
  double bandwidth = 24.7;   // Hz
  double center_freq = 0.0;  // Hz
  double phase = 0.0;        // radians

  friend bool operator==(const FilterParams&, const FilterParams&) = default;
};

struct BankConfig {
  std::size_t num_filters = 16;
  double f_min = 0.0;
  double f_max = 400.0;
  std::size_t kernel_len = 100;
  std::size_t stride = 50;
  double sample_rate = 1000.0;

  friend bool operator==(const BankConfig&, const BankConfig&) = default;
};

// Throws ConfigError unless 0 <= f_min < f_max <= sample_rate/2,
// 1 <= stride <= kernel_len and num_filters >= 1.
void validate(const BankConfig& config);

struct FilterBank {
  BankConfig config;
  std::vector<FilterParams> params;

  std::size_t size() const { return params.size(); }
  friend bool operator==(const FilterBank&, const FilterBank&) = default;
};

// Mel scale with base-10 logarithm. Both throw DomainError on negative input.
double hz_to_mel(double f_hz);
double mel_to_hz(double f_mel);

// Equivalent rectangular bandwidth in Hz for a filter centered at f_hz.
double erb_bandwidth(double f_hz);

// Initialization constants for init_bank.
inline constexpr double kInitAmplitude = 1.0;
inline constexpr double kInitOrder = 4.0;

// Places num_filters centers at the interior points of a uniform mel grid
// over [f_min, f_max] (spacing = mel range / (num_filters + 1)), with ERB
// bandwidths, amplitude 1, order 4 and phase 0.
FilterBank init_bank(const BankConfig& config);

// Builds a bank with explicit center frequencies and ERB bandwidths. Used for
// deliberately misaligned starts. Centers need not be sorted.
FilterBank bank_with_centers(const BankConfig& config,
                             const std::vector<double>& centers_hz);

// Sample time of kernel tap i. Starts at one sample, not zero, so t^(n-1)
// and ln(t) stay finite on every tap.
inline double tap_time(std::size_t i, double sample_rate) {
  return static_cast<double>(i + 1) / sample_rate;
}

// Throws NumericError if any parameter is non-finite.
std::vector<double> synth_kernel(const FilterParams& params,
                                 std::size_t kernel_len, double sample_rate);

struct ResponsePoint {
  double freq_hz;
  double magnitude;
};

// |DFT| of the synthesized kernel at n_points frequencies evenly spaced over
// [0, sample_rate/2], evaluated with the Goertzel recurrence.
std::vector<ResponsePoint> frequency_response(const FilterParams& params,
                                              std::size_t kernel_len,
                                              double sample_rate,
                                              std::size_t n_points);

// Same evaluation for an arbitrary tap vector.
std::vector<ResponsePoint> kernel_response(const std::vector<double>& taps,
                                           double sample_rate,
                                           std::size_t n_points);

std::vector<double> center_frequencies(const FilterBank& bank);

}  // namespace learnspec
