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

#include "learnspec/gammatone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "learnspec/error.hpp"

namespace learnspec {

void validate(const BankConfig& config) {
  std::ostringstream why;
  if (config.num_filters == 0) why << "num_filters must be positive; ";
  if (config.kernel_len == 0) why << "kernel_len must be positive; ";
  if (config.stride == 0) why << "stride must be positive; ";
  if (config.stride > config.kernel_len) why << "stride exceeds kernel_len; ";
  if (!(config.sample_rate > 0.0) || !std::isfinite(config.sample_rate)) {
    why << "sample_rate must be positive; ";
  }
  if (!(config.f_min >= 0.0)) why << "f_min must be >= 0; ";
  if (!(config.f_min < config.f_max)) why << "f_min must be < f_max; ";
  if (!(config.f_max <= config.sample_rate / 2.0)) {
    why << "f_max exceeds Nyquist; ";
  }
  const std::string msg = why.str();
  if (!msg.empty()) {
    throw ConfigError("invalid bank config: " + msg.substr(0, msg.size() - 2));
  }
}

double hz_to_mel(double f_hz) {
  if (!(f_hz >= 0.0)) throw DomainError("hz_to_mel: negative frequency");
  return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_to_hz(double f_mel) {
  if (!(f_mel >= 0.0)) throw DomainError("mel_to_hz: negative mel value");
  return 700.0 * (std::pow(10.0, f_mel / 2595.0) - 1.0);
}

double erb_bandwidth(double f_hz) {
  return 24.7 * (4.37 * (f_hz / 1000.0) + 1.0);
}

FilterBank init_bank(const BankConfig& config) {
  validate(config);
  const double lo = hz_to_mel(config.f_min);
  const double hi = hz_to_mel(config.f_max);
  const double step = (hi - lo) / static_cast<double>(config.num_filters + 1);

  std::vector<double> centers;
  centers.reserve(config.num_filters);
  for (std::size_t k = 1; k <= config.num_filters; ++k) {
    centers.push_back(mel_to_hz(lo + static_cast<double>(k) * step));
  }
  return bank_with_centers(config, centers);
}

FilterBank bank_with_centers(const BankConfig& config,
                             const std::vector<double>& centers_hz) {
  validate(config);
  if (centers_hz.size() != config.num_filters) {
    throw ConfigError("expected " + std::to_string(config.num_filters) +
                      " center frequencies, got " +
                      std::to_string(centers_hz.size()));
  }
  FilterBank bank{config, {}};
  bank.params.reserve(centers_hz.size());
  for (double center : centers_hz) {
    if (!(center >= 0.0 && center <= config.sample_rate / 2.0)) {
      throw ConfigError("center frequency outside [0, Nyquist]");
    }
    bank.params.push_back(FilterParams{.amplitude = kInitAmplitude,
                                       .order = kInitOrder,
                                       .bandwidth = erb_bandwidth(center),
                                       .center_freq = center,
                                       .phase = 0.0});
  }
  return bank;
}

std::vector<double> synth_kernel(const FilterParams& p, std::size_t kernel_len,
                                 double sample_rate) {
  if (!std::isfinite(p.amplitude) || !std::isfinite(p.order) ||
      !std::isfinite(p.bandwidth) || !std::isfinite(p.center_freq) ||
      !std::isfinite(p.phase) || !std::isfinite(sample_rate)) {
    throw NumericError("synth_kernel: non-finite filter parameter");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> taps(kernel_len);
  for (std::size_t i = 0; i < kernel_len; ++i) {
    const double t = tap_time(i, sample_rate);
    const double envelope = std::exp((p.order - 1.0) * std::log(t) -
                                     two_pi * p.bandwidth * t);
    taps[i] = p.amplitude * envelope * std::cos(two_pi * p.center_freq * t + p.phase);
  }
  return taps;
}

std::vector<ResponsePoint> kernel_response(const std::vector<double>& taps,
                                           double sample_rate,
                                           std::size_t n_points) {
  if (n_points < 2) throw ContractViolation("frequency response needs n_points >= 2");
  std::vector<ResponsePoint> out;
  out.reserve(n_points);
  const double nyquist = sample_rate / 2.0;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double freq = nyquist * static_cast<double>(j) /
                        static_cast<double>(n_points - 1);
    // Goertzel: s[i] = x[i] + 2 cos(w) s[i-1] - s[i-2]; |X(w)|^2 from the
    // final two states.
    const double w = 2.0 * std::numbers::pi * freq / sample_rate;
    const double coeff = 2.0 * std::cos(w);
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : taps) {
      const double s0 = x + coeff * s1 - s2;
      s2 = s1;
      s1 = s0;
    }
    const double power = std::max(0.0, s1 * s1 + s2 * s2 - coeff * s1 * s2);
    out.push_back({freq, std::sqrt(power)});
  }
  return out;
}

std::vector<ResponsePoint> frequency_response(const FilterParams& params,
                                              std::size_t kernel_len,
                                              double sample_rate,
                                              std::size_t n_points) {
  return kernel_response(synth_kernel(params, kernel_len, sample_rate),
                         sample_rate, n_points);
}

std::vector<double> center_frequencies(const FilterBank& bank) {
  std::vector<double> out;
  out.reserve(bank.params.size());
  for (const auto& p : bank.params) out.push_back(p.center_freq);
  return out;
}

}  // namespace learnspec
