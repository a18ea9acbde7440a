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

#include "learnspec/baseline_mfcc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "learnspec/error.hpp"
#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"

namespace learnspec {

void validate(const StftConfig& config) {
  if (config.frame_len < 2) throw ConfigError("frame_len must be >= 2");
  if (config.hop == 0 || config.hop > config.frame_len) {
    throw ConfigError("hop must lie in [1, frame_len]");
  }
}

std::vector<double> make_window(Window window, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (window == Window::Hamming && length > 1) {
    const double denom = static_cast<double>(length - 1);
    for (std::size_t n = 0; n < length; ++n) {
      w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / denom);
    }
  }
  return w;
}

Matrix stft_power(std::span<const double> audio, const StftConfig& config) {
  validate(config);
  const std::size_t frames = output_len(audio.size(), config.frame_len, config.hop);
  const std::size_t bins = config.frame_len / 2 + 1;
  const std::vector<double> window = make_window(config.window, config.frame_len);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> frame(config.frame_len);
  std::vector<std::complex<double>> spectrum;

  Matrix power(frames, bins);
  for (std::size_t m = 0; m < frames; ++m) {
    const double* src = audio.data() + m * config.hop;
    for (std::size_t n = 0; n < config.frame_len; ++n) frame[n] = src[n] * window[n];
    fft.fwd(spectrum, frame);
    auto row = power.row(m);
    for (std::size_t b = 0; b < bins; ++b) row[b] = std::norm(spectrum[b]);
  }
  return power;
}

MelBank mel_bank(std::size_t num_mels, std::size_t frame_len, double sample_rate,
                 double f_min, double f_max) {
  if (num_mels == 0) throw ConfigError("num_mels must be >= 1");
  if (frame_len < 2) throw ConfigError("frame_len must be >= 2");
  if (!(sample_rate > 0.0) || !(f_min >= 0.0) || !(f_min < f_max) ||
      !(f_max <= sample_rate / 2.0)) {
    throw ConfigError("mel bank range must satisfy 0 <= f_min < f_max <= fs/2");
  }
  const std::size_t bins = frame_len / 2 + 1;
  const double lo = hz_to_mel(f_min);
  const double hi = hz_to_mel(f_max);

  MelBank bank;
  bank.edges_hz.resize(num_mels + 2);
  std::vector<std::size_t> edge_bins(num_mels + 2);
  for (std::size_t j = 0; j < num_mels + 2; ++j) {
    const double mel = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(num_mels + 1);
    bank.edges_hz[j] = j == 0 ? f_min : (j == num_mels + 1 ? f_max : mel_to_hz(mel));
    const double pos = std::round(bank.edges_hz[j] * static_cast<double>(frame_len) / sample_rate);
    edge_bins[j] = std::min(bins - 1, static_cast<std::size_t>(pos));
  }

  bank.triangles = Matrix(num_mels, bins);
  bank.center_bins.resize(num_mels);
  for (std::size_t m = 0; m < num_mels; ++m) {
    const std::size_t left = edge_bins[m];
    const std::size_t center = edge_bins[m + 1];
    const std::size_t right = edge_bins[m + 2];
    bank.center_bins[m] = center;
    auto row = bank.triangles.row(m);
    for (std::size_t j = left + 1; j < center; ++j) {
      row[j] = static_cast<double>(j - left) / static_cast<double>(center - left);
    }
    for (std::size_t j = center + 1; j < right; ++j) {
      row[j] = static_cast<double>(right - j) / static_cast<double>(right - center);
    }
    row[center] = 1.0;
  }
  return bank;
}

Matrix log_mel(const Matrix& power, const MelBank& bank) {
  if (power.cols() != bank.num_bins()) {
    throw ContractViolation("log_mel: power has " + std::to_string(power.cols()) +
                            " bins, mel bank expects " + std::to_string(bank.num_bins()));
  }
  Matrix out(power.rows(), bank.num_mels());
  for (std::size_t f = 0; f < power.rows(); ++f) {
    auto p = power.row(f);
    for (std::size_t m = 0; m < bank.num_mels(); ++m) {
      auto tri = bank.triangles.row(m);
      double energy = 0.0;
      for (std::size_t b = 0; b < p.size(); ++b) energy += tri[b] * p[b];
      out(f, m) = std::log(energy + kLogMelFloor);
    }
  }
  return out;
}

namespace {

// Row k holds s_k cos(pi k (2n + 1) / 2N).
Matrix dct_table(std::size_t n) {
  Matrix table(n, n);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
    for (std::size_t i = 0; i < n; ++i) {
      table(k, i) = scale * std::cos(std::numbers::pi * static_cast<double>(k) *
                                     (2.0 * static_cast<double>(i) + 1.0) / (2.0 * nn));
    }
  }
  return table;
}

}  // namespace

std::vector<double> dct2(std::span<const double> input) {
  const Matrix table = dct_table(input.size());
  std::vector<double> out(input.size(), 0.0);
  for (std::size_t k = 0; k < input.size(); ++k) {
    auto row = table.row(k);
    for (std::size_t i = 0; i < input.size(); ++i) out[k] += row[i] * input[i];
  }
  return out;
}

std::vector<double> idct2(std::span<const double> coeffs) {
  const Matrix table = dct_table(coeffs.size());
  std::vector<double> out(coeffs.size(), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    auto row = table.row(k);
    for (std::size_t i = 0; i < coeffs.size(); ++i) out[i] += row[i] * coeffs[k];
  }
  return out;
}

Matrix cepstra(const Matrix& log_mel_frames, std::size_t num_ceps) {
  const std::size_t n = log_mel_frames.cols();
  if (num_ceps > n) {
    throw ContractViolation("num_ceps " + std::to_string(num_ceps) +
                            " exceeds mel band count " + std::to_string(n));
  }
  const Matrix table = dct_table(n);
  Matrix out(log_mel_frames.rows(), num_ceps);
  for (std::size_t f = 0; f < log_mel_frames.rows(); ++f) {
    auto x = log_mel_frames.row(f);
    for (std::size_t k = 0; k < num_ceps; ++k) {
      auto row = table.row(k);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += row[i] * x[i];
      out(f, k) = acc;
    }
  }
  return out;
}

Matrix mfcc(std::span<const double> audio, const StftConfig& config,
            const MelBank& bank, std::size_t num_ceps) {
  if (num_ceps > bank.num_mels()) {
    throw ContractViolation("num_ceps exceeds num_mels");
  }
  return cepstra(log_mel(stft_power(audio, config), bank), num_ceps);
}

}  // namespace learnspec
