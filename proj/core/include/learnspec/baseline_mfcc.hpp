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

#include "learnspec/matrix.hpp"

namespace learnspec {

enum class Window { Hamming, Rectangular };

struct StftConfig {
  std::size_t frame_len = 400;
  std::size_t hop = 160;
  Window window = Window::Hamming;
};

void validate(const StftConfig& config);

// 0.54 - 0.46 cos(2 pi n / (L - 1)) or all ones.
std::vector<double> make_window(Window window, std::size_t length);

// Frames x (frame_len/2 + 1) matrix of |DFT|^2 of each windowed frame.
Matrix stft_power(std::span<const double> audio, const StftConfig& config);

// Triangular filters over the STFT bins. Edge frequencies are uniform on the
// mel scale; each triangle is snapped to integer bins and reaches exactly 1
// at its center bin.
struct MelBank {
  Matrix triangles;                 // num_mels x num_bins
  std::vector<double> edges_hz;     // num_mels + 2
  std::vector<std::size_t> center_bins;

  std::size_t num_mels() const { return triangles.rows(); }
  std::size_t num_bins() const { return triangles.cols(); }
};

MelBank mel_bank(std::size_t num_mels, std::size_t frame_len,
                 double sample_rate, double f_min, double f_max);

inline constexpr double kLogMelFloor = 1e-10;

// log(power * triangles^T + 1e-10), frames x num_mels.
Matrix log_mel(const Matrix& power, const MelBank& bank);

// Orthonormal DCT-II and its inverse (DCT-III).
std::vector<double> dct2(std::span<const double> input);
std::vector<double> idct2(std::span<const double> coeffs);

// First num_ceps orthonormal DCT-II coefficients of each log-mel frame.
Matrix mfcc(std::span<const double> audio, const StftConfig& config,
            const MelBank& bank, std::size_t num_ceps);

Matrix cepstra(const Matrix& log_mel_frames, std::size_t num_ceps);

}  // namespace learnspec
