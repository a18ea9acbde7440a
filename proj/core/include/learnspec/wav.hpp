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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace learnspec {

struct WavAudio {
  std::vector<double> samples;  // channel 0, scaled into [-1, 1)
  double sample_rate = 0.0;
  std::uint16_t channels = 0;
  std::uint16_t bits_per_sample = 0;
};

// RIFF/WAVE PCM, 16 or 24 bit, any channel count (channel 0 is kept).
// Throws ParseError carrying the byte offset of the offending field.
WavAudio parse_wav(std::span<const std::uint8_t> bytes);
WavAudio read_wav(const std::filesystem::path& path);

// Mono PCM encoder. Samples are clipped to [-1, 1).
std::vector<std::uint8_t> encode_wav(std::span<const double> samples,
                                     std::uint32_t sample_rate,
                                     std::uint16_t bits_per_sample = 16);
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate, std::uint16_t bits_per_sample = 16);

}  // namespace learnspec
