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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "learnspec/trainer.hpp"

namespace learnspec {

struct LabeledClip {
  std::vector<double> samples;
  double sample_rate = 0.0;
  std::size_t label = 0;
  std::string source_id;
  std::optional<std::size_t> group;
};

// Block moving average of length factor, then every factor-th sample.
// factor 1 is the identity. Not a production resampler.
LabeledClip decimate(const LabeledClip& clip, std::size_t factor);

struct SynthSpec {
  std::vector<std::vector<double>> class_tones;  // Hz, one list per class
  double noise_level = 0.0;                       // white noise std
  std::size_t clip_len = 1000;
  std::size_t clips_per_class = 20;
  double sample_rate = 1000.0;
  std::uint64_t seed = 0;
};

void validate(const SynthSpec& spec);

// Each clip sums its class's tones (random phase, total peak 0.5) and adds
// Gaussian noise. Clips are ordered class-major.
std::vector<LabeledClip> gen_synth(const SynthSpec& spec);

Dataset to_dataset(const std::vector<LabeledClip>& clips);

struct ManifestEntry {
  std::filesystem::path path;
  std::size_t label = 0;
  std::optional<std::size_t> group;
  std::size_t line = 0;
};

// CSV of path,label[,group]; an optional "path,label[,group]" header. Relative
// paths resolve against the manifest's directory. Throws ParseError (with the
// line number) on duplicate paths, malformed rows, or labels >= num_classes
// when num_classes is given.
std::vector<ManifestEntry> parse_manifest(
    const std::string& text, const std::filesystem::path& base_dir,
    std::optional<std::size_t> num_classes = std::nullopt);
std::vector<ManifestEntry> read_manifest(
    const std::filesystem::path& path,
    std::optional<std::size_t> num_classes = std::nullopt);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries);

// Reads each WAV, decimates by factor, and checks that every clip ends up at
// expected_rate (when given).
std::vector<LabeledClip> load_clips(const std::vector<ManifestEntry>& entries,
                                    std::size_t decimate_factor = 1,
                                    std::optional<double> expected_rate = std::nullopt);

}  // namespace learnspec
