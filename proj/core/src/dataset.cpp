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

#include "learnspec/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "learnspec/error.hpp"
#include "learnspec/wav.hpp"

namespace learnspec {

LabeledClip decimate(const LabeledClip& clip, std::size_t factor) {
  if (factor < 1) throw ConfigError("decimation factor must be >= 1");
  if (factor == 1) return clip;
  LabeledClip out = clip;
  out.sample_rate = clip.sample_rate / static_cast<double>(factor);
  const std::size_t n_out = clip.samples.size() / factor;
  out.samples.assign(n_out, 0.0);
  for (std::size_t j = 0; j < n_out; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < factor; ++i) acc += clip.samples[j * factor + i];
    out.samples[j] = acc / static_cast<double>(factor);
  }
  return out;
}

void validate(const SynthSpec& spec) {
  if (spec.class_tones.empty()) throw ConfigError("synth: no classes");
  if (!(spec.sample_rate > 0.0)) throw ConfigError("synth: sample_rate must be > 0");
  if (!(spec.noise_level >= 0.0)) throw ConfigError("synth: noise_level must be >= 0");
  if (spec.clip_len == 0) throw ConfigError("synth: clip_len must be >= 1");
  for (const auto& tones : spec.class_tones) {
    for (double f : tones) {
      if (!(f >= 0.0 && f < spec.sample_rate / 2.0)) {
        throw ConfigError("synth: tone " + std::to_string(f) + " Hz not below Nyquist");
      }
    }
  }
}

std::vector<LabeledClip> gen_synth(const SynthSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * std::numbers::pi);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<LabeledClip> clips;
  clips.reserve(spec.class_tones.size() * spec.clips_per_class);
  for (std::size_t c = 0; c < spec.class_tones.size(); ++c) {
    const auto& tones = spec.class_tones[c];
    const double amp = tones.empty() ? 0.0 : 0.5 / static_cast<double>(tones.size());
    for (std::size_t j = 0; j < spec.clips_per_class; ++j) {
      LabeledClip clip;
      clip.sample_rate = spec.sample_rate;
      clip.label = c;
      clip.source_id = "synth_c" + std::to_string(c) + "_" + std::to_string(j);
      clip.samples.assign(spec.clip_len, 0.0);
      for (double f : tones) {
        const double phi = phase_dist(rng);
        const double w = 2.0 * std::numbers::pi * f / spec.sample_rate;
        for (std::size_t i = 0; i < spec.clip_len; ++i) {
          clip.samples[i] += amp * std::cos(w * static_cast<double>(i) + phi);
        }
      }
      if (spec.noise_level > 0.0) {
        for (double& x : clip.samples) x += spec.noise_level * noise(rng);
      }
      clips.push_back(std::move(clip));
    }
  }
  return clips;
}

Dataset to_dataset(const std::vector<LabeledClip>& clips) {
  Dataset data;
  data.reserve(clips.size());
  for (const auto& c : clips) data.push_back(Example{c.samples, c.label, c.group});
  return data;
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::size_t parse_index(const std::string& text, const char* what, std::size_t line) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError("manifest line " + std::to_string(line) + ": " + what + " '" +
                         text + "' is not a non-negative integer",
                     line);
  }
  return value;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(const std::string& text,
                                          const std::filesystem::path& base_dir,
                                          std::optional<std::size_t> num_classes) {
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_csv(line);
    if (first) {
      first = false;
      if (fields.size() >= 2 && fields[0] == "path" && fields[1] == "label") continue;
    }
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError("manifest line " + std::to_string(line_no) +
                           ": expected path,label[,group]",
                       line_no);
    }
    if (fields[0].empty()) {
      throw ParseError("manifest line " + std::to_string(line_no) + ": empty path",
                       line_no);
    }
    ManifestEntry entry;
    entry.line = line_no;
    std::filesystem::path p(fields[0]);
    entry.path = p.is_absolute() ? p : base_dir / p;
    entry.path = entry.path.lexically_normal();
    entry.label = parse_index(fields[1], "label", line_no);
    if (num_classes && entry.label >= *num_classes) {
      throw ParseError("manifest line " + std::to_string(line_no) + ": unknown label " +
                           std::to_string(entry.label) + " (model has " +
                           std::to_string(*num_classes) + " classes)",
                       line_no);
    }
    if (fields.size() == 3) entry.group = parse_index(fields[2], "group", line_no);
    if (!seen.insert(entry.path.string()).second) {
      throw ParseError("manifest line " + std::to_string(line_no) +
                           ": duplicate path " + fields[0],
                       line_no);
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path,
                                         std::optional<std::size_t> num_classes) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), path.parent_path(), num_classes);
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest " + path.string());
  const bool grouped = std::any_of(entries.begin(), entries.end(),
                                   [](const ManifestEntry& e) { return e.group.has_value(); });
  out << (grouped ? "path,label,group\n" : "path,label\n");
  for (const auto& e : entries) {
    out << e.path.generic_string() << ',' << e.label;
    if (grouped) out << ',' << e.group.value_or(0);
    out << '\n';
  }
}

std::vector<LabeledClip> load_clips(const std::vector<ManifestEntry>& entries,
                                    std::size_t decimate_factor,
                                    std::optional<double> expected_rate) {
  std::vector<LabeledClip> clips;
  clips.reserve(entries.size());
  for (const auto& e : entries) {
    WavAudio wav = read_wav(e.path);
    LabeledClip clip{std::move(wav.samples), wav.sample_rate, e.label,
                     e.path.string(), e.group};
    clip = decimate(clip, decimate_factor);
    if (expected_rate && std::abs(clip.sample_rate - *expected_rate) > 1e-9) {
      throw ConfigError(e.path.string() + ": sample rate " +
                        std::to_string(clip.sample_rate) + " Hz, bank expects " +
                        std::to_string(*expected_rate) + " Hz");
    }
    if (clip.samples.empty()) throw ConfigError(e.path.string() + ": no samples");
    clips.push_back(std::move(clip));
  }
  return clips;
}

}  // namespace learnspec
