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

#include "learnspec/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "learnspec/error.hpp"

namespace learnspec {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw ParseError(std::string("truncated WAV: expected ") + what, pos_);
    }
  }
  std::string tag() {
    need(4, "four-character tag");
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }
  std::uint16_t u16() {
    need(2, "16-bit field");
    const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4, "32-bit field");
    std::uint32_t v = 0;
    for (int b = 3; b >= 0; --b) v = (v << 8) | bytes_[pos_ + static_cast<std::size_t>(b)];
    pos_ += 4;
    return v;
  }
  void skip(std::size_t n) { pos_ += std::min(n, remaining()); }
  const std::uint8_t* here() const { return bytes_.data() + pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

WavAudio parse_wav(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  const std::string riff = r.tag();
  if (riff != "RIFF") {
    throw ParseError("unsupported container magic '" + riff + "' (expected RIFF)", 0);
  }
  r.u32();  // RIFF size; often wrong in the wild, so not trusted
  const std::size_t wave_at = r.offset();
  if (const std::string wave = r.tag(); wave != "WAVE") {
    throw ParseError("expected WAVE form type, found '" + wave + "'", wave_at);
  }

  WavAudio audio;
  bool have_fmt = false;
  std::uint16_t block_align = 0;
  while (r.remaining() >= 8) {
    const std::size_t chunk_at = r.offset();
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    if (id == "fmt ") {
      if (size < 16) throw ParseError("fmt chunk shorter than 16 bytes", chunk_at);
      const std::size_t fmt_at = r.offset();
      const std::uint16_t format = r.u16();
      audio.channels = r.u16();
      audio.sample_rate = static_cast<double>(r.u32());
      r.u32();  // byte rate
      block_align = r.u16();
      audio.bits_per_sample = r.u16();
      std::uint16_t effective = format;
      if (format == kFormatExtensible && size >= 40) {
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        effective = r.u16();  // first two bytes of the sub-format GUID
        r.skip(size - 26);
      } else {
        r.skip(size - 16);
      }
      if (effective != kFormatPcm) {
        throw ParseError("unsupported WAV codec " + std::to_string(effective) +
                         " (only PCM)", fmt_at);
      }
      if (audio.bits_per_sample != 16 && audio.bits_per_sample != 24) {
        throw ParseError("unsupported bit depth " +
                             std::to_string(audio.bits_per_sample) +
                             " (only 16 and 24)", fmt_at + 14);
      }
      if (audio.channels == 0) throw ParseError("zero channels", fmt_at + 2);
      if (!(audio.sample_rate > 0)) throw ParseError("zero sample rate", fmt_at + 4);
      if (block_align != audio.channels * (audio.bits_per_sample / 8)) {
        throw ParseError("block align inconsistent with channels and bit depth",
                         fmt_at + 12);
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw ParseError("data chunk before fmt chunk", chunk_at);
      const std::size_t available = std::min<std::size_t>(size, r.remaining());
      const std::size_t frames = available / block_align;
      const std::size_t width = audio.bits_per_sample / 8;
      const std::uint8_t* p = r.here();
      audio.samples.resize(frames);
      for (std::size_t i = 0; i < frames; ++i) {
        const std::uint8_t* s = p + i * block_align;  // channel 0
        if (width == 2) {
          const auto v = static_cast<std::int16_t>(s[0] | (s[1] << 8));
          audio.samples[i] = static_cast<double>(v) / 32768.0;
        } else {
          std::int32_t v = s[0] | (s[1] << 8) | (s[2] << 16);
          if (v & 0x800000) v -= 0x1000000;
          audio.samples[i] = static_cast<double>(v) / 8388608.0;
        }
      }
      return audio;
    } else {
      r.skip(size + (size & 1u));
    }
  }
  throw ParseError(have_fmt ? "no data chunk" : "no fmt chunk", r.offset());
}

WavAudio read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what() + " at byte " +
                         std::to_string(e.position()),
                     e.position());
  }
}

std::vector<std::uint8_t> encode_wav(std::span<const double> samples,
                                     std::uint32_t sample_rate,
                                     std::uint16_t bits_per_sample) {
  if (bits_per_sample != 16 && bits_per_sample != 24) {
    throw ConfigError("encode_wav: only 16 and 24 bit PCM");
  }
  const std::uint32_t width = bits_per_sample / 8u;
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * width);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, sample_rate);
  put_u32(out, sample_rate * width);
  put_u16(out, static_cast<std::uint16_t>(width));
  put_u16(out, bits_per_sample);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  const double full_scale = bits_per_sample == 16 ? 32768.0 : 8388608.0;
  for (double x : samples) {
    const double scaled = std::round(std::clamp(x, -1.0, 1.0) * full_scale);
    const auto v = static_cast<std::int32_t>(std::clamp(scaled, -full_scale, full_scale - 1.0));
    for (std::uint32_t b = 0; b < width; ++b) {
      out.push_back(static_cast<std::uint8_t>((static_cast<std::uint32_t>(v) >> (8 * b)) & 0xFF));
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               std::uint32_t sample_rate, std::uint16_t bits_per_sample) {
  const auto bytes = encode_wav(samples, sample_rate, bits_per_sample);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace learnspec
