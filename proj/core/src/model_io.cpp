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

#include "learnspec/model_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "learnspec/error.hpp"

namespace learnspec {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_bank(const FilterBank& bank) {
  const BankConfig& c = bank.config;
  std::string out = "bank num_filters=" + std::to_string(c.num_filters) +
                    " f_min=" + format_real(c.f_min) + " f_max=" + format_real(c.f_max) +
                    " kernel_len=" + std::to_string(c.kernel_len) +
                    " stride=" + std::to_string(c.stride) +
                    " sample_rate=" + format_real(c.sample_rate) + "\n";
  for (const auto& p : bank.params) {
    out += format_real(p.amplitude) + " " + format_real(p.order) + " " +
           format_real(p.bandwidth) + " " + format_real(p.center_freq) + " " +
           format_real(p.phase) + "\n";
  }
  return out;
}

std::string format_model(const Model& model) {
  std::string out = format_bank(model.bank);
  out += "[head] classes=" + std::to_string(model.head.num_classes()) +
         " compress=" + (model.frontend.log_compress ? "log" : "none") +
         " epsilon=" + format_real(model.frontend.epsilon) + "\n";
  for (std::size_t c = 0; c < model.head.num_classes(); ++c) {
    out += format_real(model.head.biases[c]);
    for (double w : model.head.weights.row(c)) out += " " + format_real(w);
    out += "\n";
  }
  return out;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw ParseError("model line " + std::to_string(line) + ": " + what, line);
}

double parse_real(const std::string& token, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
    fail(line, "bad real '" + token + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& token, std::size_t line) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(token.c_str(), &end, 10);
  if (token.empty() || token.front() == '-' || end != token.c_str() + token.size()) {
    fail(line, "bad integer '" + token + "'");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::map<std::string, std::string> key_values(const std::vector<std::string>& toks,
                                              std::size_t line) {
  std::map<std::string, std::string> kv;
  for (std::size_t j = 1; j < toks.size(); ++j) {
    const auto eq = toks[j].find('=');
    if (eq == std::string::npos) fail(line, "expected key=value, got '" + toks[j] + "'");
    kv[toks[j].substr(0, eq)] = toks[j].substr(eq + 1);
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key, std::size_t line) {
  auto it = kv.find(key);
  if (it == kv.end()) fail(line, "missing " + key);
  return it->second;
}

std::vector<double> reals(const std::string& text, std::size_t expected,
                          std::size_t line) {
  const auto toks = tokens(text);
  if (toks.size() != expected) {
    fail(line, "expected " + std::to_string(expected) + " values, got " +
                   std::to_string(toks.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& t : toks) out.push_back(parse_real(t, line));
  return out;
}

}  // namespace

ParsedModel parse_model(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
  }
  while (!lines.empty() && tokens(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) fail(1, "empty file");

  ParsedModel model;
  const auto header = tokens(lines[0]);
  if (header.empty() || header[0] != "bank") fail(1, "expected 'bank' header");
  const auto kv = key_values(header, 1);
  BankConfig& c = model.bank.config;
  c.num_filters = parse_count(require(kv, "num_filters", 1), 1);
  c.f_min = parse_real(require(kv, "f_min", 1), 1);
  c.f_max = parse_real(require(kv, "f_max", 1), 1);
  c.kernel_len = parse_count(require(kv, "kernel_len", 1), 1);
  c.stride = parse_count(require(kv, "stride", 1), 1);
  c.sample_rate = parse_real(require(kv, "sample_rate", 1), 1);
  try {
    validate(c);
  } catch (const ConfigError& e) {
    fail(1, e.what());
  }

  std::size_t at = 1;
  for (std::size_t k = 0; k < c.num_filters; ++k, ++at) {
    if (at >= lines.size()) fail(at + 1, "missing filter line " + std::to_string(k));
    const auto v = reals(lines[at], 5, at + 1);
    model.bank.params.push_back(FilterParams{v[0], v[1], v[2], v[3], v[4]});
  }
  if (at == lines.size()) return model;

  const std::size_t head_line = at + 1;
  const auto head_toks = tokens(lines[at++]);
  if (head_toks.empty() || head_toks[0] != "[head]") {
    fail(head_line, "expected [head] section or end of file");
  }
  const auto hkv = key_values(head_toks, head_line);
  const std::size_t classes = parse_count(require(hkv, "classes", head_line), head_line);
  if (classes == 0) fail(head_line, "head needs at least one class");
  const std::string& compress = require(hkv, "compress", head_line);
  if (compress != "log" && compress != "none") {
    fail(head_line, "compress must be 'log' or 'none'");
  }
  model.frontend.log_compress = compress == "log";
  model.frontend.epsilon = parse_real(require(hkv, "epsilon", head_line), head_line);

  HeadParams head = HeadParams::zeros(classes, c.num_filters);
  for (std::size_t cls = 0; cls < classes; ++cls, ++at) {
    if (at >= lines.size()) fail(at + 1, "missing head line for class " + std::to_string(cls));
    const auto v = reals(lines[at], c.num_filters + 1, at + 1);
    head.biases[cls] = v[0];
    for (std::size_t k = 0; k < c.num_filters; ++k) head.weights(cls, k) = v[k + 1];
  }
  if (at != lines.size()) fail(at + 1, "unexpected trailing content");
  model.head = std::move(head);
  return model;
}

void save_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string load_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace learnspec
