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

#include <filesystem>
#include <optional>
#include <string>

#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"
#include "learnspec/head.hpp"
#include "learnspec/trainer.hpp"

// Plain-text model format. Reals are printed with 17 significant digits so a
// reload is bit-exact.
//
//   bank num_filters=4 f_min=0 f_max=400 kernel_len=100 stride=50 sample_rate=1000
//   <a> <n> <b> <f> <sigma>            one line per filter
//   [head] classes=2 compress=log epsilon=9.9999999999999995e-07
//   <bias> <w_0> ... <w_{Nf-1}>        one line per class
//
// The [head] section is optional; a bare bank file stops after the filters.

namespace learnspec {

std::string format_bank(const FilterBank& bank);
std::string format_model(const Model& model);

struct ParsedModel {
  FilterBank bank;
  std::optional<HeadParams> head;
  FrontendOptions frontend;
};

// Throws ParseError with the 1-based line number.
ParsedModel parse_model(const std::string& text);

void save_text(const std::filesystem::path& path, const std::string& text);
std::string load_text(const std::filesystem::path& path);

// %.17g
std::string format_real(double value);

}  // namespace learnspec
