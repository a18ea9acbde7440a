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

#include "learnspec/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "learnspec/model_io.hpp"

namespace learnspec {

std::string matrix_csv(const Matrix& values) {
  std::string out;
  char buf[32];
  for (std::size_t r = 0; r < values.rows(); ++r) {
    auto row = values.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", row[c]);
      if (c) out += ',';
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> matrix_pgm(const Matrix& values) {
  const std::size_t width = values.rows();   // frames
  const std::size_t height = values.cols();  // features
  const std::string header = "P5\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (values.empty()) return out;

  const auto data = values.data();
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end());
  const double range = *hi - *lo;
  out.reserve(out.size() + width * height);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t feature = height - 1 - y;
    for (std::size_t x = 0; x < width; ++x) {
      const double v = range > 0.0 ? (values(x, feature) - *lo) / range : 0.0;
      out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
    }
  }
  return out;
}

std::string training_log_csv(const std::vector<EpochLog>& log) {
  std::string out = "epoch,stage,mean_loss,accuracy,macc";
  const std::size_t n_centers = log.empty() ? 0 : log.front().centers.size();
  for (std::size_t k = 0; k < n_centers; ++k) out += ",center_" + std::to_string(k);
  out += '\n';
  for (const auto& e : log) {
    out += std::to_string(e.epoch) + "," + stage_name(e.stage) + "," +
           format_real(e.mean_loss) + "," + format_real(e.accuracy) + "," +
           format_real(e.macc);
    for (double f : e.centers) out += "," + format_real(f);
    out += '\n';
  }
  return out;
}

}  // namespace learnspec
