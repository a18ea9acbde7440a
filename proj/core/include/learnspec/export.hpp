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
#include <string>
#include <vector>

#include "learnspec/matrix.hpp"
#include "learnspec/trainer.hpp"

namespace learnspec {

// Rows = frames, columns = features, 9 significant digits, no header.
std::string matrix_csv(const Matrix& values);

// Binary PGM (P5). Features run bottom-to-top (low index at the bottom),
// frames left-to-right. Min-max normalized; a constant matrix maps to 0.
std::vector<std::uint8_t> matrix_pgm(const Matrix& values);

// epoch,stage,mean_loss,accuracy,macc,center_0,...,center_{Nf-1}
std::string training_log_csv(const std::vector<EpochLog>& log);

}  // namespace learnspec
