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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"
#include "learnspec/head.hpp"
#include "learnspec/paramgrad.hpp"

namespace learnspec {

enum class Stage { FrozenFrontend, FullyLearnable };

const char* stage_name(Stage stage);

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Per-kind learning rates for the filter parameters. Unset entries fall back
// to TrainConfig::learning_rate. Parameters measured in Hz typically need a
// far larger step than the head weights.
struct FrontendRates {
  std::optional<double> amplitude;
  std::optional<double> order;
  std::optional<double> bandwidth;
  std::optional<double> center_freq;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t batch_size = 32;
  std::size_t epochs = 10;
  Stage stage = Stage::FrozenFrontend;
  std::uint64_t seed = 0;
  AdamHyper adam;
  FrontendRates frontend_rates;
  FrontendOptions frontend;
  // Per-item gradients are reduced in a fixed order, so the result does not
  // depend on this value.
  std::size_t workers = 1;
};

// Throws ConfigError on learning_rate <= 0, batch_size == 0 or betas outside
// (0, 1).
void validate(const TrainConfig& config);

// Learning-rate / batch-size presets.
TrainConfig pcg_profile();    // lr 0.001, batch 996
TrainConfig scene_profile();  // lr 0.005, batch 64
TrainConfig synth_profile();  // lr 0.05, batch 32, log features

struct AdamSlot {
  double m = 0.0;
  double v = 0.0;
};

// One bias-corrected Adam update; step is 1-based. Throws NumericError on a
// non-finite gradient.
double adam_step(double param, double grad, AdamSlot& slot, std::uint64_t step,
                 double learning_rate, const AdamHyper& hyper);

// Moments for every learnable scalar plus the shared step counter.
struct AdamState {
  std::vector<AdamSlot> slots;
  std::uint64_t step = 0;

  explicit AdamState(std::size_t n_params = 0) : slots(n_params) {}
};

struct Example {
  std::vector<double> samples;
  std::size_t label = 0;
  std::optional<std::size_t> group;
};

using Dataset = std::vector<Example>;

std::size_t count_classes(const Dataset& data);

// ceil(max_class_count * num_classes / batch_size).
std::size_t batches_per_epoch(std::span<const std::size_t> labels,
                              std::size_t num_classes, std::size_t batch_size);

// One epoch of class-balanced mini-batches. Per-class counts in each batch
// differ by at most one; the classes receiving the extra sample rotate from
// batch to batch. Each class is drawn from a reshuffled cycle of its members,
// so minority classes repeat within an epoch. When groups are supplied,
// draws inside a class also rotate across groups. Throws ConfigError if a
// class in [0, num_classes) has no samples.
std::vector<std::vector<std::size_t>> balanced_batches(
    std::span<const std::size_t> labels, std::size_t num_classes,
    std::size_t batch_size, std::uint64_t seed,
    std::span<const std::size_t> groups = {});

struct EpochLog {
  std::size_t epoch = 0;
  Stage stage = Stage::FrozenFrontend;
  double mean_loss = 0.0;
  double accuracy = 0.0;
  double macc = 0.0;
  std::vector<double> centers;
};

struct Model {
  FilterBank bank;
  HeadParams head;
  FrontendOptions frontend;
};

struct Evaluation {
  double mean_loss = 0.0;
  std::vector<std::size_t> predictions;
  std::vector<std::size_t> truths;
};

Evaluation evaluate(const Model& model, const Dataset& data);

struct BatchGradient {
  double loss = 0.0;
  HeadGrads head;
  std::vector<ParamGrads> filters;
};

// Mean loss and mean gradients over the listed examples.
BatchGradient batch_gradient(const Model& model, const Dataset& data,
                             std::span<const std::size_t> indices,
                             bool with_frontend, std::size_t workers = 1);

struct TrainResult {
  Model model;
  std::vector<EpochLog> log;
};

// Adam over the head (and, in FullyLearnable, the four filter parameters of
// every filter, each projected back into the feasible region after the step).
// Epoch numbering continues from first_epoch. The per-epoch log reports
// loss/accuracy/MACC over the full training set after the epoch.
TrainResult train(const Dataset& data, Model model, const TrainConfig& config,
                  std::size_t first_epoch = 0);

// Frozen stage followed by the learnable stage, each with fresh optimizer
// state. The learnable stage uses seed + 1.
TrainResult train_two_stage(const Dataset& data, Model model,
                            TrainConfig config, std::size_t frozen_epochs,
                            std::size_t learnable_epochs);

// Small random head weights for a fresh model; deterministic under seed.
HeadParams init_head(std::size_t num_classes, std::size_t num_features,
                     std::uint64_t seed, double scale = 0.01);

}  // namespace learnspec
