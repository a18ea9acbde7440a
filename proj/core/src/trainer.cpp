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

#include "learnspec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <thread>

#include "learnspec/error.hpp"
#include "learnspec/metrics.hpp"

namespace learnspec {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

// Shuffled cycle over a fixed index set; reshuffles when exhausted.
class Cycle {
 public:
  explicit Cycle(std::vector<std::size_t> items) : items_(std::move(items)) {}

  std::size_t next(std::mt19937_64& rng) {
    if (cursor_ == items_.size()) cursor_ = 0;
    if (cursor_ == 0) std::shuffle(items_.begin(), items_.end(), rng);
    return items_[cursor_++];
  }

 private:
  std::vector<std::size_t> items_;
  std::size_t cursor_ = 0;
};

// Per-class sampler; rotates across groups when any are present.
class ClassSampler {
 public:
  explicit ClassSampler(std::vector<Cycle> groups) : groups_(std::move(groups)) {}

  std::size_t next(std::mt19937_64& rng) {
    Cycle& cycle = groups_[turn_];
    turn_ = (turn_ + 1) % groups_.size();
    return cycle.next(rng);
  }

 private:
  std::vector<Cycle> groups_;
  std::size_t turn_ = 0;
};

struct ItemGradient {
  double loss = 0.0;
  HeadGrads head;
  std::vector<ParamGrads> filters;
};

ItemGradient item_gradient(const Model& model,
                           const std::vector<std::vector<double>>& kernels,
                           const Example& example, bool with_frontend) {
  const FilterBank& bank = model.bank;
  Spectrogram raw = forward_with_kernels(example.samples, kernels, bank.config.stride);
  const bool compressed = model.frontend.log_compress;
  const Spectrogram features =
      compressed ? log_compress(raw, model.frontend.epsilon) : raw;

  HeadBackward hb = head_backward(features, model.head, example.label);
  ItemGradient out;
  out.loss = hb.loss;
  out.head = std::move(hb.head);
  if (!with_frontend) return out;

  const FrameGrad frame_grad =
      compressed ? log_compress_backward(raw, hb.frames, model.frontend.epsilon)
                 : hb.frames;
  const auto tap_grads = backward_to_kernels(example.samples, frame_grad, bank);
  out.filters.reserve(bank.params.size());
  for (std::size_t k = 0; k < bank.params.size(); ++k) {
    out.filters.push_back(
        param_grads(bank.params[k], tap_grads[k], bank.config.sample_rate, k));
  }
  return out;
}

double frontend_rate(const TrainConfig& config, Param p) {
  const FrontendRates& r = config.frontend_rates;
  std::optional<double> rate;
  switch (p) {
    case Param::Amplitude: rate = r.amplitude; break;
    case Param::Order: rate = r.order; break;
    case Param::Bandwidth: rate = r.bandwidth; break;
    case Param::CenterFreq: rate = r.center_freq; break;
  }
  return rate.value_or(config.learning_rate);
}

}  // namespace

const char* stage_name(Stage stage) {
  return stage == Stage::FrozenFrontend ? "frozen" : "learnable";
}

void validate(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (config.batch_size == 0) throw ConfigError("batch_size must be >= 1");
  if (!(config.adam.beta1 > 0.0 && config.adam.beta1 < 1.0)) {
    throw ConfigError("beta1 must lie in (0, 1)");
  }
  if (!(config.adam.beta2 > 0.0 && config.adam.beta2 < 1.0)) {
    throw ConfigError("beta2 must lie in (0, 1)");
  }
  if (!(config.adam.eps > 0.0)) throw ConfigError("Adam eps must be > 0");
  for (Param p : kLearnableParams) {
    if (!(frontend_rate(config, p) > 0.0)) {
      throw ConfigError("front-end learning rate for " +
                        std::string(param_name(p)) + " must be > 0");
    }
  }
  if (config.frontend.log_compress && !(config.frontend.epsilon > 0.0)) {
    throw ConfigError("log-compression epsilon must be > 0");
  }
}

TrainConfig pcg_profile() {
  TrainConfig c;
  c.learning_rate = 0.001;
  c.batch_size = 996;
  return c;
}

TrainConfig scene_profile() {
  TrainConfig c;
  c.learning_rate = 0.005;
  c.batch_size = 64;
  return c;
}

TrainConfig synth_profile() {
  TrainConfig c;
  c.learning_rate = 0.05;
  c.batch_size = 32;
  c.epochs = 100;
  c.frontend_rates.center_freq = 1.0;
  c.frontend_rates.bandwidth = 0.1;
  c.frontend.log_compress = true;
  c.frontend.epsilon = 1e-16;
  return c;
}

double adam_step(double param, double grad, AdamSlot& slot, std::uint64_t step,
                 double learning_rate, const AdamHyper& hyper) {
  if (!std::isfinite(grad)) {
    throw NumericError("Adam: non-finite gradient " + std::to_string(grad) +
                       " at step " + std::to_string(step));
  }
  if (step == 0) throw ContractViolation("Adam: step counter is 1-based");
  slot.m = hyper.beta1 * slot.m + (1.0 - hyper.beta1) * grad;
  slot.v = hyper.beta2 * slot.v + (1.0 - hyper.beta2) * grad * grad;
  const double k = static_cast<double>(step);
  const double m_hat = slot.m / (1.0 - std::pow(hyper.beta1, k));
  const double v_hat = slot.v / (1.0 - std::pow(hyper.beta2, k));
  return param - learning_rate * m_hat / (std::sqrt(v_hat) + hyper.eps);
}

std::size_t count_classes(const Dataset& data) {
  std::size_t top = 0;
  for (const auto& ex : data) top = std::max(top, ex.label + 1);
  return top;
}

std::size_t batches_per_epoch(std::span<const std::size_t> labels,
                              std::size_t num_classes, std::size_t batch_size) {
  if (batch_size == 0) throw ConfigError("batch_size must be >= 1");
  std::vector<std::size_t> counts(num_classes, 0);
  for (std::size_t y : labels) {
    if (y >= num_classes) throw ContractViolation("label out of range");
    ++counts[y];
  }
  const std::size_t largest =
      counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  return (largest * num_classes + batch_size - 1) / batch_size;
}

std::vector<std::vector<std::size_t>> balanced_batches(
    std::span<const std::size_t> labels, std::size_t num_classes,
    std::size_t batch_size, std::uint64_t seed,
    std::span<const std::size_t> groups) {
  if (num_classes == 0) throw ConfigError("no classes");
  if (!groups.empty() && groups.size() != labels.size()) {
    throw ContractViolation("group labels must match sample count");
  }
  // class -> group -> members; std::map keeps group order deterministic.
  std::vector<std::map<std::size_t, std::vector<std::size_t>>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw ContractViolation("label " + std::to_string(labels[i]) +
                              " out of range");
    }
    members[labels[i]][groups.empty() ? 0 : groups[i]].push_back(i);
  }
  std::vector<ClassSampler> samplers;
  samplers.reserve(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (members[c].empty()) {
      throw ConfigError("class " + std::to_string(c) + " has no samples");
    }
    std::vector<Cycle> cycles;
    for (auto& [group, idx] : members[c]) cycles.emplace_back(std::move(idx));
    samplers.emplace_back(std::move(cycles));
  }

  auto rng = make_rng(seed, 0);
  const std::size_t n_batches = batches_per_epoch(labels, num_classes, batch_size);
  const std::size_t base = batch_size / num_classes;
  const std::size_t extra = batch_size % num_classes;
  std::size_t offset = 0;

  std::vector<std::vector<std::size_t>> batches(n_batches);
  for (auto& batch : batches) {
    batch.reserve(batch_size);
    for (std::size_t c = 0; c < num_classes; ++c) {
      const std::size_t rel = (c + num_classes - offset) % num_classes;
      const std::size_t take = base + (rel < extra ? 1 : 0);
      for (std::size_t j = 0; j < take; ++j) batch.push_back(samplers[c].next(rng));
    }
    offset = (offset + extra) % num_classes;
  }
  return batches;
}

Evaluation evaluate(const Model& model, const Dataset& data) {
  Evaluation out;
  if (data.empty()) return out;
  const auto kernels = synth_kernels(model.bank);
  double total = 0.0;
  for (const auto& ex : data) {
    Spectrogram raw =
        forward_with_kernels(ex.samples, kernels, model.bank.config.stride);
    const Spectrogram features =
        model.frontend.log_compress ? log_compress(raw, model.frontend.epsilon) : raw;
    if (ex.label >= model.head.num_classes()) {
      throw ContractViolation("evaluate: label " + std::to_string(ex.label) +
                              " unknown to the model");
    }
    LossReport r = head_loss(features, model.head, ex.label);
    total += r.loss;
    out.predictions.push_back(r.predicted_class);
    out.truths.push_back(ex.label);
  }
  out.mean_loss = total / static_cast<double>(data.size());
  return out;
}

BatchGradient batch_gradient(const Model& model, const Dataset& data,
                             std::span<const std::size_t> indices,
                             bool with_frontend, std::size_t workers) {
  if (indices.empty()) throw ContractViolation("batch_gradient: empty batch");
  const auto kernels = synth_kernels(model.bank);
  std::vector<ItemGradient> items(indices.size());

  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      items[j] = item_gradient(model, kernels, data.at(indices[j]), with_frontend);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, indices.size());
  if (workers == 1) {
    run(0, indices.size());
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (indices.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(indices.size(), w * chunk);
      const std::size_t end = std::min(indices.size(), begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  // Fixed ascending reduction order.
  BatchGradient out;
  out.head = HeadGrads{Matrix(model.head.num_classes(), model.head.num_features()),
                       std::vector<double>(model.head.num_classes(), 0.0)};
  if (with_frontend) out.filters.assign(model.bank.params.size(), ParamGrads{});
  for (const auto& item : items) {
    out.loss += item.loss;
    auto dw = out.head.d_weights.data();
    auto src = item.head.d_weights.data();
    for (std::size_t j = 0; j < dw.size(); ++j) dw[j] += src[j];
    for (std::size_t c = 0; c < out.head.d_biases.size(); ++c) {
      out.head.d_biases[c] += item.head.d_biases[c];
    }
    for (std::size_t k = 0; k < out.filters.size(); ++k) out.filters[k] += item.filters[k];
  }
  const double scale = 1.0 / static_cast<double>(items.size());
  out.loss *= scale;
  for (double& v : out.head.d_weights.data()) v *= scale;
  for (double& v : out.head.d_biases) v *= scale;
  for (auto& g : out.filters) {
    g.d_amplitude *= scale;
    g.d_order *= scale;
    g.d_bandwidth *= scale;
    g.d_center_freq *= scale;
  }
  return out;
}

TrainResult train(const Dataset& data, Model model, const TrainConfig& config,
                  std::size_t first_epoch) {
  validate(config);
  if (data.empty()) throw ConfigError("training dataset is empty");
  validate(model.bank.config);
  model.frontend = config.frontend;
  const std::size_t num_classes = model.head.num_classes();
  if (model.head.num_features() != model.bank.params.size()) {
    throw ContractViolation("head feature count differs from filter count");
  }

  std::vector<std::size_t> labels;
  std::vector<std::size_t> groups;
  const bool grouped = std::all_of(data.begin(), data.end(),
                                   [](const Example& e) { return e.group.has_value(); });
  for (const auto& ex : data) {
    labels.push_back(ex.label);
    if (grouped) groups.push_back(*ex.group);
  }

  const bool learnable = config.stage == Stage::FullyLearnable;
  const std::size_t n_filters = model.bank.params.size();
  AdamState head_state(model.head.weights.size() + model.head.biases.size());
  AdamState bank_state(learnable ? n_filters * kLearnableParams.size() : 0);

  TrainResult result;
  for (std::size_t e = 0; e < config.epochs; ++e) {
    const std::size_t epoch = first_epoch + e;
    const auto batches = balanced_batches(labels, num_classes, config.batch_size,
                                          config.seed * 1000003u + epoch, groups);
    for (const auto& batch : batches) {
      const BatchGradient grad =
          batch_gradient(model, data, batch, learnable, config.workers);

      ++head_state.step;
      auto w = model.head.weights.data();
      auto dw = grad.head.d_weights.data();
      std::size_t slot = 0;
      for (std::size_t j = 0; j < w.size(); ++j, ++slot) {
        w[j] = adam_step(w[j], dw[j], head_state.slots[slot], head_state.step,
                         config.learning_rate, config.adam);
      }
      for (std::size_t c = 0; c < model.head.biases.size(); ++c, ++slot) {
        model.head.biases[c] =
            adam_step(model.head.biases[c], grad.head.d_biases[c],
                      head_state.slots[slot], head_state.step,
                      config.learning_rate, config.adam);
      }

      if (!learnable) continue;
      ++bank_state.step;
      for (std::size_t k = 0; k < n_filters; ++k) {
        FilterParams& p = model.bank.params[k];
        for (std::size_t q = 0; q < kLearnableParams.size(); ++q) {
          const Param which = kLearnableParams[q];
          const double updated = adam_step(
              get_param(p, which), grad.filters[k].get(which),
              bank_state.slots[k * kLearnableParams.size() + q], bank_state.step,
              frontend_rate(config, which), config.adam);
          set_param(p, which, updated);
        }
        p = project(p, model.bank.config);
      }
    }

    const Evaluation eval = evaluate(model, data);
    const MetricReport report =
        metric_report(confusion(eval.predictions, eval.truths, num_classes));
    result.log.push_back(EpochLog{epoch, config.stage, eval.mean_loss,
                                  report.accuracy, report.macc,
                                  center_frequencies(model.bank)});
  }
  result.model = std::move(model);
  return result;
}

TrainResult train_two_stage(const Dataset& data, Model model, TrainConfig config,
                            std::size_t frozen_epochs, std::size_t learnable_epochs) {
  config.stage = Stage::FrozenFrontend;
  config.epochs = frozen_epochs;
  TrainResult first = train(data, std::move(model), config, 0);

  config.stage = Stage::FullyLearnable;
  config.epochs = learnable_epochs;
  config.seed += 1;
  TrainResult second = train(data, std::move(first.model), config, frozen_epochs);

  first.log.insert(first.log.end(), second.log.begin(), second.log.end());
  second.log = std::move(first.log);
  return second;
}

HeadParams init_head(std::size_t num_classes, std::size_t num_features,
                     std::uint64_t seed, double scale) {
  HeadParams head = HeadParams::zeros(num_classes, num_features);
  auto rng = make_rng(seed, 1);
  std::normal_distribution<double> dist(0.0, scale);
  for (double& w : head.weights.data()) w = dist(rng);
  return head;
}

}  // namespace learnspec
