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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "doctest.h"
#include "learnspec/dataset.hpp"
#include "learnspec/error.hpp"
#include "learnspec/model_io.hpp"
#include "learnspec/trainer.hpp"

using namespace learnspec;
using doctest::Approx;

namespace {

Dataset two_tone_data(std::uint64_t seed, std::size_t per_class = 12) {
  SynthSpec spec;
  spec.class_tones = {{150.0}, {320.0}};
  spec.noise_level = 0.3;
  spec.clip_len = 400;
  spec.clips_per_class = per_class;
  spec.sample_rate = 1000.0;
  spec.seed = seed;
  return to_dataset(gen_synth(spec));
}

Model small_model(std::uint64_t seed) {
  Model m;
  m.bank = bank_with_centers(BankConfig{3, 0.0, 500.0, 64, 7, 1000.0},
                             {80.0, 230.0, 420.0});
  m.head = init_head(2, 3, seed);
  m.frontend = FrontendOptions{true, 1e-16};
  return m;
}

TrainConfig small_config() {
  TrainConfig c = synth_profile();
  c.batch_size = 8;
  c.epochs = 2;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("adam_step") {
  const AdamHyper hyper;
  SUBCASE("zero gradient on the first step") {
    AdamSlot slot;
    CHECK(adam_step(1.5, 0.0, slot, 1, 0.01, hyper) == 1.5);
  }
  SUBCASE("first step with unit gradient moves by the learning rate") {
    AdamSlot slot;
    const double next = adam_step(0.0, 1.0, slot, 1, 0.001, hyper);
    CHECK(next == Approx(-0.001).epsilon(1e-7));
  }
  SUBCASE("constant gradient approaches lr * sign(g)") {
    for (double g : {3.0, -0.02}) {
      AdamSlot slot;
      double p = 0.0;
      double last_update = 0.0;
      for (std::uint64_t t = 1; t <= 10000; ++t) {
        const double next = adam_step(p, g, slot, t, 0.01, hyper);
        last_update = next - p;
        p = next;
      }
      CHECK(std::abs(std::abs(last_update) - 0.01) <= 0.01 * 0.01);
      CHECK((last_update < 0) == (g > 0));
    }
  }
  SUBCASE("non-finite gradient") {
    AdamSlot slot;
    CHECK_THROWS_AS(adam_step(0.0, std::numeric_limits<double>::quiet_NaN(), slot, 1, 0.1, hyper),
                    NumericError);
  }
}

TEST_CASE("TrainConfig validation") {
  TrainConfig c;
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = TrainConfig{};
  c.batch_size = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = TrainConfig{};
  c.adam.beta1 = 1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = TrainConfig{};
  c.adam.beta2 = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(pcg_profile().learning_rate == 0.001);
  CHECK(pcg_profile().batch_size == 996);
  CHECK(scene_profile().learning_rate == 0.005);
  CHECK(scene_profile().batch_size == 64);
  CHECK(synth_profile().learning_rate == 0.05);
  CHECK(synth_profile().batch_size == 32);
}

TEST_CASE("balanced_batches") {
  SUBCASE("two classes, batch of ten") {
    std::vector<std::size_t> labels(30, 0);
    std::fill(labels.begin() + 20, labels.end(), 1);
    const auto batches = balanced_batches(labels, 2, 10, 1);
    CHECK(batches.size() == batches_per_epoch(labels, 2, 10));
    for (const auto& b : batches) {
      REQUIRE(b.size() == 10);
      CHECK(std::count_if(b.begin(), b.end(), [&](std::size_t i) { return labels[i] == 0; }) == 5);
    }
  }
  SUBCASE("fifteen classes, batch of 64") {
    std::vector<std::size_t> labels;
    for (std::size_t c = 0; c < 15; ++c) labels.insert(labels.end(), 5 + c, c);
    const auto batches = balanced_batches(labels, 15, 64, 2);
    std::vector<std::size_t> totals(15, 0);
    for (const auto& b : batches) {
      REQUIRE(b.size() == 64);
      std::vector<std::size_t> counts(15, 0);
      for (std::size_t i : b) ++counts[labels[i]];
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      CHECK(*hi - *lo <= 1);
      for (std::size_t c = 0; c < 15; ++c) totals[c] += counts[c];
    }
    // The extra sample rotates, so totals stay within one batch's worth.
    const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
    CHECK(*hi - *lo <= 1);
  }
  SUBCASE("heavy imbalance repeats the minority class") {
    std::vector<std::size_t> labels(2488, 0);
    labels.insert(labels.end(), 665, 1);
    const auto batches = balanced_batches(labels, 2, 996, 3);
    CHECK(batches.size() == 5);  // ceil(2488 * 2 / 996)
    std::map<std::size_t, std::size_t> minority_hits;
    std::size_t majority_draws = 0;
    for (const auto& b : batches) {
      std::size_t minority = 0;
      for (std::size_t i : b) {
        if (labels[i] == 1) {
          ++minority;
          ++minority_hits[i];
        } else {
          ++majority_draws;
        }
      }
      CHECK(minority == 498);
    }
    CHECK(minority_hits.size() == 665);  // every minority clip used
    const auto most = std::max_element(minority_hits.begin(), minority_hits.end(),
                                       [](auto& a, auto& b) { return a.second < b.second; });
    CHECK(most->second >= 3);
    CHECK(majority_draws == 2490);
  }
  SUBCASE("deterministic under the seed") {
    std::vector<std::size_t> labels{0, 1, 0, 1, 2, 2, 0};
    CHECK(balanced_batches(labels, 3, 4, 17) == balanced_batches(labels, 3, 4, 17));
    CHECK(balanced_batches(labels, 3, 4, 17) != balanced_batches(labels, 3, 4, 18));
  }
  SUBCASE("group rotation inside a class") {
    std::vector<std::size_t> labels(40, 0);
    std::vector<std::size_t> groups(40, 0);
    std::fill(groups.begin() + 36, groups.end(), 1);  // 36 in group 0, 4 in group 1
    const auto batches = balanced_batches(labels, 1, 10, 4, groups);
    std::size_t g1 = 0;
    for (const auto& b : batches) {
      for (std::size_t i : b) g1 += groups[i];
    }
    CHECK(g1 * 2 == batches.size() * 10);
  }
  SUBCASE("empty class") {
    std::vector<std::size_t> labels{0, 0, 2};
    CHECK_THROWS_AS(balanced_batches(labels, 3, 4, 0), ConfigError);
  }
}

TEST_CASE("train edge cases") {
  const Dataset data = two_tone_data(1);
  const Model start = small_model(1);
  SUBCASE("zero epochs leaves parameters unchanged") {
    TrainConfig c = small_config();
    c.epochs = 0;
    c.stage = Stage::FullyLearnable;
    const TrainResult r = train(data, start, c);
    CHECK(r.model.bank == start.bank);
    CHECK(r.model.head == start.head);
    CHECK(r.log.empty());
  }
  SUBCASE("empty dataset") {
    CHECK_THROWS_AS(train(Dataset{}, start, small_config()), ConfigError);
  }
  SUBCASE("frozen stage leaves the bank byte-identical") {
    TrainConfig c = small_config();
    c.stage = Stage::FrozenFrontend;
    const TrainResult r = train(data, start, c);
    CHECK(format_bank(r.model.bank) == format_bank(start.bank));
    CHECK(r.model.bank == start.bank);
    CHECK_FALSE(r.model.head == start.head);
  }
}

TEST_CASE("learnable stage keeps every filter feasible") {
  const Dataset data = two_tone_data(2);
  Model start = small_model(2);
  TrainConfig c = small_config();
  c.stage = Stage::FullyLearnable;
  c.epochs = 1;
  // Aggressive rates push parameters at the walls.
  c.frontend_rates.center_freq = 200.0;
  c.frontend_rates.bandwidth = 200.0;
  c.frontend_rates.order = 5.0;
  for (int round = 0; round < 4; ++round) {
    start = train(data, start, c, static_cast<std::size_t>(round)).model;
    for (const auto& p : start.bank.params) {
      CHECK(p.center_freq >= 0.0);
      CHECK(p.center_freq <= 500.0);
      CHECK(p.bandwidth >= 1.0);
      CHECK(p.order >= 1.0);
      CHECK(p.order <= 10.0);
      CHECK(p.phase == 0.0);
    }
  }
}

TEST_CASE("training is deterministic and independent of worker count") {
  const Dataset data = two_tone_data(3);
  TrainConfig c = small_config();
  const auto run = [&](std::size_t workers) {
    TrainConfig cc = c;
    cc.workers = workers;
    const TrainResult r = train_two_stage(data, small_model(3), cc, 1, 2);
    return format_model(r.model);
  };
  const std::string a = run(1);
  CHECK(a == run(1));
  CHECK(a == run(3));
}

TEST_CASE("loss falls over the first 50 Adam steps") {
  const Dataset data = two_tone_data(4, 20);
  const Model m = small_model(4);
  std::vector<std::size_t> labels;
  for (const auto& ex : data) labels.push_back(ex.label);
  REQUIRE(batches_per_epoch(labels, 2, 8) == 5);

  TrainConfig c = small_config();
  c.stage = Stage::FullyLearnable;
  c.batch_size = 8;
  c.epochs = 10;  // 50 steps
  const double initial = evaluate(m, data).mean_loss;
  const TrainResult r = train(data, m, c);
  CHECK(r.log.back().mean_loss < initial);
}

TEST_CASE("second stage does not end above the first") {
  const Dataset data = two_tone_data(5, 16);
  const TrainResult r = train_two_stage(data, small_model(5), small_config(), 4, 4);
  REQUIRE(r.log.size() == 8);
  CHECK(r.log[3].stage == Stage::FrozenFrontend);
  CHECK(r.log[7].stage == Stage::FullyLearnable);
  CHECK(r.log[7].epoch == 7);
  CHECK(r.log[7].mean_loss <= r.log[3].mean_loss);
}
