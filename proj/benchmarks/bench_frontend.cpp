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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "learnspec/baseline_mfcc.hpp"
#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"
#include "learnspec/head.hpp"
#include "learnspec/paramgrad.hpp"

using namespace learnspec;

namespace {

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d(0.0, 0.3);
  std::vector<double> x(n);
  for (double& v : x) v = d(rng);
  return x;
}

FilterBank bank(std::size_t filters, std::size_t kernel_len, std::size_t stride) {
  return init_bank(BankConfig{filters, 0.0, 400.0, kernel_len, stride, 1000.0});
}

void BM_Forward(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const FilterBank b = bank(16, 100, 50);
  for (auto _ : state) benchmark::DoNotOptimize(forward(x, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SynthKernels(benchmark::State& state) {
  const FilterBank b = bank(static_cast<std::size_t>(state.range(0)), 100, 50);
  for (auto _ : state) benchmark::DoNotOptimize(synth_kernels(b));
}
BENCHMARK(BM_SynthKernels)->Arg(16)->Arg(46);

void BM_Backward(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const FilterBank b = bank(16, 100, 50);
  const Spectrogram z = forward(x, b);
  HeadParams head = HeadParams::zeros(2, 16);
  for (std::size_t k = 0; k < 16; ++k) {
    head.weights(0, k) = 0.01 * static_cast<double>(k + 1);
    head.weights(1, k) = -0.02;
  }
  const HeadBackward hb = head_backward(z, head, 1);
  for (auto _ : state) {
    const auto taps = backward_to_kernels(x, hb.frames, b);
    for (std::size_t k = 0; k < b.size(); ++k) {
      benchmark::DoNotOptimize(param_grads(b.params[k], taps[k], 1000.0, k));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backward)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Mfcc(benchmark::State& state) {
  const auto x = noise(static_cast<std::size_t>(state.range(0)));
  const StftConfig cfg{400, 160, Window::Hamming};
  const MelBank mb = mel_bank(40, 400, 16000.0, 0.0, 8000.0);
  for (auto _ : state) benchmark::DoNotOptimize(mfcc(x, cfg, mb, 13));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mfcc)->Arg(16000)->Arg(160000);

}  // namespace

BENCHMARK_MAIN();
