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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "learnspec/baseline_mfcc.hpp"
#include "learnspec/dataset.hpp"
#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"
#include "learnspec/head.hpp"
#include "learnspec/metrics.hpp"
#include "learnspec/model_io.hpp"
#include "learnspec/paramgrad.hpp"
#include "learnspec/trainer.hpp"
#include "learnspec/wav.hpp"
#include "oracles.hpp"

#ifndef LEARNSPEC_CLI_PATH
#error "LEARNSPEC_CLI_PATH must name the learnspec executable"
#endif

namespace fs = std::filesystem;
using namespace learnspec;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1 ------------------------------------------------------------------------

FilterParams random_filter(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return FilterParams{0.2 + 1.8 * u(rng), 1.0 + 7.0 * u(rng), 10.0 + 190.0 * u(rng),
                      20.0 + 460.0 * u(rng), 6.283 * u(rng)};
}

constexpr double kPipelineStepScale = 0.01;

Outcome gradient_fidelity() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  const double fs = 1000.0;
  double worst_kernel = 0.0;
  std::size_t failures = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t K = std::uniform_int_distribution<std::size_t>(2, 64)(rng);
    const FilterParams p = random_filter(rng);
    const auto c = oracle::random_vector(K, rng);
    const KernelLoss loss = [&](std::span<const double> g) {
      double v = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) v += c[i] * g[i] + 0.5 * g[i] * g[i];
      return v;
    };
    const auto g = synth_kernel(p, K, fs);
    std::vector<double> taps(K);
    for (std::size_t i = 0; i < K; ++i) taps[i] = c[i] + g[i];
    const ParamGrads grads = param_grads(p, taps, fs);
    for (Param which : kLearnableParams) {
      const double fd = fd_oracle(p, which, loss, default_fd_step(p, which), K, fs);
      const double e = oracle::rel_err(grads.get(which), fd);
      worst_kernel = std::max(worst_kernel, e);
      failures += e > 1e-4;
    }
  }

  double worst_pipeline = 0.0;
  for (int trial = 0; trial < 60; ++trial) {
    // Raw features, then log features with a large and a realistic offset.
    const bool compressed = trial % 3 != 0;
    const double epsilon = trial % 3 == 1 ? 1e-2 : 1e-16;
    const std::size_t K = std::uniform_int_distribution<std::size_t>(8, 64)(rng);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, K)(rng);
    const std::size_t N = std::uniform_int_distribution<std::size_t>(K, 1024)(rng);
    const std::size_t F = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    const std::size_t C = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    FilterBank bank{BankConfig{F, 0.0, 500.0, K, s, fs}, {}};
    for (std::size_t k = 0; k < F; ++k) bank.params.push_back(random_filter(rng));
    HeadParams head = HeadParams::zeros(C, F);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& w : head.weights.data()) w = u(rng);
    for (double& b : head.biases) b = u(rng);
    const auto x = oracle::random_vector(N, rng);
    const std::size_t y = std::uniform_int_distribution<std::size_t>(0, C - 1)(rng);
    const FrontendOptions opts{compressed, epsilon};

    const auto loss_of = [&](const FilterBank& b) {
      return head_loss(extract(x, b, opts), head, y).loss;
    };
    const Spectrogram raw = forward(x, bank);
    const HeadBackward hb =
        head_backward(compressed ? log_compress(raw, opts.epsilon) : raw, head, y);
    const FrameGrad fg =
        compressed ? log_compress_backward(raw, hb.frames, opts.epsilon) : hb.frames;
    const auto taps = backward_to_kernels(x, fg, bank);
    for (std::size_t k = 0; k < F; ++k) {
      const ParamGrads grads = param_grads(bank.params[k], taps[k], fs, k);
      for (Param which : kLearnableParams) {
        // Log features bend sharply near zero crossings, so the pipeline
        // difference uses a finer step than the kernel-level oracle.
        const double h = kPipelineStepScale * default_fd_step(bank.params[k], which);
        FilterBank plus = bank, minus = bank;
        set_param(plus.params[k], which, get_param(bank.params[k], which) + h);
        set_param(minus.params[k], which, get_param(bank.params[k], which) - h);
        const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
        const double e = oracle::rel_err(grads.get(which), fd);
        worst_pipeline = std::max(worst_pipeline, e);
        failures += e > 1e-4;
      }
    }
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed <= 60.0,
          fmt("200 kernels worst %.2e, 60 pipelines worst %.2e, %zu over 1e-4, %.1f s",
              worst_kernel, worst_pipeline, failures, elapsed)};
}

// 2 ------------------------------------------------------------------------

Outcome forward_oracle() {
  std::mt19937_64 rng(2002);
  double worst = 0.0;
  std::size_t shape_errors = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t K = std::uniform_int_distribution<std::size_t>(1, 128)(rng);
    const std::size_t N = std::uniform_int_distribution<std::size_t>(K, 1024)(rng);
    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, K)(rng);
    const std::size_t F = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    FilterBank bank{BankConfig{F, 0.0, 500.0, K, s, 1000.0}, {}};
    for (std::size_t k = 0; k < F; ++k) bank.params.push_back(random_filter(rng));
    const auto x = oracle::random_vector(N, rng);
    const Spectrogram z = forward(x, bank);
    const Matrix ref = oracle::naive_correlation(x, synth_kernels(bank), s);
    const std::size_t M = (N - K) / s + 1;
    if (z.values.rows() != M || z.values.cols() != F || output_len(N, K, s) != M) {
      ++shape_errors;
      continue;
    }
    for (std::size_t j = 0; j < ref.size(); ++j) {
      worst = std::max(worst, std::abs(z.values.data()[j] - ref.data()[j]));
    }
  }
  return {worst <= 1e-10 && shape_errors == 0,
          fmt("100 instances, max abs error %.2e, %zu shape mismatches", worst, shape_errors)};
}

// 3 ------------------------------------------------------------------------

Outcome mel_math() {
  double worst = 0.0;
  for (int i = 0; i <= 220500; ++i) {
    const double f = 0.1 * i;
    worst = std::max(worst, std::abs(mel_to_hz(hz_to_mel(f)) - f) / std::max(1.0, f));
  }
  const bool erb_exact = erb_bandwidth(0.0) == 24.7;
  const FilterBank bank = init_bank(BankConfig{4, 0.0, 400.0, 100, 50, 1000.0});
  const long double lo = oracle::hz_to_mel(0.0L);
  const long double step = (oracle::hz_to_mel(400.0L) - lo) / 5.0L;
  double center_err = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const long double ref = oracle::mel_to_hz(lo + static_cast<long double>(k + 1) * step);
    center_err = std::max(center_err, static_cast<double>(
                                          std::abs(bank.params[k].center_freq - ref)));
  }
  return {worst <= 1e-6 && erb_exact && center_err <= 1e-6,
          fmt("roundtrip %.2e, erb(0)=%.15g, centers max error %.2e Hz", worst,
              erb_bandwidth(0.0), center_err)};
}

// 4 ------------------------------------------------------------------------

MetricReport report_from_rates(std::size_t pos, std::size_t tp, std::size_t neg,
                               std::size_t tn) {
  std::vector<std::size_t> pred, truth;
  for (std::size_t i = 0; i < pos; ++i) {
    truth.push_back(1);
    pred.push_back(i < tp ? 1 : 0);
  }
  for (std::size_t i = 0; i < neg; ++i) {
    truth.push_back(0);
    pred.push_back(i < tn ? 0 : 1);
  }
  return metric_report(confusion(pred, truth, 2));
}

Outcome metric_reproduction() {
  const double macc1 = 100.0 * report_from_rates(10000, 9130, 10000, 7329).macc;
  const double macc2 = 100.0 * report_from_rates(10000, 8768, 10000, 8973).macc;
  const double f1 = 100.0 * f1_score(0.7636, 0.9130);
  const bool ok = std::abs(macc1 - 82.30) <= 0.005 && std::abs(macc2 - 88.70) <= 0.005 &&
                  std::abs(f1 - 83.17) <= 0.01;
  return {ok, fmt("MACC %.4f and %.4f, F1 %.4f", macc1, macc2, f1)};
}

// 5 and 6 ------------------------------------------------------------------

const std::vector<double> kTones{150.0, 320.0};
// Every start center is at least 60 Hz from both tones.
const std::vector<double> kMisaligned{88.0, 212.0, 258.0, 382.0};
constexpr std::size_t kFrozenEpochs = 30;
constexpr std::size_t kLearnableEpochs = 100;

Dataset tone_data(std::uint64_t seed, std::size_t per_class) {
  SynthSpec spec;
  spec.class_tones = {{kTones[0]}, {kTones[1]}};
  spec.noise_level = 0.3;
  spec.clip_len = 1000;
  spec.clips_per_class = per_class;
  spec.sample_rate = 1000.0;
  spec.seed = seed;
  return to_dataset(gen_synth(spec));
}

Model misaligned_model(std::uint64_t seed, const FrontendOptions& fo) {
  Model m;
  m.bank = bank_with_centers(BankConfig{4, 0.0, 500.0, 100, 7, 1000.0}, kMisaligned);
  m.head = init_head(2, 4, seed);
  m.frontend = fo;
  return m;
}

double nearest(const FilterBank& bank, double tone) {
  double d = INFINITY;
  for (const auto& p : bank.params) d = std::min(d, std::abs(p.center_freq - tone));
  return d;
}

MetricReport held_out(const Model& m, const Dataset& data) {
  const Evaluation ev = evaluate(m, data);
  return metric_report(confusion(ev.predictions, ev.truths, 2));
}

Outcome learnability() {
  const auto t0 = Clock::now();
  TrainConfig c = synth_profile();
  c.seed = 1;
  const Dataset train_set = tone_data(11, 32);
  const Dataset test_set = tone_data(12, 50);
  const Model start = misaligned_model(c.seed, c.frontend);
  const TrainResult r = train_two_stage(train_set, start, c, kFrozenEpochs, kLearnableEpochs);
  bool ok = true;
  std::string detail;
  for (double tone : kTones) {
    const double before = nearest(start.bank, tone);
    const double after = nearest(r.model.bank, tone);
    ok = ok && after <= 0.8 * before;
    detail += fmt("%g Hz: %.1f -> %.1f Hz; ", tone, before, after);
  }
  const double acc = held_out(r.model, test_set).accuracy;
  const double elapsed = seconds_since(t0);
  ok = ok && acc >= 0.95 && elapsed <= 300.0;
  return {ok, detail + fmt("held-out accuracy %.2f%%, %.1f s", 100.0 * acc, elapsed)};
}

Outcome frozen_vs_learnable() {
  std::size_t wins = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    TrainConfig c = synth_profile();
    c.seed = seed;
    const Dataset train_set = tone_data(100 + seed, 32);
    const Dataset val_set = tone_data(200 + seed, 50);
    const Model start = misaligned_model(seed, c.frontend);

    TrainConfig frozen = c;
    frozen.stage = Stage::FrozenFrontend;
    frozen.epochs = kFrozenEpochs + kLearnableEpochs;
    const double macc_frozen = held_out(train(train_set, start, frozen).model, val_set).macc;
    const double macc_learn =
        held_out(train_two_stage(train_set, start, c, kFrozenEpochs, kLearnableEpochs).model,
                 val_set).macc;
    wins += macc_learn >= macc_frozen;
    detail += fmt("%s%.1f/%.1f", seed == 1 ? "" : " ", 100.0 * macc_frozen, 100.0 * macc_learn);
  }
  return {wins >= 4, fmt("%zu/5 seeds learnable >= frozen (MACC frozen/learnable: ", wins) +
                         detail + ")"};
}

// 7 ------------------------------------------------------------------------

Outcome baseline() {
  std::mt19937_64 rng(7007);
  double stft_err = 0.0, dct_err = 0.0, roundtrip_err = 0.0;
  for (std::size_t L : {2u, 7u, 64u, 100u, 257u, 400u}) {
    const StftConfig cfg{L, std::max<std::size_t>(1, L / 2), Window::Hamming};
    const auto x = oracle::random_vector(3 * L + 5, rng);
    const Matrix p = stft_power(x, cfg);
    const auto w = make_window(Window::Hamming, L);
    for (std::size_t m = 0; m < p.rows(); ++m) {
      std::vector<double> frame(L);
      for (std::size_t i = 0; i < L; ++i) frame[i] = x[m * cfg.hop + i] * w[i];
      const auto ref = oracle::naive_power_spectrum(frame);
      for (std::size_t b = 0; b < ref.size(); ++b) {
        stft_err = std::max(stft_err, std::abs(p(m, b) - ref[b]) / std::max(1.0, ref[b]));
      }
    }
  }
  for (std::size_t n : {1u, 2u, 5u, 13u, 40u, 128u}) {
    const auto x = oracle::random_vector(n, rng);
    const auto y = dct2(x);
    const auto ref = oracle::naive_dct2(x);
    const auto back = idct2(y);
    for (std::size_t i = 0; i < n; ++i) {
      dct_err = std::max(dct_err, std::abs(y[i] - ref[i]));
      roundtrip_err = std::max(roundtrip_err, std::abs(back[i] - x[i]));
    }
  }
  // Constant log-mel frames: only c0 survives the DCT.
  Matrix flat(3, 26, -2.5);
  const Matrix ceps = cepstra(flat, 13);
  double leak = 0.0;
  for (std::size_t m = 0; m < ceps.rows(); ++m) {
    for (std::size_t j = 1; j < ceps.cols(); ++j) leak = std::max(leak, std::abs(ceps(m, j)));
  }
  const bool c0 = std::abs(ceps(0, 0)) > 1.0;
  return {stft_err <= 1e-9 && dct_err <= 1e-9 && roundtrip_err <= 1e-9 && leak <= 1e-9 && c0,
          fmt("STFT %.2e, DCT %.2e, roundtrip %.2e, constant-input leak %.2e", stft_err,
              dct_err, roundtrip_err, leak)};
}

// 8 and 9 ------------------------------------------------------------------

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + LEARNSPEC_CLI_PATH + "\" " + args + " -q";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

Outcome determinism(const fs::path& work) {
  const fs::path data = work / "data";
  const std::string bank = "--filters 4 --fmin 0 --fmax 500 --kernel-len 100 --stride 7 "
                           "--sample-rate 1000 --log-compress --seed 3 --deterministic";
  if (run(bank + " gen-data -o " + q(data) + " --noise 0.3 --clips-per-class 8") != 0) {
    return {false, "gen-data failed"};
  }
  for (const char* out : {"a", "b"}) {
    if (run(bank + " train --manifest " + q(data / "manifest.csv") + " -o " + q(work / out) +
            " --frozen-epochs 3 --learnable-epochs 5 --batch 8") != 0) {
      return {false, "train failed"};
    }
  }
  std::size_t same = 0;
  std::string detail;
  for (const char* f : {"bank.txt", "model.txt", "log.csv"}) {
    const std::string a = slurp(work / "a" / f);
    const bool eq = !a.empty() && a == slurp(work / "b" / f);
    same += eq;
    detail += fmt("%s %s; ", f, eq ? "identical" : "DIFFERENT");
  }
  return {same == 3, detail + "two runs, seed 3"};
}

Outcome cli_contract(const fs::path& work) {
  const fs::path data = work / "clip";
  const std::string common = "--filters 16 --fmin 0 --fmax 400 --kernel-len 100 --stride 50 "
                             "--sample-rate 1000 --deterministic";
  if (run(common + " gen-data -o " + q(data) +
          " --class 150 --clips-per-class 1 --clip-len 1000") != 0) {
    return {false, "gen-data failed"};
  }
  const fs::path csv = work / "spec.csv";
  const int extract_rc = run(common + " extract --wav " + q(data / "synth_c0_0.wav") +
                             " -o " + q(csv));
  std::size_t rows = 0, cols = 0;
  bool ragged = false;
  std::istringstream lines(slurp(csv));
  for (std::string line; std::getline(lines, line);) {
    const std::size_t c = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
    if (rows == 0) cols = c;
    ragged = ragged || c != cols;
    ++rows;
  }
  const fs::path gc = work / "gradcheck.csv";
  const int grad_rc = run(common + " --seed 7 gradcheck -o " + q(gc));
  std::size_t pass_rows = 0, fail_rows = 0;
  std::istringstream gl(slurp(gc));
  std::string line;
  std::getline(gl, line);
  while (std::getline(gl, line)) {
    if (line.ends_with(",pass")) ++pass_rows; else ++fail_rows;
  }
  const bool ok = extract_rc == 0 && rows == 19 && cols == 16 && !ragged && grad_rc == 0 &&
                  pass_rows == 64 && fail_rows == 0;
  return {ok, fmt("extract exit %d, %zu x %zu CSV; gradcheck exit %d, %zu/%zu rows pass",
                  extract_rc, rows, cols, grad_rc, pass_rows, pass_rows + fail_rows)};
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "learnspec_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"gradient fidelity", gradient_fidelity},
      {"forward oracle", forward_oracle},
      {"mel math", mel_math},
      {"metric reproduction", metric_reproduction},
      {"learnability", learnability},
      {"frozen vs learnable", frozen_vs_learnable},
      {"baseline correctness", baseline},
      {"determinism", [&] { return determinism(work / "determinism"); }},
      {"cli contract", [&] { return cli_contract(work / "cli"); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work);
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
