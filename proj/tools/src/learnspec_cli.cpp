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

// learnspec command-line interface.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "learnspec/baseline_mfcc.hpp"
#include "learnspec/dataset.hpp"
#include "learnspec/error.hpp"
#include "learnspec/export.hpp"
#include "learnspec/frontend.hpp"
#include "learnspec/gammatone.hpp"
#include "learnspec/head.hpp"
#include "learnspec/metrics.hpp"
#include "learnspec/model_io.hpp"
#include "learnspec/paramgrad.hpp"
#include "learnspec/trainer.hpp"
#include "learnspec/wav.hpp"

namespace fs = std::filesystem;
using namespace learnspec;

namespace {

struct Globals {
  BankConfig bank;
  bool log_compress = false;
  double epsilon = FrontendOptions{}.epsilon;
  std::uint64_t seed = 0;
  bool deterministic = false;
  std::size_t workers = 1;
  std::size_t decimate = 1;
  bool quiet = false;

  FrontendOptions frontend() const { return {log_compress, epsilon}; }
  std::size_t worker_count() const { return deterministic ? 1 : std::max<std::size_t>(1, workers); }
};

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_text(path, text);
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

FilterBank make_bank(const Globals& g, const std::vector<double>& centers) {
  validate(g.bank);
  if (centers.empty()) return init_bank(g.bank);
  BankConfig c = g.bank;
  c.num_filters = centers.size();
  return bank_with_centers(c, centers);
}

// Loads a bank (and optional head) from a model file, or builds one.
ParsedModel load_or_make(const Globals& g, const std::string& path,
                         const std::vector<double>& centers) {
  if (!path.empty()) return parse_model(load_text(path));
  ParsedModel m;
  m.bank = make_bank(g, centers);
  m.frontend = g.frontend();
  return m;
}

std::vector<double> load_audio(const Globals& g, const fs::path& path) {
  const WavAudio wav = read_wav(path);
  LabeledClip clip{wav.samples, wav.sample_rate, 0, path.string(), std::nullopt};
  return decimate(clip, g.decimate).samples;
}

double load_rate(const Globals& g, const fs::path& path) {
  return read_wav(path).sample_rate / static_cast<double>(g.decimate);
}

void check_rate(double clip_rate, double bank_rate, const fs::path& path) {
  if (std::abs(clip_rate - bank_rate) > 1e-9) {
    throw ConfigError(path.string() + ": sample rate " + std::to_string(clip_rate) +
                      " Hz, bank expects " + std::to_string(bank_rate) + " Hz");
  }
}

std::size_t infer_classes(const std::vector<ManifestEntry>& entries) {
  std::size_t c = 0;
  for (const auto& e : entries) c = std::max(c, e.label + 1);
  return c;
}

void say(const Globals& g, const std::string& line) {
  if (!g.quiet) std::cerr << line << '\n';
}

// Random-bank, random-head gradient check of the whole pipeline:
// audio -> frontend -> head -> loss, against central differences.
struct GradcheckOptions {
  std::size_t num_samples = 1000;
  std::size_t classes = 3;
  double tolerance = 1e-4;
  double step_scale = 0.01;  // relative to default_fd_step
};

std::string gradcheck_report(const Globals& g, const FilterBank& bank,
                             const GradcheckOptions& opt, bool& all_pass) {
  std::mt19937_64 rng(g.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> audio(opt.num_samples);
  for (double& x : audio) x = 0.5 * u(rng);
  HeadParams head = HeadParams::zeros(opt.classes, bank.size());
  for (double& w : head.weights.data()) w = u(rng);
  for (double& b : head.biases) b = 0.1 * u(rng);
  const std::size_t target = std::uniform_int_distribution<std::size_t>(0, opt.classes - 1)(rng);
  const FrontendOptions fo = g.frontend();

  const auto loss_of = [&](const FilterBank& b) {
    return head_loss(extract(audio, b, fo), head, target).loss;
  };
  const Spectrogram raw = forward(audio, bank);
  const HeadBackward hb = head_backward(fo.log_compress ? log_compress(raw, fo.epsilon) : raw,
                                        head, target);
  const FrameGrad fg = fo.log_compress ? log_compress_backward(raw, hb.frames, fo.epsilon)
                                       : hb.frames;
  const auto taps = backward_to_kernels(audio, fg, bank);

  std::ostringstream out;
  out << "filter,parameter,analytic,oracle,rel_err,pass\n";
  all_pass = true;
  char buf[160];
  for (std::size_t k = 0; k < bank.size(); ++k) {
    const ParamGrads grads = param_grads(bank.params[k], taps[k], bank.config.sample_rate, k);
    for (Param which : kLearnableParams) {
      const double h = opt.step_scale * default_fd_step(bank.params[k], which);
      FilterBank plus = bank, minus = bank;
      set_param(plus.params[k], which, get_param(bank.params[k], which) + h);
      set_param(minus.params[k], which, get_param(bank.params[k], which) - h);
      const double fd = (loss_of(plus) - loss_of(minus)) / (2.0 * h);
      const double analytic = grads.get(which);
      const double rel = std::abs(analytic - fd) / std::max(1.0, std::abs(fd));
      const bool pass = rel <= opt.tolerance;
      all_pass = all_pass && pass;
      std::snprintf(buf, sizeof buf, "%zu,%s,%.9g,%.9g,%.3g,%s\n", k,
                    std::string(param_name(which)).c_str(), analytic, fd, rel,
                    pass ? "pass" : "fail");
      out << buf;
    }
  }
  return out.str();
}

std::vector<double> parse_tone_list(const std::string& text) {
  std::vector<double> tones;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      tones.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad tone list '" + text + "'");
    }
  }
  if (tones.empty()) throw ConfigError("empty tone list");
  return tones;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learnspec: learnable gammatone filterbank front-end tools"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI profile (see tools/profiles)");

  Globals g;
  app.add_option("--filters", g.bank.num_filters, "Number of filters")->capture_default_str();
  app.add_option("--fmin", g.bank.f_min, "Lowest mel-grid frequency (Hz)")->capture_default_str();
  app.add_option("--fmax", g.bank.f_max, "Highest mel-grid frequency (Hz)")->capture_default_str();
  app.add_option("--kernel-len", g.bank.kernel_len, "Kernel length K (taps)")->capture_default_str();
  app.add_option("--stride", g.bank.stride, "Hop between frames (samples)")->capture_default_str();
  app.add_option("--sample-rate", g.bank.sample_rate, "Bank sample rate (Hz)")->capture_default_str();
  app.add_flag("--log-compress,!--no-log-compress", g.log_compress, "Use log(z^2 + eps) features");
  app.add_option("--epsilon", g.epsilon, "Log compression offset")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_flag("--deterministic", g.deterministic, "Single-threaded, reproducible run");
  app.add_option("--workers", g.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--decimate", g.decimate, "Decimation factor applied to input audio")
      ->capture_default_str()->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress output");

  std::vector<double> centers;

  // init-bank
  auto* init_cmd = app.add_subcommand("init-bank", "Write a mel-initialized bank");
  std::string init_out;
  init_cmd->add_option("-o,--out", init_out, "Output bank file")->required();
  init_cmd->add_option("--centers", centers, "Explicit center frequencies (Hz)")->delimiter(',');

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Spectrogram of a WAV file");
  std::string ex_wav, ex_out, ex_pgm, ex_model;
  extract_cmd->add_option("--wav", ex_wav, "Input WAV")->required()->check(CLI::ExistingFile);
  extract_cmd->add_option("-o,--out", ex_out, "Output CSV (frames x filters)")->required();
  extract_cmd->add_option("--pgm", ex_pgm, "Also write a graymap image");
  extract_cmd->add_option("--model", ex_model, "Bank or model file (default: init-bank)");

  // mfcc
  auto* mfcc_cmd = app.add_subcommand("mfcc", "MFCC baseline features of a WAV file");
  std::string mf_wav, mf_out;
  std::size_t mf_mels = 40, mf_ceps = 13;
  StftConfig stft;
  std::optional<double> mf_fmax;
  double mf_fmin = 0.0;
  bool mf_rect = false;
  mfcc_cmd->add_option("--wav", mf_wav, "Input WAV")->required()->check(CLI::ExistingFile);
  mfcc_cmd->add_option("-o,--out", mf_out, "Output CSV (frames x coefficients)")->required();
  mfcc_cmd->add_option("--mels", mf_mels, "Mel bands")->capture_default_str();
  mfcc_cmd->add_option("--ceps", mf_ceps, "Cepstral coefficients kept")->capture_default_str();
  mfcc_cmd->add_option("--frame-len", stft.frame_len, "STFT frame length")->capture_default_str();
  mfcc_cmd->add_option("--hop", stft.hop, "STFT hop")->capture_default_str();
  mfcc_cmd->add_option("--mel-fmin", mf_fmin, "Mel filterbank low edge (Hz)")->capture_default_str();
  mfcc_cmd->add_option("--mel-fmax", mf_fmax, "Mel filterbank high edge (Hz, default Nyquist)");
  mfcc_cmd->add_flag("--rectangular", mf_rect, "Rectangular instead of Hamming window");

  // train
  auto* train_cmd = app.add_subcommand("train", "Two-stage training from a manifest");
  std::string tr_manifest, tr_out, tr_model;
  std::size_t tr_frozen = 0, tr_learnable = 0;
  std::optional<std::size_t> tr_classes;
  TrainConfig tc = synth_profile();
  double center_rate = *tc.frontend_rates.center_freq;
  double bandwidth_rate = *tc.frontend_rates.bandwidth;
  std::optional<double> order_rate, amplitude_rate;
  train_cmd->add_option("--manifest", tr_manifest, "Dataset manifest CSV")->required()->check(CLI::ExistingFile);
  train_cmd->add_option("-o,--out-dir", tr_out, "Output directory")->required();
  train_cmd->add_option("--model", tr_model, "Starting bank or model file");
  train_cmd->add_option("--centers", centers, "Explicit starting centers (Hz)")->delimiter(',');
  train_cmd->add_option("--classes", tr_classes, "Number of classes (default: from labels)");
  train_cmd->add_option("--frozen-epochs", tr_frozen, "Epochs with the frontend frozen")->required();
  train_cmd->add_option("--learnable-epochs", tr_learnable, "Epochs with all parameters learnable")->required();
  train_cmd->add_option("--lr", tc.learning_rate, "Adam learning rate")->capture_default_str();
  train_cmd->add_option("--batch", tc.batch_size, "Batch size")->capture_default_str();
  train_cmd->add_option("--center-rate", center_rate, "Learning rate for center frequencies")->capture_default_str();
  train_cmd->add_option("--bandwidth-rate", bandwidth_rate, "Learning rate for bandwidths")->capture_default_str();
  train_cmd->add_option("--order-rate", order_rate, "Learning rate for orders (default --lr)");
  train_cmd->add_option("--amplitude-rate", amplitude_rate, "Learning rate for amplitudes (default --lr)");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Metric report of a trained model");
  std::string ev_manifest, ev_model, ev_out;
  eval_cmd->add_option("--manifest", ev_manifest, "Dataset manifest CSV")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--model", ev_model, "Model file with a [head] section")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("-o,--out", ev_out, "Output report CSV");

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
  std::string gc_out, gc_model;
  GradcheckOptions gco;
  grad_cmd->add_option("-o,--out", gc_out, "Output CSV (default stdout)");
  grad_cmd->add_option("--model", gc_model, "Bank or model file (default: init-bank)");
  grad_cmd->add_option("--samples", gco.num_samples, "Random audio length")->capture_default_str();
  grad_cmd->add_option("--classes", gco.classes, "Random head classes")->capture_default_str()->check(CLI::PositiveNumber);
  grad_cmd->add_option("--tolerance", gco.tolerance, "Relative error bound")->capture_default_str();
  grad_cmd->add_option("--step-scale", gco.step_scale, "Finite-difference step relative to the default")
      ->capture_default_str()->check(CLI::PositiveNumber);

  // response
  auto* resp_cmd = app.add_subcommand("response", "Frequency response of each filter");
  std::string rs_out, rs_model;
  std::size_t rs_points = 256;
  resp_cmd->add_option("-o,--out-dir", rs_out, "Output directory")->required();
  resp_cmd->add_option("--model", rs_model, "Bank or model file (default: init-bank)");
  resp_cmd->add_option("--points", rs_points, "Frequencies from 0 to Nyquist")->capture_default_str();

  // gen-data
  auto* gen_cmd = app.add_subcommand("gen-data", "Synthetic tone dataset as WAV files");
  std::string gd_out;
  std::vector<std::string> gd_classes{"150", "320"};
  SynthSpec synth;
  std::uint16_t gd_bits = 16;
  gen_cmd->add_option("-o,--out-dir", gd_out, "Output directory")->required();
  gen_cmd->add_option("--class", gd_classes, "Tone list per class, e.g. --class 150 --class 320,640")
      ->capture_default_str();
  gen_cmd->add_option("--noise", synth.noise_level, "White noise std")->capture_default_str();
  gen_cmd->add_option("--clip-len", synth.clip_len, "Samples per clip")->capture_default_str();
  gen_cmd->add_option("--clips-per-class", synth.clips_per_class, "Clips per class")->capture_default_str();
  gen_cmd->add_option("--bits", gd_bits, "PCM bit depth")->capture_default_str()->check(CLI::IsMember({16, 24}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*init_cmd) {
      write_file(init_out, format_bank(make_bank(g, centers)));
    } else if (*extract_cmd) {
      const ParsedModel m = load_or_make(g, ex_model, centers);
      check_rate(load_rate(g, ex_wav), m.bank.config.sample_rate, ex_wav);
      const FrontendOptions fo = ex_model.empty() ? g.frontend() : m.frontend;
      const Spectrogram spec = extract(load_audio(g, ex_wav), m.bank, fo);
      write_file(ex_out, matrix_csv(spec.values));
      if (!ex_pgm.empty()) write_bytes(ex_pgm, matrix_pgm(spec.values));
      say(g, std::to_string(spec.values.rows()) + " frames x " +
                 std::to_string(spec.values.cols()) + " filters");
    } else if (*mfcc_cmd) {
      stft.window = mf_rect ? Window::Rectangular : Window::Hamming;
      const double rate = load_rate(g, mf_wav);
      const MelBank mb = mel_bank(mf_mels, stft.frame_len, rate, mf_fmin, mf_fmax.value_or(rate / 2.0));
      write_file(mf_out, matrix_csv(mfcc(load_audio(g, mf_wav), stft, mb, mf_ceps)));
    } else if (*train_cmd) {
      const auto entries = read_manifest(tr_manifest, tr_classes);
      ParsedModel start = load_or_make(g, tr_model, centers);
      const auto clips = load_clips(entries, g.decimate, start.bank.config.sample_rate);
      const std::size_t classes = tr_classes.value_or(infer_classes(entries));
      if (classes < 2) throw ConfigError("training needs at least two classes");

      Model model;
      model.bank = start.bank;
      model.frontend = tr_model.empty() ? g.frontend() : start.frontend;
      model.head = start.head ? *start.head : init_head(classes, model.bank.size(), g.seed);
      if (model.head.num_classes() != classes || model.head.num_features() != model.bank.size()) {
        throw ConfigError("starting head does not match " + std::to_string(classes) +
                          " classes x " + std::to_string(model.bank.size()) + " filters");
      }
      tc.seed = g.seed;
      tc.workers = g.worker_count();
      tc.frontend = model.frontend;
      tc.frontend_rates = FrontendRates{amplitude_rate, order_rate, bandwidth_rate, center_rate};
      const TrainResult r = train_two_stage(to_dataset(clips), model, tc, tr_frozen, tr_learnable);

      const fs::path dir = tr_out;
      write_file(dir / "bank.txt", format_bank(r.model.bank));
      write_file(dir / "model.txt", format_model(r.model));
      write_file(dir / "log.csv", training_log_csv(r.log));
      if (!r.log.empty()) {
        const EpochLog& last = r.log.back();
        char buf[128];
        std::snprintf(buf, sizeof buf, "final epoch %zu: loss %.4f accuracy %.2f%% macc %.2f%%",
                      last.epoch, last.mean_loss, 100.0 * last.accuracy, 100.0 * last.macc);
        say(g, buf);
      }
    } else if (*eval_cmd) {
      const ParsedModel pm = parse_model(load_text(ev_model));
      if (!pm.head) throw ConfigError(ev_model + ": no [head] section");
      const auto entries = read_manifest(ev_manifest, pm.head->num_classes());
      const auto clips = load_clips(entries, g.decimate, pm.bank.config.sample_rate);
      const Model model{pm.bank, *pm.head, pm.frontend};
      const Evaluation ev = evaluate(model, to_dataset(clips));
      const MetricReport rep =
          metric_report(confusion(ev.predictions, ev.truths, pm.head->num_classes()));
      if (!ev_out.empty()) write_file(ev_out, report_csv(rep));
      std::cout << report_text(rep);
    } else if (*grad_cmd) {
      const ParsedModel m = load_or_make(g, gc_model, centers);
      bool all_pass = false;
      const std::string report = gradcheck_report(g, m.bank, gco, all_pass);
      if (gc_out.empty()) {
        std::cout << report;
      } else {
        write_file(gc_out, report);
      }
      if (!all_pass) {
        std::cerr << "gradcheck: some gradients exceed tolerance " << gco.tolerance << '\n';
        return 1;
      }
    } else if (*resp_cmd) {
      const ParsedModel m = load_or_make(g, rs_model, centers);
      const fs::path dir = rs_out;
      for (std::size_t k = 0; k < m.bank.size(); ++k) {
        std::ostringstream csv;
        csv << "freq_hz,magnitude\n";
        char buf[64];
        for (const auto& p : frequency_response(m.bank.params[k], m.bank.config.kernel_len,
                                                m.bank.config.sample_rate, rs_points)) {
          std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", p.freq_hz, p.magnitude);
          csv << buf;
        }
        char name[32];
        std::snprintf(name, sizeof name, "filter_%03zu.csv", k);
        write_file(dir / name, csv.str());
      }
    } else if (*gen_cmd) {
      synth.sample_rate = g.bank.sample_rate;
      synth.seed = g.seed;
      synth.class_tones.clear();
      for (const auto& c : gd_classes) synth.class_tones.push_back(parse_tone_list(c));
      const fs::path dir = gd_out;
      fs::create_directories(dir);
      std::vector<ManifestEntry> entries;
      for (const auto& clip : gen_synth(synth)) {
        const std::string name = clip.source_id + ".wav";
        write_wav(dir / name, clip.samples, static_cast<std::uint32_t>(synth.sample_rate), gd_bits);
        entries.push_back(ManifestEntry{name, clip.label, std::nullopt, 0});
      }
      write_manifest(dir / "manifest.csv", entries);
      say(g, std::to_string(entries.size()) + " clips written to " + dir.string());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
