// include/tdnnse/trainer.hpp

// Copyright 2026  The tdnnse authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Staged training: noisy-to-clean, then clean-to-clean and noise-to-silence
// fine-tuning, then noisy-to-clean again. Every epoch validates on the
// noisy-clean validation loss (so "best" is comparable across stages),
// applies the 0.7 learning-rate backoff, and snapshots; the global best
// checkpoint is returned.

#ifndef TDNNSE_TRAINER_HPP_
#define TDNNSE_TRAINER_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "tdnnse/datagen.hpp"
#include "tdnnse/dsp.hpp"
#include "tdnnse/errors.hpp"
#include "tdnnse/mask.hpp"
#include "tdnnse/nn.hpp"
#include "tdnnse/optimizer.hpp"

namespace tdnnse {

struct Stage {
  PairMode mode = PairMode::kNoisyClean;
  int epochs = 1;
};

struct StagePlan {
  std::vector<Stage> stages;

  static StagePlan default_plan() {
    return {{{PairMode::kNoisyClean, 30},
             {PairMode::kCleanClean, 5},
             {PairMode::kNoiseSilence, 5},
             {PairMode::kNoisyClean, 5}}};
  }
};

inline void validate_plan(const StagePlan& plan) {
  if (plan.stages.empty()) throw std::invalid_argument("plan: no stages");
  for (const auto& s : plan.stages) {
    if (s.epochs < 1) throw std::invalid_argument("plan: epoch count must be >= 1");
  }
}

struct EpochRecord {
  int stage = 0;  // 1-based
  PairMode mode = PairMode::kNoisyClean;
  int epoch = 0;  // 1-based within the stage
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double learning_rate = 0.0;
  double seconds = 0.0;
};

struct TrainReport {
  std::vector<EpochRecord> records;
  int best_stage = 0;  // 0 = the initial model (continuation runs only)
  int best_epoch = 0;
  double best_valid_loss = std::numeric_limits<double>::infinity();
};

// One record per line: stage, epoch, train_loss, valid_loss, lr, seconds.
inline std::string format_report(const TrainReport& report) {
  std::string out = "# stage\tepoch\ttrain_loss\tvalid_loss\tlr\tseconds\n";
  char buf[256];
  for (const auto& r : report.records) {
    std::snprintf(buf, sizeof(buf), "%d\t%d\t%.12g\t%.12g\t%.12g\t%.3f\n", r.stage,
                  r.epoch, r.train_loss, r.valid_loss, r.learning_rate, r.seconds);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "# best\tstage=%d\tepoch=%d\tvalid_loss=%.12g\n",
                report.best_stage, report.best_epoch, report.best_valid_loss);
  out += buf;
  return out;
}

inline void write_report(const std::string& path, const TrainReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("write_report: cannot open " + path + " for writing");
  out << format_report(report);
  if (!out) throw DataError("write_report: write failed for " + path);
}

namespace detail {

inline Matrix features_of(const Waveform& w) { return magnitude(stft(w)); }

}  // namespace detail

// Per-frequency mean/std over the magnitudes of the given inputs.
inline void compute_input_norm(const std::vector<TrainingPair>& pairs,
                               std::vector<double>& mean_out,
                               std::vector<double>& std_out) {
  if (pairs.empty()) throw std::invalid_argument("compute_input_norm: no pairs");
  std::vector<double> sum, sumsq;
  std::size_t frames = 0;
  for (const auto& p : pairs) {
    const Matrix mag = detail::features_of(p.input);
    if (sum.empty()) {
      sum.assign(mag.cols, 0.0);
      sumsq.assign(mag.cols, 0.0);
    }
    for (std::size_t t = 0; t < mag.rows; ++t) {
      const double* row = mag.row(t);
      for (std::size_t f = 0; f < mag.cols; ++f) {
        sum[f] += row[f];
        sumsq[f] += row[f] * row[f];
      }
    }
    frames += mag.rows;
  }
  mean_out.resize(sum.size());
  std_out.resize(sum.size());
  for (std::size_t f = 0; f < sum.size(); ++f) {
    mean_out[f] = sum[f] / static_cast<double>(frames);
    const double var = sumsq[f] / static_cast<double>(frames) - mean_out[f] * mean_out[f];
    std_out[f] = std::sqrt(std::max(var, 0.0));
  }
}

// One pass over the pairs in seeded shuffled order; `batch` utterances are
// accumulated (mean gradient) per optimizer step. Returns the mean
// per-utterance loss, each measured before its own update.
inline double run_epoch(TdnnModel& model, const std::vector<TrainingPair>& pairs,
                        AdamState& adam, int batch, std::uint64_t shuffle_seed,
                        const std::string& context = "") {
  if (pairs.empty()) throw std::invalid_argument("run_epoch: no pairs");
  if (batch < 1) throw std::invalid_argument("run_epoch: batch must be >= 1");

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(shuffle_seed);
  rng.shuffle(order);

  ParamSet grads = zeros_like(model);
  auto zero_grads = [&grads]() {
    for (auto& w : grads.weights) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : grads.biases) std::fill(b.begin(), b.end(), 0.0);
  };

  double loss_sum = 0.0;
  int in_batch = 0;
  auto flush = [&](int count) {
    if (count == 0) return;
    if (count > 1) {
      const double inv = 1.0 / count;
      for (auto& w : grads.weights) {
        for (double& v : w.data) v *= inv;
      }
      for (auto& b : grads.biases) {
        for (double& v : b) v *= inv;
      }
    }
    adam_step(model, grads, adam);
    zero_grads();
  };

  for (std::size_t idx : order) {
    const TrainingPair& p = pairs[idx];
    const Matrix noisy_mag = detail::features_of(p.input);
    const Matrix clean_mag = detail::features_of(p.target);
    const double loss = forward_backward(model, noisy_mag, clean_mag, grads);
    if (!std::isfinite(loss)) {
      throw NumericError("run_epoch: non-finite loss" +
                         (context.empty() ? "" : " at " + context) +
                         ", utterance " + p.id);
    }
    loss_sum += loss;
    if (++in_batch == batch) {
      flush(in_batch);
      in_batch = 0;
    }
  }
  flush(in_batch);
  return loss_sum / static_cast<double>(pairs.size());
}

inline double compute_valid_loss(const TdnnModel& model,
                                 const std::vector<TrainingPair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("compute_valid_loss: no pairs");
  double sum = 0.0;
  for (const auto& p : pairs) {
    const Matrix noisy_mag = detail::features_of(p.input);
    const Matrix clean_mag = detail::features_of(p.target);
    sum += signal_mse(noisy_mag, forward(model, noisy_mag), clean_mag);
  }
  return sum / static_cast<double>(pairs.size());
}

struct TrainOptions {
  std::vector<Context> contexts = preset_contexts("tdnn-f");
  std::size_t hidden_dim = kDefaultHiddenDim;
  double learning_rate = kDefaultLearningRate;
  int batch = 1;
  std::uint64_t seed = 1234;
  // Continue from an existing model instead of a fresh initialization; its
  // normalization statistics are kept and it seeds the best-model tracker.
  std::optional<TdnnModel> init_model;
};

struct ScheduleResult {
  TdnnModel best_model;
  TrainReport report;
};

inline ScheduleResult run_schedule(const StagePlan& plan,
                                   const CorpusManifest& manifest,
                                   const TrainOptions& options) {
  validate_plan(plan);

  // Stage pair sets (one per distinct mode) and the fixed validation set.
  std::vector<std::vector<TrainingPair>> stage_pairs(plan.stages.size());
  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    stage_pairs[s] = build_pairs(manifest, Split::kTrain, plan.stages[s].mode);
    if (stage_pairs[s].empty()) {
      throw DataError("run_schedule: train split has no pairs for mode " +
                      to_string(plan.stages[s].mode));
    }
  }
  const std::vector<TrainingPair> valid_pairs =
      build_pairs(manifest, Split::kValid, PairMode::kNoisyClean);
  if (valid_pairs.empty()) {
    throw DataError("run_schedule: valid split has no noisy-clean pairs");
  }

  TdnnModel model;
  ScheduleResult result;
  if (options.init_model) {
    model = *options.init_model;
    validate_model(model);
    result.report.best_valid_loss = compute_valid_loss(model, valid_pairs);
    result.report.best_stage = 0;
    result.report.best_epoch = 0;
    result.best_model = model;
  } else {
    model = build_model(options.contexts, kNumBins, options.hidden_dim, kNumBins);
    init_weights(model, options.seed);
    // Normalization comes from the training set's noisy magnitudes (falls
    // back to the first stage's inputs when the manifest has none).
    std::vector<double> mean, sd;
    auto noisy_train = build_pairs(manifest, Split::kTrain, PairMode::kNoisyClean);
    compute_input_norm(noisy_train.empty() ? stage_pairs[0] : noisy_train, mean, sd);
    set_input_norm(model, mean, sd);
  }

  AdamState adam = make_adam(model, options.learning_rate);
  double prev_valid = std::numeric_limits<double>::quiet_NaN();
  bool have_prev = false;

  for (std::size_t s = 0; s < plan.stages.size(); ++s) {
    const Stage& stage = plan.stages[s];
    for (int e = 1; e <= stage.epochs; ++e) {
      const auto t0 = std::chrono::steady_clock::now();
      char ctx[64];
      std::snprintf(ctx, sizeof(ctx), "stage %zu (%s) epoch %d", s + 1,
                    to_string(stage.mode).c_str(), e);
      const std::uint64_t shuffle_seed =
          derive_seed(options.seed, "shuffle:" + std::to_string(s) + ":" + std::to_string(e));
      const double lr_used = adam.learning_rate;
      const double train_loss =
          run_epoch(model, stage_pairs[s], adam, options.batch, shuffle_seed, ctx);
      const double valid_loss = compute_valid_loss(model, valid_pairs);
      if (!std::isfinite(valid_loss)) {
        throw NumericError(std::string("run_schedule: non-finite validation loss at ") + ctx);
      }
      const auto t1 = std::chrono::steady_clock::now();

      EpochRecord rec;
      rec.stage = static_cast<int>(s + 1);
      rec.mode = stage.mode;
      rec.epoch = e;
      rec.train_loss = train_loss;
      rec.valid_loss = valid_loss;
      rec.learning_rate = lr_used;
      rec.seconds = std::chrono::duration<double>(t1 - t0).count();
      result.report.records.push_back(rec);

      if (valid_loss < result.report.best_valid_loss) {
        result.report.best_valid_loss = valid_loss;
        result.report.best_stage = rec.stage;
        result.report.best_epoch = e;
        result.best_model = model;
      }
      if (have_prev) lr_update(adam, prev_valid, valid_loss);
      prev_valid = valid_loss;
      have_prev = true;
    }
  }
  return result;
}

}  // namespace tdnnse

#endif  // TDNNSE_TRAINER_HPP_
