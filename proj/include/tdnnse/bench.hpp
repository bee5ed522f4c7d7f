// include/tdnnse/bench.hpp

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

// Forward-pass latency measurement. Warmup passes run unmeasured; every
// measured pass must produce bit-identical outputs to the warmup (catches
// lazy-initialization skew). Features are precomputed by the caller, so the
// timed region is the network only.

#ifndef TDNNSE_BENCH_HPP_
#define TDNNSE_BENCH_HPP_

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnnse/nn.hpp"

namespace tdnnse {

struct BenchResult {
  std::string config_name;
  std::size_t utterance_count = 0;
  std::size_t frames_per_utterance = 0;
  double mean_ms = 0.0;        // mean per-utterance forward time
  double std_ms = 0.0;         // std over reps of the per-utterance mean
  double throughput_fps = 0.0; // frames per second over the measured region
  std::vector<double> rep_total_ms;
};

inline BenchResult bench_forward(const TdnnModel& model,
                                 const std::vector<Matrix>& utterances,
                                 int warmup, int reps,
                                 const std::string& name = "") {
  if (utterances.empty()) throw std::invalid_argument("bench_forward: no utterances");
  if (reps < 3) throw std::invalid_argument("bench_forward: reps must be >= 3");
  if (warmup < 1) throw std::invalid_argument("bench_forward: warmup must be >= 1");

  std::size_t total_frames = 0;
  for (const auto& u : utterances) total_frames += u.rows;

  std::vector<Matrix> baseline;
  baseline.reserve(utterances.size());
  for (int w = 0; w < warmup; ++w) {
    for (std::size_t i = 0; i < utterances.size(); ++i) {
      Matrix out = forward(model, utterances[i]);
      if (w == 0) baseline.push_back(std::move(out));
    }
  }

  BenchResult result;
  result.config_name = name;
  result.utterance_count = utterances.size();
  result.frames_per_utterance = total_frames / utterances.size();

  using clock = std::chrono::steady_clock;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = clock::now();
    std::vector<Matrix> outs;
    outs.reserve(utterances.size());
    for (const auto& u : utterances) outs.push_back(forward(model, u));
    const auto t1 = clock::now();
    for (std::size_t i = 0; i < outs.size(); ++i) {
      if (outs[i].data != baseline[i].data) {
        throw std::runtime_error("bench_forward: outputs differ between passes");
      }
    }
    result.rep_total_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
  }

  double sum = 0.0;
  for (double v : result.rep_total_ms) sum += v;
  const double n_utt = static_cast<double>(utterances.size());
  const double mean_total = sum / static_cast<double>(reps);
  result.mean_ms = mean_total / n_utt;
  double var = 0.0;
  for (double v : result.rep_total_ms) {
    const double d = v / n_utt - result.mean_ms;
    var += d * d;
  }
  result.std_ms = std::sqrt(var / static_cast<double>(reps));
  result.throughput_fps =
      static_cast<double>(total_frames) * reps / (sum / 1000.0);
  return result;
}

inline std::string format_bench_header() {
  return "config\tutterances\tframes/utt\tmean_ms\tstd_ms\tframes_per_s\n";
}

inline std::string format_bench_row(const BenchResult& r) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s\t%zu\t%zu\t%.4f\t%.4f\t%.1f\n",
                r.config_name.c_str(), r.utterance_count, r.frames_per_utterance,
                r.mean_ms, r.std_ms, r.throughput_fps);
  return buf;
}

}  // namespace tdnnse

#endif  // TDNNSE_BENCH_HPP_
