// include/tdnnse/metrics.hpp

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

// Objective evaluation. SDR is the plain energy ratio (no allowed-distortion
// filtering; reported as "sdr:plain" in table metadata). STOI follows the
// short-time intelligibility recipe: resample to 10 kHz, drop frames more
// than 40 dB below the loudest reference frame, 1/3-octave band envelopes
// over 512-point FFT frames, and clipped correlations over 384 ms segments.

#ifndef TDNNSE_METRICS_HPP_
#define TDNNSE_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnnse/fft.hpp"
#include "tdnnse/matrix.hpp"
#include "tdnnse/resample.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

inline constexpr double kSdrCapDb = 100.0;

// 10*log10(sum x^2 / sum (x - xhat)^2), capped at +100 dB for a vanishing
// error term.
inline double sdr(const Waveform& reference, const Waveform& estimate) {
  if (reference.samples.size() != estimate.samples.size()) {
    throw std::invalid_argument("sdr: length mismatch");
  }
  if (reference.sample_rate != estimate.sample_rate) {
    throw std::invalid_argument("sdr: sample rate mismatch");
  }
  double ref_energy = 0.0, err_energy = 0.0;
  for (std::size_t i = 0; i < reference.samples.size(); ++i) {
    const double r = reference.samples[i];
    const double d = r - estimate.samples[i];
    ref_energy += r * r;
    err_energy += d * d;
  }
  if (ref_energy <= 0.0) {
    throw std::invalid_argument("sdr: reference has zero energy");
  }
  if (err_energy < 1e-20 * ref_energy) return kSdrCapDb;
  return 10.0 * std::log10(ref_energy / err_energy);
}

namespace stoi_detail {

inline constexpr int kStoiRate = 10000;
inline constexpr int kFrameLen = 256;
inline constexpr int kFrameHop = 128;
inline constexpr int kFftLen = 512;
inline constexpr int kNumBands = 15;
inline constexpr double kMinBandFreq = 150.0;
inline constexpr int kSegmentFrames = 30;  // 384 ms
inline constexpr double kDynRangeDb = 40.0;
inline constexpr double kBetaDb = -15.0;

inline std::vector<double> hann_window() {
  std::vector<double> w(kFrameLen);
  for (int n = 0; n < kFrameLen; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / kFrameLen);
  }
  return w;
}

// Drop every frame whose reference energy is more than 40 dB below the
// loudest reference frame; both signals keep the same frames and are
// rebuilt by overlap-add.
inline bool remove_silent_frames(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 std::vector<double>& x_out,
                                 std::vector<double>& y_out) {
  const auto w = hann_window();
  if (x.size() < static_cast<std::size_t>(kFrameLen)) return false;
  const std::size_t num_frames = (x.size() - kFrameLen) / kFrameHop + 1;

  std::vector<double> energy_db(num_frames);
  double max_db = -1e30;
  for (std::size_t t = 0; t < num_frames; ++t) {
    double e = 0.0;
    for (int n = 0; n < kFrameLen; ++n) {
      const double v = w[n] * x[t * kFrameHop + n];
      e += v * v;
    }
    energy_db[t] = 10.0 * std::log10(e + 1e-300);
    max_db = std::max(max_db, energy_db[t]);
  }

  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < num_frames; ++t) {
    if (energy_db[t] > max_db - kDynRangeDb) kept.push_back(t);
  }
  if (kept.empty()) return false;

  const std::size_t out_len = (kept.size() - 1) * kFrameHop + kFrameLen;
  x_out.assign(out_len, 0.0);
  y_out.assign(out_len, 0.0);
  for (std::size_t m = 0; m < kept.size(); ++m) {
    const std::size_t src = kept[m] * kFrameHop;
    const std::size_t dst = m * kFrameHop;
    for (int n = 0; n < kFrameLen; ++n) {
      x_out[dst + n] += w[n] * x[src + n];
      y_out[dst + n] += w[n] * y[src + n];
    }
  }
  return true;
}

// 1/3-octave band energies: rows are bands, columns frames.
inline Matrix band_envelopes(const std::vector<double>& sig) {
  const auto w = hann_window();
  const std::size_t num_frames = (sig.size() - kFrameLen) / kFrameHop + 1;
  Fft plan(kFftLen);

  // Nearest-bin band edges around center 150 * 2^(j/3).
  std::vector<std::size_t> lo(kNumBands), hi(kNumBands);
  for (int j = 0; j < kNumBands; ++j) {
    const double cf = kMinBandFreq * std::pow(2.0, j / 3.0);
    const double f_lo = cf * std::pow(2.0, -1.0 / 6.0);
    const double f_hi = cf * std::pow(2.0, 1.0 / 6.0);
    auto nearest_bin = [](double freq) {
      double best = 1e30;
      std::size_t arg = 0;
      for (std::size_t k = 0; k <= kFftLen / 2; ++k) {
        const double fk = static_cast<double>(k) * kStoiRate / kFftLen;
        const double d = (fk - freq) * (fk - freq);
        if (d < best) {
          best = d;
          arg = k;
        }
      }
      return arg;
    };
    lo[j] = nearest_bin(f_lo);
    hi[j] = nearest_bin(f_hi);
  }

  Matrix bands(kNumBands, num_frames, 0.0);
  std::vector<std::complex<double>> buf(kFftLen);
  for (std::size_t t = 0; t < num_frames; ++t) {
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0, 0.0));
    for (int n = 0; n < kFrameLen; ++n) {
      buf[n] = w[n] * sig[t * kFrameHop + n];
    }
    plan.forward(buf.data());
    for (int j = 0; j < kNumBands; ++j) {
      double acc = 0.0;
      for (std::size_t k = lo[j]; k < hi[j]; ++k) acc += std::norm(buf[k]);
      bands(j, t) = std::sqrt(acc);
    }
  }
  return bands;
}

// Correlation with explicit conventions for degenerate segments: bitwise
// identical vectors correlate at exactly 1 (this is what makes
// stoi(x, x) == 1 exact); a constant vector on one side only contributes 0.
inline double segment_correlation(const double* x, const double* y_prime, int n) {
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y_prime[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  bool identical = true;
  for (int i = 0; i < n; ++i) {
    const double a = x[i] - mx;
    const double b = y_prime[i] - my;
    if (a != b) identical = false;
    sxx += a * a;
    syy += b * b;
    sxy += a * b;
  }
  if (identical) return 1.0;
  if (sxx <= 0.0 || syy <= 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace stoi_detail

// Short-time objective intelligibility in [0, 1]; stoi(x, x) == 1.
inline double stoi(const Waveform& reference, const Waveform& estimate) {
  namespace sd = stoi_detail;
  if (reference.samples.size() != estimate.samples.size()) {
    throw std::invalid_argument("stoi: length mismatch");
  }
  if (reference.sample_rate != estimate.sample_rate) {
    throw std::invalid_argument("stoi: sample rate mismatch");
  }
  if (reference.sample_rate != 8000 && reference.sample_rate != sd::kStoiRate) {
    throw std::invalid_argument("stoi: sample rate must be 8000 or 10000 Hz");
  }

  Waveform ref10 = reference.sample_rate == sd::kStoiRate
                       ? reference
                       : resample_sinc(reference, sd::kStoiRate);
  Waveform est10 = estimate.sample_rate == sd::kStoiRate
                       ? estimate
                       : resample_sinc(estimate, sd::kStoiRate);

  std::vector<double> x, y;
  if (!sd::remove_silent_frames(ref10.samples, est10.samples, x, y)) {
    throw std::invalid_argument("stoi: signal too short for one analysis frame");
  }

  const Matrix xb = sd::band_envelopes(x);
  const Matrix yb = sd::band_envelopes(y);
  const std::size_t num_frames = xb.cols;
  if (num_frames < static_cast<std::size_t>(sd::kSegmentFrames)) {
    throw std::invalid_argument(
        "stoi: fewer than 30 frames (384 ms) remain after silence removal");
  }

  const double clip_gain = 1.0 + std::pow(10.0, -sd::kBetaDb / 20.0);
  const std::size_t num_segments = num_frames - sd::kSegmentFrames + 1;
  double total = 0.0;
  std::vector<double> xs(sd::kSegmentFrames), ys(sd::kSegmentFrames);
  for (std::size_t seg = 0; seg < num_segments; ++seg) {
    for (int j = 0; j < sd::kNumBands; ++j) {
      double nx = 0.0, ny = 0.0;
      for (int i = 0; i < sd::kSegmentFrames; ++i) {
        xs[i] = xb(j, seg + i);
        ys[i] = yb(j, seg + i);
        nx += xs[i] * xs[i];
        ny += ys[i] * ys[i];
      }
      // Energy-match the degraded segment to the clean one, then clip its
      // excursions at the -15 dB bound.
      if (ny > 0.0) {
        const double c = std::sqrt(nx) / std::sqrt(ny);
        for (double& v : ys) v *= c;
      }
      for (int i = 0; i < sd::kSegmentFrames; ++i) {
        ys[i] = std::min(ys[i], xs[i] * clip_gain);
      }
      total += sd::segment_correlation(xs.data(), ys.data(), sd::kSegmentFrames);
    }
  }
  const double mean = total / static_cast<double>(num_segments * sd::kNumBands);
  return std::clamp(mean, 0.0, 1.0);
}

// --- Score rows and aggregation -------------------------------------------

struct ScoreRow {
  std::string id;
  double snr_db = 0.0;
  bool unseen = false;
  double stoi_value = 0.0;
  double sdr_db = 0.0;
};

enum class Grouping { kBySnr, kBySeenUnseen, kOverall };

struct AggregateRow {
  std::string key;
  double mean_stoi = 0.0;
  double mean_sdr = 0.0;
  std::size_t count = 0;
};

inline std::vector<AggregateRow> aggregate(const std::vector<ScoreRow>& rows,
                                           Grouping grouping) {
  if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
  // Keys sort ascending; SNR keys sort numerically via the map key.
  std::map<double, AggregateRow> by_snr;
  std::map<std::string, AggregateRow> by_name;
  for (const auto& r : rows) {
    AggregateRow* slot = nullptr;
    if (grouping == Grouping::kBySnr) {
      slot = &by_snr[r.snr_db];
      if (slot->count == 0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", r.snr_db);
        slot->key = buf;
      }
    } else if (grouping == Grouping::kBySeenUnseen) {
      const std::string key = r.unseen ? "unseen" : "seen";
      slot = &by_name[key];
      slot->key = key;
    } else {
      slot = &by_name["overall"];
      slot->key = "overall";
    }
    slot->mean_stoi += r.stoi_value;
    slot->mean_sdr += r.sdr_db;
    slot->count += 1;
  }
  std::vector<AggregateRow> out;
  auto finish = [&out](AggregateRow a) {
    a.mean_stoi /= static_cast<double>(a.count);
    a.mean_sdr /= static_cast<double>(a.count);
    out.push_back(std::move(a));
  };
  if (grouping == Grouping::kBySnr) {
    for (auto& [k, v] : by_snr) finish(v);
  } else {
    for (auto& [k, v] : by_name) finish(v);
  }
  return out;
}

inline std::string format_scores(const std::vector<ScoreRow>& rows) {
  std::string out = "# sdr:plain\n# pesq: unsupported\nid\tsnr_db\tcondition\tstoi\tsdr\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s\t%.6g\t%s\t%.6f\t%.4f\n", r.id.c_str(),
                  r.snr_db, r.unseen ? "unseen" : "seen", r.stoi_value, r.sdr_db);
    out += buf;
  }
  return out;
}

inline std::string format_aggregate(const std::vector<AggregateRow>& rows,
                                    const std::string& grouping_name) {
  std::string out;
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s\t%s\tstoi=%.6f\tsdr=%.4f\tpesq=unsupported\tn=%zu\n",
                  grouping_name.c_str(), r.key.c_str(), r.mean_stoi, r.mean_sdr,
                  r.count);
    out += buf;
  }
  return out;
}

}  // namespace tdnnse

#endif  // TDNNSE_METRICS_HPP_
