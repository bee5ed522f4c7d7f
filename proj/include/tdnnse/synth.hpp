// include/tdnnse/synth.hpp

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

// Desk-scale corpus synthesis: harmonic speech-like utterances (voiced
// bursts, syllabic amplitude modulation, silent pauses) and white / pink /
// babble-like noise. Everything is a pure function of (kind, duration,
// seed).

#ifndef TDNNSE_SYNTH_HPP_
#define TDNNSE_SYNTH_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnnse/fft.hpp"
#include "tdnnse/rng.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

inline constexpr double kSynthPeak = 0.5;

enum class NoiseKind { kWhite, kPink, kBabble };

inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "white") return NoiseKind::kWhite;
  if (s == "pink") return NoiseKind::kPink;
  if (s == "babble") return NoiseKind::kBabble;
  throw std::invalid_argument("unknown noise kind: " + s +
                              " (expected white, pink or babble)");
}

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::kWhite: return "white";
    case NoiseKind::kPink: return "pink";
    case NoiseKind::kBabble: return "babble";
  }
  return "?";
}

namespace detail {

inline void peak_normalize(Waveform& w, double target) {
  const double p = peak(w);
  if (p <= 0.0) return;
  const double g = target / p;
  for (double& v : w.samples) v *= g;
}

}  // namespace detail

inline Waveform synth_speechlike(double duration_s, std::uint64_t seed,
                                 int sample_rate = kDefaultSampleRate) {
  if (duration_s <= 0.0) throw std::invalid_argument("synth_speechlike: duration must be > 0");
  Rng rng(derive_seed(seed, "speechlike"));
  Waveform w;
  w.sample_rate = sample_rate;
  const std::size_t total = static_cast<std::size_t>(duration_s * sample_rate);
  w.samples.assign(total, 0.0);

  std::size_t pos = 0;
  while (pos < total) {
    // Burst of voiced harmonics, then (usually) a pause.
    const double burst_s = rng.uniform(0.12, 0.45);
    const double f0_start = rng.uniform(90.0, 240.0);
    const double f0_drift = rng.uniform(-0.06, 0.06);  // relative over the burst
    const double am_rate = rng.uniform(2.0, 6.0);      // syllabic modulation
    const double am_phase = rng.uniform(0.0, 2.0 * M_PI);
    const int num_harmonics =
        std::min(12, static_cast<int>(3400.0 / f0_start));
    std::vector<double> harm_phase(num_harmonics);
    for (double& p : harm_phase) p = rng.uniform(0.0, 2.0 * M_PI);

    const std::size_t burst_len =
        std::min(total - pos, static_cast<std::size_t>(burst_s * sample_rate));
    const double attack = 0.02 * sample_rate;
    const double decay = 0.04 * sample_rate;
    double phase_acc = 0.0;
    for (std::size_t n = 0; n < burst_len; ++n) {
      const double u = static_cast<double>(n) / std::max<double>(burst_len, 1);
      const double f0 = f0_start * (1.0 + f0_drift * u);
      phase_acc += 2.0 * M_PI * f0 / sample_rate;
      double env = 1.0;
      if (n < attack) env *= n / attack;
      if (burst_len - n < decay) env *= (burst_len - n) / decay;
      env *= 0.75 + 0.35 * std::sin(2.0 * M_PI * am_rate * n / sample_rate + am_phase);
      double s = 0.0;
      for (int h = 1; h <= num_harmonics; ++h) {
        s += std::sin(h * phase_acc + harm_phase[h - 1]) / h;
      }
      w.samples[pos + n] = env * s;
    }
    pos += burst_len;

    if (pos >= total) break;
    if (rng.uniform01() < 0.5) {
      const double pause_s = rng.uniform(0.06, 0.25);
      pos += std::min(total - pos,
                      static_cast<std::size_t>(pause_s * sample_rate));
    }
  }
  detail::peak_normalize(w, kSynthPeak);
  return w;
}

namespace detail {

inline Waveform white_noise(std::size_t total, int sample_rate, Rng& rng) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(total);
  for (double& v : w.samples) v = rng.normal();
  return w;
}

// Spectral 1/sqrt(f) shaping of white noise (power falls as 1/f).
inline Waveform pink_noise(std::size_t total, int sample_rate, Rng& rng) {
  std::size_t n = 1;
  while (n < total) n <<= 1;
  std::vector<std::complex<double>> buf(n);
  for (auto& v : buf) v = {rng.normal(), 0.0};
  Fft plan(n);
  plan.forward(buf.data());
  buf[0] = 0.0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double g = 1.0 / std::sqrt(static_cast<double>(k));
    buf[k] *= g;
    if (k != n / 2) buf[n - k] = std::conj(buf[k]);
  }
  plan.inverse(buf.data());
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(total);
  for (std::size_t i = 0; i < total; ++i) w.samples[i] = buf[i].real();
  return w;
}

}  // namespace detail

inline Waveform synth_noise(NoiseKind kind, double duration_s, std::uint64_t seed,
                            int sample_rate = kDefaultSampleRate) {
  if (duration_s <= 0.0) throw std::invalid_argument("synth_noise: duration must be > 0");
  const std::size_t total = static_cast<std::size_t>(duration_s * sample_rate);
  Rng rng(derive_seed(seed, "noise"));
  Waveform w;
  switch (kind) {
    case NoiseKind::kWhite:
      w = detail::white_noise(total, sample_rate, rng);
      break;
    case NoiseKind::kPink:
      w = detail::pink_noise(total, sample_rate, rng);
      break;
    case NoiseKind::kBabble: {
      // Several overlapping speech-like streams; no common pauses survive.
      w.sample_rate = sample_rate;
      w.samples.assign(total, 0.0);
      for (int s = 0; s < 6; ++s) {
        Waveform voice = synth_speechlike(duration_s, derive_seed(seed, 700 + s),
                                          sample_rate);
        for (std::size_t i = 0; i < total && i < voice.size(); ++i) {
          w.samples[i] += voice.samples[i];
        }
      }
      break;
    }
  }
  detail::peak_normalize(w, kSynthPeak);
  return w;
}

inline Waveform synth_noise(const std::string& kind, double duration_s,
                            std::uint64_t seed, int sample_rate = kDefaultSampleRate) {
  return synth_noise(noise_kind_from_string(kind), duration_s, seed, sample_rate);
}

}  // namespace tdnnse

#endif  // TDNNSE_SYNTH_HPP_
