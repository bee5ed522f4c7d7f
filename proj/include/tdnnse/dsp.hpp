// include/tdnnse/dsp.hpp

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

// Time <-> frequency conversion. Frames are centered: the signal is
// reflect-padded by fft_size/2 on both ends, frame t starts at t*frame_shift
// in the padded signal, so frame t is aligned with sample t*frame_shift.
// Reconstruction is weighted overlap-add with the synthesis window equal to
// the analysis window, normalized by the running sum of squared windows.

#ifndef TDNNSE_DSP_HPP_
#define TDNNSE_DSP_HPP_

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "tdnnse/fft.hpp"
#include "tdnnse/matrix.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

inline constexpr int kFftSize = 256;      // 32 ms at 8 kHz
inline constexpr int kFrameShift = 128;   // 16 ms at 8 kHz
inline constexpr double kOlaDenomFloor = 1e-8;

struct ComplexSpectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;  // fft_size / 2 + 1
  int fft_size = kFftSize;
  int frame_shift = kFrameShift;
  int sample_rate = kDefaultSampleRate;
  std::vector<std::complex<double>> data;  // row-major frames x bins

  std::complex<double>& at(std::size_t t, std::size_t f) {
    return data[t * bins + f];
  }
  std::complex<double> at(std::size_t t, std::size_t f) const {
    return data[t * bins + f];
  }
};

// Periodic Hamming window (denominator `size`, not `size-1`), which keeps
// the 50% overlap-add well conditioned.
inline std::vector<double> make_analysis_window(int size) {
  if (size <= 0 || size % 2 != 0) {
    throw std::invalid_argument("make_analysis_window: size must be even and > 0");
  }
  std::vector<double> w(static_cast<std::size_t>(size));
  for (int n = 0; n < size; ++n) {
    w[n] = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / size);
  }
  return w;
}

// Number of frames produced for a signal of `len` samples; shared by stft()
// and the network-side frame bookkeeping.
inline std::size_t frame_count(std::size_t len, int frame_shift) {
  return 1 + len / static_cast<std::size_t>(frame_shift);
}

namespace detail {

// Reflect padding without edge repetition: [d c b | a b c d ... w x y z | y x w]
inline std::vector<double> reflect_pad(const std::vector<double>& x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> out(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) out[i] = x[pad - i];
  std::copy(x.begin(), x.end(), out.begin() + pad);
  for (std::size_t i = 0; i < pad; ++i) out[pad + n + i] = x[n - 2 - i];
  return out;
}

}  // namespace detail

inline ComplexSpectrogram stft(const Waveform& wave, int fft_size = kFftSize,
                               int frame_shift = kFrameShift) {
  if (wave.samples.empty()) {
    throw std::invalid_argument("stft: empty waveform");
  }
  if (fft_size <= 0 || fft_size % 2 != 0 || frame_shift <= 0) {
    throw std::invalid_argument("stft: fft_size must be even and > 0, frame_shift > 0");
  }
  const std::size_t pad = static_cast<std::size_t>(fft_size) / 2;
  if (wave.samples.size() < pad + 1) {
    throw std::invalid_argument("stft: waveform shorter than fft_size/2 + 1 samples");
  }

  const std::vector<double> window = make_analysis_window(fft_size);
  const std::vector<double> padded = detail::reflect_pad(wave.samples, pad);
  const std::size_t num_frames = frame_count(wave.samples.size(), frame_shift);
  const std::size_t num_bins = static_cast<std::size_t>(fft_size) / 2 + 1;

  ComplexSpectrogram spec;
  spec.frames = num_frames;
  spec.bins = num_bins;
  spec.fft_size = fft_size;
  spec.frame_shift = frame_shift;
  spec.sample_rate = wave.sample_rate;
  spec.data.resize(num_frames * num_bins);

  Fft plan(static_cast<std::size_t>(fft_size));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size));
  for (std::size_t t = 0; t < num_frames; ++t) {
    const std::size_t start = t * static_cast<std::size_t>(frame_shift);
    for (int n = 0; n < fft_size; ++n) {
      buf[n] = padded[start + n] * window[n];
    }
    plan.forward(buf.data());
    for (std::size_t f = 0; f < num_bins; ++f) spec.at(t, f) = buf[f];
  }
  return spec;
}

inline Matrix magnitude(const ComplexSpectrogram& spec) {
  Matrix m(spec.frames, spec.bins);
  for (std::size_t i = 0; i < spec.data.size(); ++i) m.data[i] = std::abs(spec.data[i]);
  return m;
}

// Element-wise argument in (-pi, pi]; phase of 0 is 0 by convention.
inline Matrix phase(const ComplexSpectrogram& spec) {
  Matrix p(spec.frames, spec.bins);
  for (std::size_t i = 0; i < spec.data.size(); ++i) {
    double a = std::arg(spec.data[i]);
    if (a <= -M_PI) a = M_PI;
    p.data[i] = a;
  }
  return p;
}

inline Waveform istft(const Matrix& mag, const Matrix& ph,
                      int frame_shift = kFrameShift, int fft_size = kFftSize,
                      std::size_t out_len = 0, int sample_rate = kDefaultSampleRate) {
  if (!mag.same_shape(ph)) {
    throw std::invalid_argument("istft: magnitude/phase shape mismatch");
  }
  if (fft_size <= 0 || fft_size % 2 != 0 || frame_shift <= 0) {
    throw std::invalid_argument("istft: fft_size must be even and > 0, frame_shift > 0");
  }
  const std::size_t num_bins = static_cast<std::size_t>(fft_size) / 2 + 1;
  if (mag.cols != num_bins) {
    throw std::invalid_argument("istft: expected fft_size/2 + 1 bins");
  }
  const std::size_t pad = static_cast<std::size_t>(fft_size) / 2;
  if (out_len == 0 && mag.rows > 0) {
    out_len = (mag.rows - 1) * static_cast<std::size_t>(frame_shift);
  }

  const std::vector<double> window = make_analysis_window(fft_size);
  const std::size_t padded_len =
      (mag.rows == 0 ? 0 : (mag.rows - 1) * frame_shift + fft_size);
  std::vector<double> num(std::max(padded_len, out_len + 2 * pad), 0.0);
  std::vector<double> den(num.size(), 0.0);

  Fft plan(static_cast<std::size_t>(fft_size));
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(fft_size));
  for (std::size_t t = 0; t < mag.rows; ++t) {
    // Rebuild the full spectrum by conjugate symmetry, then invert.
    for (std::size_t f = 0; f < num_bins; ++f) {
      buf[f] = std::polar(mag(t, f), ph(t, f));
    }
    for (std::size_t f = 1; f + 1 < num_bins; ++f) {
      buf[fft_size - f] = std::conj(buf[f]);
    }
    plan.inverse(buf.data());
    const std::size_t start = t * static_cast<std::size_t>(frame_shift);
    for (int n = 0; n < fft_size; ++n) {
      num[start + n] += buf[n].real() * window[n];
      den[start + n] += window[n] * window[n];
    }
  }

  Waveform out;
  out.sample_rate = sample_rate;
  out.samples.resize(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    out.samples[i] = num[i + pad] / std::max(den[i + pad], kOlaDenomFloor);
  }
  return out;
}

}  // namespace tdnnse

#endif  // TDNNSE_DSP_HPP_
