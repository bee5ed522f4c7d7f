// include/tdnnse/resample.hpp

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

#ifndef TDNNSE_RESAMPLE_HPP_
#define TDNNSE_RESAMPLE_HPP_

#include <cmath>
#include <stdexcept>

#include "tdnnse/waveform.hpp"

namespace tdnnse {

namespace detail {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

// Blackman taper on [-1, 1].
inline double blackman(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return 0.42 + 0.5 * std::cos(M_PI * x) + 0.08 * std::cos(2.0 * M_PI * x);
}

}  // namespace detail

// Windowed-sinc interpolation to a higher sample rate (upsampling keeps the
// cutoff at the source Nyquist, so the kernel is a pure windowed sinc).
// `taps` input samples contribute to each output sample.
inline Waveform resample_sinc(const Waveform& in, int target_rate, int taps = 32) {
  if (target_rate <= 0) throw std::invalid_argument("resample_sinc: bad target rate");
  if (in.sample_rate == target_rate) return in;
  if (target_rate < in.sample_rate) {
    throw std::invalid_argument("resample_sinc: only upsampling is supported");
  }
  if (taps < 4 || taps % 2 != 0) {
    throw std::invalid_argument("resample_sinc: taps must be even and >= 4");
  }

  const double ratio = static_cast<double>(in.sample_rate) / target_rate;
  const std::size_t out_len =
      (in.samples.size() * static_cast<std::size_t>(target_rate)) /
      static_cast<std::size_t>(in.sample_rate);
  const int half = taps / 2;

  Waveform out;
  out.sample_rate = target_rate;
  out.samples.resize(out_len);
  const long n_in = static_cast<long>(in.samples.size());
  for (std::size_t m = 0; m < out_len; ++m) {
    const double t = static_cast<double>(m) * ratio;
    const long base = static_cast<long>(std::floor(t));
    double acc = 0.0;
    for (long k = base - half + 1; k <= base + half; ++k) {
      if (k < 0 || k >= n_in) continue;  // zero beyond the edges
      const double d = static_cast<double>(k) - t;
      acc += in.samples[static_cast<std::size_t>(k)] * detail::sinc(d) *
             detail::blackman(d / half);
    }
    out.samples[m] = acc;
  }
  return out;
}

}  // namespace tdnnse

#endif  // TDNNSE_RESAMPLE_HPP_
