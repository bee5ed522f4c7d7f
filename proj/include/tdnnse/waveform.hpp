// include/tdnnse/waveform.hpp

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

#ifndef TDNNSE_WAVEFORM_HPP_
#define TDNNSE_WAVEFORM_HPP_

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdnnse {

inline constexpr int kDefaultSampleRate = 8000;

// Mono sampled audio, nominally in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline void validate(const Waveform& w, const std::string& what = "waveform") {
  if (w.sample_rate <= 0) {
    throw std::invalid_argument(what + ": sample rate must be > 0");
  }
  for (double v : w.samples) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument(what + ": non-finite sample");
    }
  }
}

// Sum of squared samples.
inline double energy(const Waveform& w) {
  double e = 0.0;
  for (double v : w.samples) e += v * v;
  return e;
}

inline double peak(const Waveform& w) {
  double p = 0.0;
  for (double v : w.samples) p = std::max(p, std::fabs(v));
  return p;
}

}  // namespace tdnnse

#endif  // TDNNSE_WAVEFORM_HPP_
