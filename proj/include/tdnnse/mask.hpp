// include/tdnnse/mask.hpp

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

// Mask arithmetic: the ideal amplitude mask, mask application, and the
// signal-approximation MSE that training differentiates.

#ifndef TDNNSE_MASK_HPP_
#define TDNNSE_MASK_HPP_

#include <algorithm>
#include <stdexcept>

#include "tdnnse/matrix.hpp"

namespace tdnnse {

inline constexpr double kIamDenomFloor = 1e-8;
inline constexpr double kIamCeiling = 10.0;

// |X| / |Y| with a floored denominator, clamped to [0, kIamCeiling]. The
// clamp only affects diagnostics: training targets the signal itself, not
// this ratio.
inline Matrix compute_iam(const Matrix& clean_mag, const Matrix& noisy_mag) {
  if (!clean_mag.same_shape(noisy_mag)) {
    throw std::invalid_argument("compute_iam: shape mismatch");
  }
  Matrix mask(clean_mag.rows, clean_mag.cols);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double r = clean_mag.data[i] / std::max(noisy_mag.data[i], kIamDenomFloor);
    mask.data[i] = std::clamp(r, 0.0, kIamCeiling);
  }
  return mask;
}

inline Matrix apply_mask(const Matrix& noisy_mag, const Matrix& mask) {
  if (!noisy_mag.same_shape(mask)) {
    throw std::invalid_argument("apply_mask: shape mismatch");
  }
  Matrix out(noisy_mag.rows, noisy_mag.cols);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.data[i] = noisy_mag.data[i] * mask.data[i];
  }
  return out;
}

// Mean over all T*F bins of (|Y| . M - |X|)^2.
inline double signal_mse(const Matrix& noisy_mag, const Matrix& mask,
                         const Matrix& clean_mag) {
  if (!noisy_mag.same_shape(mask) || !noisy_mag.same_shape(clean_mag)) {
    throw std::invalid_argument("signal_mse: shape mismatch");
  }
  if (noisy_mag.size() == 0) {
    throw std::invalid_argument("signal_mse: empty plane");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < noisy_mag.size(); ++i) {
    const double d = noisy_mag.data[i] * mask.data[i] - clean_mag.data[i];
    acc += d * d;
  }
  return acc / static_cast<double>(noisy_mag.size());
}

}  // namespace tdnnse

#endif  // TDNNSE_MASK_HPP_
