// include/tdnnse/enhance.hpp

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

#ifndef TDNNSE_ENHANCE_HPP_
#define TDNNSE_ENHANCE_HPP_

#include "tdnnse/dsp.hpp"
#include "tdnnse/mask.hpp"
#include "tdnnse/nn.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

// The full pipeline: STFT, predicted mask on the amplitude spectrum,
// reconstruction with the noisy phase, output length equal to the input.
inline Waveform enhance(const TdnnModel& model, const Waveform& noisy) {
  const ComplexSpectrogram spec = stft(noisy);
  const Matrix noisy_mag = magnitude(spec);
  const Matrix mask = forward(model, noisy_mag);
  const Matrix est_mag = apply_mask(noisy_mag, mask);
  return istft(est_mag, phase(spec), spec.frame_shift, spec.fft_size,
               noisy.samples.size(), noisy.sample_rate);
}

}  // namespace tdnnse

#endif  // TDNNSE_ENHANCE_HPP_
