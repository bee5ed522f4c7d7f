// include/tdnnse/optimizer.hpp

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

#ifndef TDNNSE_OPTIMIZER_HPP_
#define TDNNSE_OPTIMIZER_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "tdnnse/nn.hpp"

namespace tdnnse {

inline constexpr double kDefaultLearningRate = 0.0005;
inline constexpr double kLearningRateDecay = 0.7;

struct AdamState {
  double learning_rate = kDefaultLearningRate;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step_count = 0;
  ParamSet m;  // first moment
  ParamSet v;  // second moment
};

inline AdamState make_adam(const TdnnModel& model,
                           double learning_rate = kDefaultLearningRate) {
  AdamState s;
  s.learning_rate = learning_rate;
  s.m = zeros_like(model);
  s.v = zeros_like(model);
  return s;
}

namespace detail {

inline void adam_update_span(double* param, const double* grad, double* m,
                             double* v, std::size_t n, const AdamState& s,
                             double corr1, double corr2) {
  for (std::size_t i = 0; i < n; ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
    const double m_hat = m[i] / corr1;
    const double v_hat = v[i] / corr2;
    param[i] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

}  // namespace detail

// Standard Adam with bias correction; increments the step counter.
inline void adam_step(TdnnModel& model, const ParamSet& grads, AdamState& state) {
  if (grads.weights.size() != model.layers.size() ||
      state.m.weights.size() != model.layers.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  state.step_count += 1;
  const double corr1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  const double corr2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  for (std::size_t li = 0; li < model.layers.size(); ++li) {
    TdnnLayer& layer = model.layers[li];
    detail::adam_update_span(layer.weight.data.data(), grads.weights[li].data.data(),
                             state.m.weights[li].data.data(),
                             state.v.weights[li].data.data(), layer.weight.size(),
                             state, corr1, corr2);
    detail::adam_update_span(layer.bias.data(), grads.biases[li].data(),
                             state.m.biases[li].data(), state.v.biases[li].data(),
                             layer.bias.size(), state, corr1, corr2);
  }
}

// Scale the rate down when the objective got worse on the development set.
inline void lr_update(AdamState& state, double prev_dev_loss, double curr_dev_loss) {
  if (!std::isfinite(prev_dev_loss) || !std::isfinite(curr_dev_loss)) return;
  if (curr_dev_loss > prev_dev_loss) {
    state.learning_rate *= kLearningRateDecay;
  }
}

}  // namespace tdnnse

#endif  // TDNNSE_OPTIMIZER_HPP_
