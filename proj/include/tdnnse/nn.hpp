// include/tdnnse/nn.hpp

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

// Time-delay network core. Each layer consumes a contiguous window of
// time-shifted copies of the previous layer's output rows ("splicing") and
// feeds them through one affine map, which realizes the per-node sum over
// delays with a single weight matrix. Edge frames replicate.

#ifndef TDNNSE_NN_HPP_
#define TDNNSE_NN_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnnse/matrix.hpp"
#include "tdnnse/rng.hpp"

namespace tdnnse {

inline constexpr int kNumBins = 129;          // fft_size/2 + 1 at 256
inline constexpr int kDefaultHiddenDim = 256;
inline constexpr double kNormStdFloor = 1e-8;

enum class Activation : std::uint8_t { kLinear = 0, kRelu = 1 };

// Frame-offset window [left, right], left <= 0 <= right.
struct Context {
  int left = 0;
  int right = 0;
  int width() const { return right - left + 1; }
};

inline void validate_context(const Context& c) {
  if (c.left > 0 || c.right < 0) {
    throw std::invalid_argument("context: requires left <= 0 <= right");
  }
}

struct TdnnLayer {
  Context context;
  Matrix weight;             // out_dim x (prev_dim * context.width())
  std::vector<double> bias;  // out_dim
  Activation activation = Activation::kRelu;

  std::size_t out_dim() const { return weight.rows; }
  std::size_t in_dim_total() const { return weight.cols; }
};

struct TdnnModel {
  std::vector<TdnnLayer> layers;
  // Per-frequency input statistics, frozen into the model so inference
  // matches training.
  std::vector<double> norm_mean;
  std::vector<double> norm_std;

  std::size_t input_dim() const { return norm_mean.size(); }
  std::size_t output_dim() const {
    return layers.empty() ? 0 : layers.back().out_dim();
  }
  int total_left_context() const {
    int s = 0;
    for (const auto& l : layers) s += l.context.left;
    return s;
  }
  int total_right_context() const {
    int s = 0;
    for (const auto& l : layers) s += l.context.right;
    return s;
  }
};

inline void validate_model(const TdnnModel& model) {
  if (model.layers.empty()) throw std::invalid_argument("model: no layers");
  if (model.norm_mean.size() != model.norm_std.size()) {
    throw std::invalid_argument("model: normalization vector size mismatch");
  }
  for (double s : model.norm_std) {
    if (!(s >= kNormStdFloor)) {
      throw std::invalid_argument("model: normalization std below floor");
    }
  }
  std::size_t prev_dim = model.input_dim();
  for (std::size_t i = 0; i < model.layers.size(); ++i) {
    const TdnnLayer& l = model.layers[i];
    validate_context(l.context);
    const std::size_t expect = prev_dim * static_cast<std::size_t>(l.context.width());
    if (l.weight.cols != expect) {
      throw std::invalid_argument("model: layer " + std::to_string(i) +
                                  " weight cols " + std::to_string(l.weight.cols) +
                                  " != prev_dim * width " + std::to_string(expect));
    }
    if (l.bias.size() != l.weight.rows) {
      throw std::invalid_argument("model: layer " + std::to_string(i) + " bias size mismatch");
    }
    if (!l.weight.all_finite()) {
      throw std::invalid_argument("model: layer " + std::to_string(i) + " non-finite weight");
    }
    prev_dim = l.out_dim();
  }
}

// --- Layerwise context presets ------------------------------------------

struct ContextPreset {
  const char* name;
  int network_context;  // declared total, equals the sum of layer windows
  Context layers[5];    // four hidden layers plus the output layer
};

// The DNN row is the degenerate configuration: all context at layer 1.
inline constexpr ContextPreset kContextPresets[] = {
    {"dnn",    8,  {{-8, 8}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}},
    {"tdnn-a", 11, {{-4, 4}, {-3, 3}, {-2, 2}, {-2, 2}, {0, 0}}},
    {"tdnn-b", 10, {{-2, 2}, {-2, 2}, {-2, 2}, {-4, 4}, {0, 0}}},
    {"tdnn-c", 9,  {{-2, 2}, {-1, 1}, {-2, 2}, {-4, 4}, {0, 0}}},
    {"tdnn-d", 8,  {{-2, 2}, {-2, 2}, {-2, 2}, {-2, 2}, {0, 0}}},
    {"tdnn-e", 7,  {{-1, 1}, {-2, 2}, {-2, 2}, {-2, 2}, {0, 0}}},
    {"tdnn-f", 6,  {{-1, 1}, {-1, 1}, {-2, 2}, {-2, 2}, {0, 0}}},
};

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kContextPresets) names.emplace_back(p.name);
  return names;
}

inline const ContextPreset& find_preset(const std::string& name) {
  for (const auto& p : kContextPresets) {
    if (name == p.name) return p;
  }
  throw std::invalid_argument("unknown context preset: " + name);
}

inline std::vector<Context> preset_contexts(const std::string& name) {
  const ContextPreset& p = find_preset(name);
  return std::vector<Context>(p.layers, p.layers + 5);
}

// --- Construction --------------------------------------------------------

// Hidden layers take `hidden_dim` nodes; the last context entry is the
// output layer. All parameters start at zero; norm is identity.
inline TdnnModel build_model(const std::vector<Context>& contexts,
                             std::size_t input_dim = kNumBins,
                             std::size_t hidden_dim = kDefaultHiddenDim,
                             std::size_t output_dim = kNumBins,
                             Activation hidden_act = Activation::kRelu,
                             Activation output_act = Activation::kRelu) {
  if (contexts.empty()) throw std::invalid_argument("build_model: no contexts");
  TdnnModel model;
  model.norm_mean.assign(input_dim, 0.0);
  model.norm_std.assign(input_dim, 1.0);
  std::size_t prev = input_dim;
  for (std::size_t i = 0; i < contexts.size(); ++i) {
    validate_context(contexts[i]);
    const bool last = (i + 1 == contexts.size());
    TdnnLayer layer;
    layer.context = contexts[i];
    const std::size_t out = last ? output_dim : hidden_dim;
    layer.weight = Matrix(out, prev * static_cast<std::size_t>(contexts[i].width()));
    layer.bias.assign(out, 0.0);
    layer.activation = last ? output_act : hidden_act;
    model.layers.push_back(std::move(layer));
    prev = out;
  }
  return model;
}

// Uniform +-sqrt(6/(fan_in+fan_out)) init, reproducible from the seed.
inline void init_weights(TdnnModel& model, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "weight-init"));
  for (TdnnLayer& l : model.layers) {
    const double bound =
        std::sqrt(6.0 / static_cast<double>(l.weight.cols + l.weight.rows));
    for (double& w : l.weight.data) w = rng.uniform(-bound, bound);
    std::fill(l.bias.begin(), l.bias.end(), 0.0);
  }
}

inline void set_input_norm(TdnnModel& model, std::vector<double> mean,
                           std::vector<double> std_dev) {
  if (mean.size() != model.input_dim() || std_dev.size() != model.input_dim()) {
    throw std::invalid_argument("set_input_norm: dimension mismatch");
  }
  for (double& s : std_dev) s = std::max(s, kNormStdFloor);
  model.norm_mean = std::move(mean);
  model.norm_std = std::move(std_dev);
}

// --- Forward / backward ---------------------------------------------------

// Row t of the result concatenates feature rows t+left .. t+right, with
// out-of-range rows replaced by the nearest edge row.
inline Matrix splice(const Matrix& features, const Context& context) {
  validate_context(context);
  const std::size_t num_frames = features.rows;
  const std::size_t dim = features.cols;
  const int width = context.width();
  Matrix out(num_frames, dim * static_cast<std::size_t>(width));
  if (num_frames == 0) return out;
  for (std::size_t t = 0; t < num_frames; ++t) {
    double* dst = out.row(t);
    for (int k = context.left; k <= context.right; ++k) {
      const long src_idx = std::clamp<long>(static_cast<long>(t) + k, 0,
                                            static_cast<long>(num_frames) - 1);
      const double* src = features.row(static_cast<std::size_t>(src_idx));
      std::copy(src, src + dim, dst + static_cast<std::size_t>(k - context.left) * dim);
    }
  }
  return out;
}

namespace detail {

inline void apply_activation(Matrix& m, Activation act) {
  if (act == Activation::kRelu) {
    for (double& v : m.data) v = v > 0.0 ? v : 0.0;
  }
}

inline Matrix normalize_input(const TdnnModel& model, const Matrix& mag) {
  if (mag.cols != model.input_dim()) {
    throw std::invalid_argument("forward: input has " + std::to_string(mag.cols) +
                                " bins, model expects " +
                                std::to_string(model.input_dim()));
  }
  Matrix x(mag.rows, mag.cols);
  for (std::size_t t = 0; t < mag.rows; ++t) {
    const double* src = mag.row(t);
    double* dst = x.row(t);
    for (std::size_t f = 0; f < mag.cols; ++f) {
      dst[f] = (src[f] - model.norm_mean[f]) / model.norm_std[f];
    }
  }
  return x;
}

// z = spliced * W^T + bias
inline Matrix affine(const TdnnLayer& layer, const Matrix& spliced) {
  Matrix z(spliced.rows, layer.out_dim());
  for (std::size_t t = 0; t < spliced.rows; ++t) {
    const double* in = spliced.row(t);
    double* out = z.row(t);
    for (std::size_t o = 0; o < layer.out_dim(); ++o) {
      out[o] = layer.bias[o] + dot(layer.weight.row(o), in, layer.weight.cols);
    }
  }
  return z;
}

}  // namespace detail

inline Matrix forward(const TdnnModel& model, const Matrix& noisy_mag) {
  Matrix x = detail::normalize_input(model, noisy_mag);
  for (const TdnnLayer& layer : model.layers) {
    Matrix spliced = splice(x, layer.context);
    x = detail::affine(layer, spliced);
    detail::apply_activation(x, layer.activation);
  }
  return x;
}

// Parameter-shaped container; used for gradients and optimizer moments.
struct ParamSet {
  std::vector<Matrix> weights;
  std::vector<std::vector<double>> biases;
};

inline ParamSet zeros_like(const TdnnModel& model) {
  ParamSet p;
  for (const TdnnLayer& l : model.layers) {
    p.weights.emplace_back(l.weight.rows, l.weight.cols);
    p.biases.emplace_back(l.bias.size(), 0.0);
  }
  return p;
}

// Loss = mean over bins of (|Y| . M - |X|)^2, with exact reverse-mode
// gradients for every weight and bias. Returns the loss; accumulates into
// `grads` (callers zero it or reuse it for batch accumulation).
inline double forward_backward(const TdnnModel& model, const Matrix& noisy_mag,
                               const Matrix& clean_mag, ParamSet& grads) {
  if (!noisy_mag.same_shape(clean_mag)) {
    throw std::invalid_argument("forward_backward: noisy/clean shape mismatch");
  }
  if (grads.weights.size() != model.layers.size()) {
    throw std::invalid_argument("forward_backward: gradient holder shape mismatch");
  }
  const std::size_t num_layers = model.layers.size();

  // Forward, keeping each layer's spliced input and activation output.
  std::vector<Matrix> spliced(num_layers);
  std::vector<Matrix> activations(num_layers);
  Matrix x = detail::normalize_input(model, noisy_mag);
  for (std::size_t i = 0; i < num_layers; ++i) {
    spliced[i] = splice(x, model.layers[i].context);
    x = detail::affine(model.layers[i], spliced[i]);
    detail::apply_activation(x, model.layers[i].activation);
    activations[i] = x;
  }

  const Matrix& mask = activations.back();
  const double scale = 1.0 / static_cast<double>(noisy_mag.size());
  double loss = 0.0;
  // d(loss)/d(mask): 2/(T*F) * (|Y|.M - |X|) . |Y|
  Matrix grad(mask.rows, mask.cols);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const double est = noisy_mag.data[i] * mask.data[i];
    const double diff = est - clean_mag.data[i];
    loss += diff * diff;
    grad.data[i] = 2.0 * scale * diff * noisy_mag.data[i];
  }
  loss *= scale;

  for (std::size_t li = num_layers; li-- > 0;) {
    const TdnnLayer& layer = model.layers[li];
    // Through the activation. ReLU derivative is 0 at and below zero; the
    // stored activation is positive exactly where the pre-activation was.
    if (layer.activation == Activation::kRelu) {
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!(activations[li].data[i] > 0.0)) grad.data[i] = 0.0;
      }
    }
    Matrix& dw = grads.weights[li];
    std::vector<double>& db = grads.biases[li];
    const Matrix& sp = spliced[li];
    for (std::size_t t = 0; t < grad.rows; ++t) {
      const double* g = grad.row(t);
      const double* in = sp.row(t);
      for (std::size_t o = 0; o < layer.out_dim(); ++o) {
        if (g[o] != 0.0) axpy(g[o], in, dw.row(o), dw.cols);
        db[o] += g[o];
      }
    }
    if (li == 0) break;

    // d(spliced) = grad * W, then fold the time-shifted blocks back onto
    // the previous layer's output rows (edge rows accumulate the clamped
    // copies).
    const std::size_t prev_dim = model.layers[li - 1].out_dim();
    Matrix dprev(grad.rows, prev_dim);
    for (std::size_t t = 0; t < grad.rows; ++t) {
      const double* g = grad.row(t);
      for (std::size_t o = 0; o < layer.out_dim(); ++o) {
        if (g[o] == 0.0) continue;
        const double* wrow = layer.weight.row(o);
        for (int k = layer.context.left; k <= layer.context.right; ++k) {
          const long src = std::clamp<long>(static_cast<long>(t) + k, 0,
                                            static_cast<long>(grad.rows) - 1);
          axpy(g[o], wrow + static_cast<std::size_t>(k - layer.context.left) * prev_dim,
               dprev.row(static_cast<std::size_t>(src)), prev_dim);
        }
      }
    }
    grad = std::move(dprev);
  }
  return loss;
}

}  // namespace tdnnse

#endif  // TDNNSE_NN_HPP_
