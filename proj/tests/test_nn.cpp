// tests/test_nn.cpp

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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <fstream>

#include "tdnnse/mask.hpp"
#include "tdnnse/model_io.hpp"
#include "tdnnse/nn.hpp"
#include "tdnnse/optimizer.hpp"
#include "test_util.hpp"

using namespace tdnnse;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                     double lo = 0.0, double hi = 1.0) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

// Independent forward oracle: evaluates each node as an explicit sum over
// delays and source nodes, layer by layer, without any splicing machinery.
Matrix naive_forward(const TdnnModel& model, const Matrix& mag) {
  Matrix x(mag.rows, mag.cols);
  for (std::size_t t = 0; t < mag.rows; ++t) {
    for (std::size_t f = 0; f < mag.cols; ++f) {
      x(t, f) = (mag(t, f) - model.norm_mean[f]) / model.norm_std[f];
    }
  }
  for (const TdnnLayer& layer : model.layers) {
    const long T = static_cast<long>(x.rows);
    const std::size_t prev_dim = x.cols;
    Matrix y(x.rows, layer.out_dim());
    for (long t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < layer.out_dim(); ++i) {
        double acc = layer.bias[i];
        for (int k = layer.context.left; k <= layer.context.right; ++k) {
          const long src = std::clamp<long>(t + k, 0, T - 1);
          for (std::size_t j = 0; j < prev_dim; ++j) {
            const std::size_t col =
                static_cast<std::size_t>(k - layer.context.left) * prev_dim + j;
            acc += x(static_cast<std::size_t>(src), j) * layer.weight(i, col);
          }
        }
        y(t, i) = (layer.activation == Activation::kRelu) ? std::max(acc, 0.0) : acc;
      }
    }
    x = std::move(y);
  }
  return x;
}

TdnnModel random_model(const std::vector<Context>& ctx, std::size_t in_dim,
                       std::size_t hidden, std::size_t out_dim, std::uint64_t seed) {
  TdnnModel m = build_model(ctx, in_dim, hidden, out_dim);
  init_weights(m, seed);
  Rng rng(derive_seed(seed, "bias"));
  for (auto& l : m.layers) {
    for (double& b : l.bias) b = rng.uniform(-0.1, 0.1);
  }
  return m;
}

}  // namespace

TEST_CASE("splice matches the hand-enumerated example") {
  Matrix f(3, 1);
  f(0, 0) = 1;
  f(1, 0) = 2;
  f(2, 0) = 3;
  Matrix s = splice(f, {-1, 1});
  REQUIRE(s.rows == 3);
  REQUIRE(s.cols == 3);
  const double expect[3][3] = {{1, 1, 2}, {1, 2, 3}, {2, 3, 3}};
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t c = 0; c < 3; ++c) REQUIRE(s(t, c) == expect[t][c]);
  }

  // Identity context is a no-op.
  Matrix g = random_matrix(5, 4, 77);
  Matrix s0 = splice(g, {0, 0});
  REQUIRE(s0.data == g.data);
}

TEST_CASE("splice windowing localizes input perturbations") {
  Matrix f = random_matrix(12, 3, 5);
  const Context ctx{-2, 1};
  Matrix base = splice(f, ctx);
  const std::size_t t0 = 6;
  Matrix fp = f;
  for (std::size_t c = 0; c < f.cols; ++c) fp(t0, c) += 1.0;
  Matrix pert = splice(fp, ctx);
  for (std::size_t t = 0; t < f.rows; ++t) {
    bool changed = false;
    for (std::size_t c = 0; c < base.cols; ++c) {
      if (base(t, c) != pert(t, c)) changed = true;
    }
    const long d = static_cast<long>(t0) - static_cast<long>(t);
    const bool expected = (d >= ctx.left && d <= ctx.right);
    REQUIRE(changed == expected);
  }
}

TEST_CASE("forward identity network passes normalized input through") {
  TdnnModel m = build_model({{0, 0}}, 4, 4, 4, Activation::kRelu, Activation::kRelu);
  for (std::size_t i = 0; i < 4; ++i) m.layers[0].weight(i, i) = 1.0;
  Matrix in = random_matrix(6, 4, 9, 0.0, 2.0);  // nonnegative input
  Matrix out = forward(m, in);
  REQUIRE(out.data == in.data);
}

TEST_CASE("forward of an all-zero model is zero") {
  TdnnModel m = build_model({{-1, 1}, {0, 0}}, 5, 7, 5);
  Matrix in = random_matrix(4, 5, 10);
  Matrix out = forward(m, in);
  for (double v : out.data) REQUIRE(v == 0.0);
}

TEST_CASE("forward matches the per-node oracle on random models") {
  for (std::uint64_t trial = 0; trial < 6; ++trial) {
    TdnnModel m = random_model({{-2, 2}, {-1, 3}, {0, 0}}, 6, 8, 6, 100 + trial);
    Rng rng(trial);
    std::vector<double> mean(6), sd(6);
    for (auto& v : mean) v = rng.uniform(-0.5, 0.5);
    for (auto& v : sd) v = rng.uniform(0.5, 2.0);
    set_input_norm(m, mean, sd);

    Matrix in = random_matrix(9, 6, 200 + trial, 0.0, 3.0);
    Matrix got = forward(m, in);
    Matrix expect = naive_forward(m, in);
    REQUIRE(got.rows == expect.rows);
    for (std::size_t i = 0; i < got.size(); ++i) {
      REQUIRE(got.data[i] == Catch::Approx(expect.data[i]).margin(1e-9).epsilon(1e-9));
    }
  }
}

TEST_CASE("forward output is nonnegative and deterministic") {
  TdnnModel m = random_model({{-1, 1}, {0, 0}}, 5, 6, 5, 42);
  Matrix in = random_matrix(7, 5, 43, 0.0, 2.0);
  Matrix a = forward(m, in);
  Matrix b = forward(m, in);
  REQUIRE(a.data == b.data);
  for (double v : a.data) REQUIRE(v >= 0.0);
}

TEST_CASE("contexts of (0,0) reduce to a frame-wise dense network") {
  TdnnModel m = random_model({{0, 0}, {0, 0}, {0, 0}}, 5, 9, 5, 55);
  Matrix in = random_matrix(6, 5, 56, 0.0, 2.0);
  Matrix got = forward(m, in);

  // Splicing-free dense evaluation, one frame at a time.
  for (std::size_t t = 0; t < in.rows; ++t) {
    std::vector<double> x(in.cols);
    for (std::size_t f = 0; f < in.cols; ++f) {
      x[f] = (in(t, f) - m.norm_mean[f]) / m.norm_std[f];
    }
    for (const auto& layer : m.layers) {
      std::vector<double> y(layer.out_dim());
      for (std::size_t o = 0; o < y.size(); ++o) {
        double acc = layer.bias[o];
        for (std::size_t j = 0; j < x.size(); ++j) acc += layer.weight(o, j) * x[j];
        y[o] = layer.activation == Activation::kRelu ? std::max(acc, 0.0) : acc;
      }
      x = std::move(y);
    }
    for (std::size_t o = 0; o < x.size(); ++o) {
      REQUIRE(got(t, o) == Catch::Approx(x[o]).margin(1e-12).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss is zero at the exact minimum and gradients vanish") {
  TdnnModel m = random_model({{-1, 1}, {0, 0}}, 4, 5, 4, 77);
  Matrix noisy = random_matrix(6, 4, 78, 0.1, 2.0);
  Matrix mask = forward(m, noisy);
  Matrix clean = apply_mask(noisy, mask);

  ParamSet grads = zeros_like(m);
  const double loss = forward_backward(m, noisy, clean, grads);
  REQUIRE(loss == 0.0);
  for (const auto& w : grads.weights) {
    for (double v : w.data) REQUIRE(v == 0.0);
  }
  for (const auto& b : grads.biases) {
    for (double v : b) REQUIRE(v == 0.0);
  }
}

TEST_CASE("analytic gradients match central finite differences") {
  TdnnModel m = random_model({{-1, 1}, {-2, 2}, {0, 0}}, 6, 8, 6, 3001);
  Matrix noisy = random_matrix(8, 6, 3002, 0.1, 2.0);
  Matrix clean = random_matrix(8, 6, 3003, 0.1, 2.0);

  ParamSet grads = zeros_like(m);
  forward_backward(m, noisy, clean, grads);

  auto loss_at = [&]() {
    return signal_mse(noisy, forward(m, noisy), clean);
  };

  std::size_t checked = 0;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    auto check_param = [&](double& theta, double analytic) {
      const double h = 1e-4 * std::max(1.0, std::fabs(theta));
      const double orig = theta;
      theta = orig + h;
      const double lp = loss_at();
      theta = orig - h;
      const double lm = loss_at();
      theta = orig;
      const double fd = (lp - lm) / (2.0 * h);
      const double denom = std::max(std::fabs(analytic) + std::fabs(fd), 1e-6);
      REQUIRE(std::fabs(analytic - fd) / denom < 1e-4);
      ++checked;
    };
    // Sampled subset per layer keeps this fast; the acceptance suite sweeps
    // every parameter on the spec's reference shape.
    Rng pick(9000 + li);
    for (int s = 0; s < 40; ++s) {
      const std::size_t idx = pick.index(m.layers[li].weight.size());
      check_param(m.layers[li].weight.data[idx], grads.weights[li].data[idx]);
    }
    for (int s = 0; s < 6; ++s) {
      const std::size_t idx = pick.index(m.layers[li].bias.size());
      check_param(m.layers[li].bias[idx], grads.biases[li][idx]);
    }
  }
  REQUIRE(checked > 100);
}

TEST_CASE("loss is quadratically homogeneous in the magnitudes") {
  // Constant-output network: zero weights, positive output bias.
  TdnnModel m = build_model({{-1, 1}, {0, 0}}, 4, 5, 4);
  for (double& b : m.layers.back().bias) b = 0.8;

  Matrix noisy = random_matrix(5, 4, 81, 0.1, 2.0);
  Matrix clean = random_matrix(5, 4, 82, 0.1, 2.0);
  Matrix noisy2 = noisy, clean2 = clean;
  for (double& v : noisy2.data) v *= 2.0;
  for (double& v : clean2.data) v *= 2.0;

  ParamSet g1 = zeros_like(m), g2 = zeros_like(m);
  const double l1 = forward_backward(m, noisy, clean, g1);
  const double l2 = forward_backward(m, noisy2, clean2, g2);
  REQUIRE(l2 == Catch::Approx(4.0 * l1).epsilon(1e-12));
}

TEST_CASE("receptive field equals the summed layer contexts") {
  for (const char* name : {"tdnn-f", "dnn"}) {
    const ContextPreset& preset = find_preset(name);
    // Linear activations expose the pure splicing structure.
    TdnnModel m = build_model(preset_contexts(name), 8, 6, 8, Activation::kLinear,
                              Activation::kLinear);
    init_weights(m, 7);
    const int total_l = m.total_left_context();
    const int total_r = m.total_right_context();
    REQUIRE(total_l == -preset.network_context);
    REQUIRE(total_r == preset.network_context);

    Matrix in = random_matrix(40, 8, 91, 0.0, 1.0);
    Matrix base = forward(m, in);
    const std::size_t t0 = 20;
    Matrix pert = in;
    for (std::size_t c = 0; c < in.cols; ++c) pert(t0, c) += 0.7;
    Matrix out = forward(m, pert);

    for (std::size_t t = 0; t < in.rows; ++t) {
      bool changed = false;
      for (std::size_t c = 0; c < base.cols; ++c) {
        if (base(t, c) != out(t, c)) changed = true;
      }
      const long d = static_cast<long>(t0) - static_cast<long>(t);
      const bool expected = (d >= total_l && d <= total_r);
      REQUIRE(changed == expected);
    }
  }
}

TEST_CASE("every preset's declared network context is the layer sum") {
  for (const auto& p : kContextPresets) {
    int l = 0, r = 0;
    for (const auto& c : p.layers) {
      l += c.left;
      r += c.right;
    }
    REQUIRE(l == -p.network_context);
    REQUIRE(r == p.network_context);
  }
  REQUIRE_THROWS_AS(preset_contexts("tdnn-z"), std::invalid_argument);
}

TEST_CASE("adam first step moves by -lr * sign(g)") {
  TdnnModel m = build_model({{0, 0}}, 2, 2, 2);
  AdamState st = make_adam(m);
  ParamSet g = zeros_like(m);
  g.weights[0](0, 0) = 10.0;
  g.weights[0](1, 1) = -10.0;
  adam_step(m, g, st);
  REQUIRE(st.step_count == 1);
  REQUIRE(std::fabs(m.layers[0].weight(0, 0) + st.learning_rate) < 1e-12);
  REQUIRE(std::fabs(m.layers[0].weight(1, 1) - st.learning_rate) < 1e-12);
  REQUIRE(m.layers[0].weight(0, 1) == 0.0);
}

TEST_CASE("adam with zero gradients leaves parameters unchanged") {
  TdnnModel m = random_model({{0, 0}}, 3, 3, 3, 5);
  const Matrix before = m.layers[0].weight;
  AdamState st = make_adam(m);
  ParamSet g = zeros_like(m);
  adam_step(m, g, st);
  adam_step(m, g, st);
  REQUIRE(st.step_count == 2);
  REQUIRE(m.layers[0].weight.data == before.data);
}

TEST_CASE("two adam steps with constant gradient move at most 2*lr") {
  TdnnModel m = build_model({{0, 0}}, 2, 2, 2);
  AdamState st = make_adam(m);
  ParamSet g = zeros_like(m);
  for (double& v : g.weights[0].data) v = 0.37;
  adam_step(m, g, st);
  adam_step(m, g, st);
  for (double v : m.layers[0].weight.data) {
    REQUIRE(std::fabs(v) <= 2.0 * st.learning_rate + 1e-15);
  }
}

TEST_CASE("learning rate scales by 0.7 only on dev-loss increases") {
  TdnnModel m = build_model({{0, 0}}, 2, 2, 2);
  AdamState st = make_adam(m, 0.0005);
  lr_update(st, 0.5, 0.6);
  REQUIRE(st.learning_rate == Catch::Approx(0.00035).epsilon(1e-12));
  lr_update(st, 0.5, 0.5);
  REQUIRE(st.learning_rate == Catch::Approx(0.00035).epsilon(1e-12));

  AdamState st3 = make_adam(m, 0.0005);
  for (int i = 0; i < 3; ++i) lr_update(st3, 0.5, 0.6);
  REQUIRE(st3.learning_rate == Catch::Approx(0.0005 * 0.7 * 0.7 * 0.7).epsilon(1e-12));
}

TEST_CASE("model save/load round trip is bit exact") {
  tdnnse::testing::TempDir dir("model_io");
  TdnnModel m = random_model({{-2, 2}, {-1, 1}, {0, 0}}, 9, 12, 9, 404);
  Rng rng(405);
  std::vector<double> mean(9), sd(9);
  for (auto& v : mean) v = rng.uniform(-1.0, 1.0);
  for (auto& v : sd) v = rng.uniform(0.5, 2.0);
  set_input_norm(m, mean, sd);

  const std::string path = dir.str("model.tdnn");
  save_model(m, path);
  TdnnModel back = load_model(path);

  REQUIRE(back.layers.size() == m.layers.size());
  REQUIRE(std::memcmp(back.norm_mean.data(), m.norm_mean.data(),
                      m.norm_mean.size() * sizeof(double)) == 0);
  REQUIRE(std::memcmp(back.norm_std.data(), m.norm_std.data(),
                      m.norm_std.size() * sizeof(double)) == 0);
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    REQUIRE(back.layers[i].context.left == m.layers[i].context.left);
    REQUIRE(back.layers[i].context.right == m.layers[i].context.right);
    REQUIRE(back.layers[i].activation == m.layers[i].activation);
    REQUIRE(std::memcmp(back.layers[i].weight.data.data(),
                        m.layers[i].weight.data.data(),
                        m.layers[i].weight.size() * sizeof(double)) == 0);
    REQUIRE(std::memcmp(back.layers[i].bias.data(), m.layers[i].bias.data(),
                        m.layers[i].bias.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("truncated model files and version mismatches are rejected") {
  tdnnse::testing::TempDir dir("model_io_err");
  TdnnModel m = random_model({{-1, 1}, {0, 0}}, 4, 5, 4, 31);
  const std::string path = dir.str("model.tdnn");
  save_model(m, path);

  // Truncate to 60% of the file.
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), {});
  in.close();
  const std::string cut_path = dir.str("cut.tdnn");
  std::ofstream cut(cut_path, std::ios::binary);
  cut.write(bytes.data(), static_cast<std::streamsize>(bytes.size() * 6 / 10));
  cut.close();
  REQUIRE_THROWS_WITH(load_model(cut_path), Catch::Matchers::ContainsSubstring("byte"));

  // Patch the version field (bytes 4..7).
  std::string vbytes = bytes;
  vbytes[4] = 9;
  const std::string ver_path = dir.str("ver.tdnn");
  std::ofstream ver(ver_path, std::ios::binary);
  ver.write(vbytes.data(), static_cast<std::streamsize>(vbytes.size()));
  ver.close();
  try {
    load_model(ver_path);
    FAIL("expected a version error");
  } catch (const DataError& e) {
    const std::string what = e.what();
    REQUIRE(what.find("version 9") != std::string::npos);
    REQUIRE(what.find("version 1") != std::string::npos);
  }
}

TEST_CASE("forward rejects mismatched input dimensions") {
  TdnnModel m = build_model({{0, 0}}, 4, 4, 4);
  Matrix in(3, 5, 0.0);
  REQUIRE_THROWS_AS(forward(m, in), std::invalid_argument);
}
