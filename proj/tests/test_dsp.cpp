// tests/test_dsp.cpp

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

#include <complex>
#include <vector>

#include "tdnnse/dsp.hpp"
#include "tdnnse/fft.hpp"
#include "test_util.hpp"

using namespace tdnnse;

namespace {

// Naive DFT sum, the independent oracle for the FFT and for stft frames.
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      acc += x[m] * std::polar(1.0, -2.0 * M_PI * static_cast<double>(k * m) / n);
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("fft matches the naive DFT sum") {
  for (std::size_t n : {16u, 64u, 256u}) {
    Fft plan(n);
    Rng rng(91 + n);
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto expect = naive_dft(x);
    auto got = x;
    plan.forward(got.data());
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(got[k] - expect[k]) < 1e-9);
    }
    plan.inverse(got.data());
    for (std::size_t k = 0; k < n; ++k) {
      REQUIRE(std::abs(got[k] - x[k]) < 1e-12);
    }
  }
}

TEST_CASE("analysis window is periodic Hamming") {
  auto w = make_analysis_window(256);
  REQUIRE(w[0] == Catch::Approx(0.08).margin(1e-15));
  REQUIRE(w[128] == Catch::Approx(1.0).margin(1e-15));

  auto w4 = make_analysis_window(4);
  const std::vector<double> expect = {0.08, 0.54, 1.0, 0.54};
  for (int i = 0; i < 4; ++i) REQUIRE(w4[i] == Catch::Approx(expect[i]).margin(1e-12));

  REQUIRE_THROWS_AS(make_analysis_window(0), std::invalid_argument);
  REQUIRE_THROWS_AS(make_analysis_window(255), std::invalid_argument);
  REQUIRE_THROWS_AS(make_analysis_window(-4), std::invalid_argument);
}

TEST_CASE("stft frame matches a hand-rolled windowed DFT") {
  auto wave = tdnnse::testing::random_waveform(2000, 7);
  auto spec = stft(wave);
  REQUIRE(spec.bins == 129);
  REQUIRE(spec.frames == frame_count(wave.size(), kFrameShift));

  // Rebuild frame 5 from scratch: reflect padding, periodic Hamming, DFT sum.
  const std::size_t pad = 128;
  std::vector<double> padded(wave.size() + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) padded[i] = wave.samples[pad - i];
  for (std::size_t i = 0; i < wave.size(); ++i) padded[pad + i] = wave.samples[i];
  for (std::size_t i = 0; i < pad; ++i) {
    padded[pad + wave.size() + i] = wave.samples[wave.size() - 2 - i];
  }
  const std::size_t t = 5;
  std::vector<std::complex<double>> frame(256);
  for (int n = 0; n < 256; ++n) {
    const double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / 256.0);
    frame[n] = padded[t * 128 + n] * w;
  }
  auto expect = naive_dft(frame);
  for (std::size_t f = 0; f < 129; ++f) {
    REQUIRE(std::abs(spec.at(t, f) - expect[f]) < 1e-9);
  }
}

TEST_CASE("stft of a bin-centered sine peaks at that bin") {
  const int k = 16;  // 500 Hz at 8 kHz with a 256-point transform
  Waveform wave;
  wave.samples.resize(4096);
  for (std::size_t n = 0; n < wave.size(); ++n) {
    wave.samples[n] = std::sin(2.0 * M_PI * k * static_cast<double>(n) / 256.0);
  }
  auto mag = magnitude(stft(wave));
  for (std::size_t t = 2; t + 2 < mag.rows; ++t) {
    std::size_t argmax = 0;
    for (std::size_t f = 1; f < mag.cols; ++f) {
      if (mag(t, f) > mag(t, argmax)) argmax = f;
    }
    REQUIRE(argmax == static_cast<std::size_t>(k));
  }
}

TEST_CASE("stft of silence is zero and empty input throws") {
  Waveform wave;
  wave.samples.assign(1024, 0.0);
  auto spec = stft(wave);
  for (const auto& v : spec.data) REQUIRE(std::abs(v) == 0.0);

  Waveform empty;
  REQUIRE_THROWS_AS(stft(empty), std::invalid_argument);
}

TEST_CASE("stft is linear") {
  auto x = tdnnse::testing::random_waveform(3000, 11);
  auto y = tdnnse::testing::random_waveform(3000, 12);
  const double a = 0.7, b = -1.3;
  Waveform mix;
  mix.samples.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mix.samples[i] = a * x.samples[i] + b * y.samples[i];
  }
  auto sx = stft(x), sy = stft(y), sm = stft(mix);
  double max_err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < sm.data.size(); ++i) {
    max_err = std::max(max_err, std::abs(sm.data[i] - (a * sx.data[i] + b * sy.data[i])));
    scale = std::max(scale, std::abs(sm.data[i]));
  }
  REQUIRE(max_err < 1e-10 * scale);
}

TEST_CASE("magnitude and phase recompose the spectrogram") {
  auto spec = stft(tdnnse::testing::random_waveform(2048, 3));
  auto mag = magnitude(spec);
  auto ph = phase(spec);

  double worst = 0.0;
  for (std::size_t t = 0; t < spec.frames; ++t) {
    for (std::size_t f = 0; f < spec.bins; ++f) {
      REQUIRE(ph(t, f) > -M_PI);
      REQUIRE(ph(t, f) <= M_PI);
      const auto z = std::polar(mag(t, f), ph(t, f));
      const double denom = std::max(std::abs(spec.at(t, f)), 1e-30);
      worst = std::max(worst, std::abs(z - spec.at(t, f)) / denom);
    }
  }
  REQUIRE(worst < 1e-12);

  // Pythagorean triple and the zero convention.
  ComplexSpectrogram one;
  one.frames = 1;
  one.bins = 2;
  one.data = {{3.0, 4.0}, {0.0, 0.0}};
  REQUIRE(magnitude(one)(0, 0) == Catch::Approx(5.0).margin(1e-15));
  REQUIRE(phase(one)(0, 0) == Catch::Approx(std::atan2(4.0, 3.0)).margin(1e-15));
  REQUIRE(magnitude(one)(0, 1) == 0.0);
  REQUIRE(phase(one)(0, 1) == 0.0);
}

TEST_CASE("istft round trip reconstructs interior samples") {
  auto wave = tdnnse::testing::random_waveform(4096, 21);
  auto spec = stft(wave);
  auto rec = istft(magnitude(spec), phase(spec), kFrameShift, kFftSize, wave.size());
  REQUIRE(rec.size() == wave.size());

  double worst = 0.0;
  for (std::size_t i = 256; i + 256 < wave.size(); ++i) {
    worst = std::max(worst, std::abs(rec.samples[i] - wave.samples[i]) /
                                std::max(std::abs(wave.samples[i]), 1e-6));
  }
  REQUIRE(worst < 1e-6);
}

TEST_CASE("istft of zero magnitude is silence; shape mismatch throws") {
  Matrix mag(10, 129, 0.0);
  Matrix ph(10, 129, 0.0);
  auto out = istft(mag, ph, kFrameShift, kFftSize, 1280);
  for (double v : out.samples) REQUIRE(v == 0.0);

  Matrix bad(9, 129, 0.0);
  REQUIRE_THROWS_AS(istft(mag, bad, kFrameShift, kFftSize, 1280), std::invalid_argument);
}

TEST_CASE("round trip holds across many seeded waveforms") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t len = 1024 + 173 * seed;
    auto wave = tdnnse::testing::random_waveform(len, 1000 + seed);
    auto spec = stft(wave);
    auto rec = istft(magnitude(spec), phase(spec), kFrameShift, kFftSize, len);
    for (std::size_t i = 256; i + 256 < len; ++i) {
      REQUIRE(std::abs(rec.samples[i] - wave.samples[i]) /
                  std::max(std::abs(wave.samples[i]), 1e-6) <
              1e-6);
    }
  }
}
