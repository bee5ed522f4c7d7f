// include/tdnnse/fft.hpp

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

#ifndef TDNNSE_FFT_HPP_
#define TDNNSE_FFT_HPP_

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tdnnse {

// Iterative radix-2 complex FFT with precomputed twiddles and bit-reversal
// table. Sizes are powers of two (256-point analysis frames, 512-point
// metric frames).
class Fft {
 public:
  explicit Fft(std::size_t n) : n_(n) {
    if (n < 2 || (n & (n - 1)) != 0) {
      throw std::invalid_argument("Fft: size must be a power of two >= 2");
    }
    bitrev_.resize(n);
    std::size_t log2n = 0;
    while ((1u << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) {
        if (i & (1u << b)) r |= 1u << (log2n - 1 - b);
      }
      bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
    }
  }

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* x) const { transform(x, false); }

  // Inverse transform including the 1/n scaling.
  void inverse(std::complex<double>* x) const {
    transform(x, true);
    const double inv = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] *= inv;
  }

  void forward(std::vector<std::complex<double>>& x) const {
    check_len(x.size());
    forward(x.data());
  }
  void inverse(std::vector<std::complex<double>>& x) const {
    check_len(x.size());
    inverse(x.data());
  }

 private:
  void check_len(std::size_t len) const {
    if (len != n_) throw std::invalid_argument("Fft: buffer length mismatch");
  }

  void transform(std::complex<double>* x, bool invert) const {
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t j = bitrev_[i];
      if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          std::complex<double> w = twiddle_[k * stride];
          if (invert) w = std::conj(w);
          const std::complex<double> u = x[start + k];
          const std::complex<double> v = x[start + k + half] * w;
          x[start + k] = u + v;
          x[start + k + half] = u - v;
        }
      }
    }
  }

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

}  // namespace tdnnse

#endif  // TDNNSE_FFT_HPP_
