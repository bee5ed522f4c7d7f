// tests/test_mask.cpp

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

#include "tdnnse/mask.hpp"
#include "tdnnse/rng.hpp"

using namespace tdnnse;

namespace {

Matrix random_plane(std::size_t rows, std::size_t cols, std::uint64_t seed,
                    double lo, double hi) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (double& v : m.data) v = rng.uniform(lo, hi);
  return m;
}

}  // namespace

TEST_CASE("ideal amplitude mask basics") {
  Matrix clean = random_plane(4, 5, 1, 0.1, 2.0);

  // Clean-to-clean: ratio of equals is one.
  Matrix m1 = compute_iam(clean, clean);
  for (double v : m1.data) REQUIRE(v == 1.0);

  // Noise-to-silence: zero numerator.
  Matrix zeros(4, 5, 0.0);
  Matrix m0 = compute_iam(zeros, clean);
  for (double v : m0.data) REQUIRE(v == 0.0);

  Matrix two(1, 1, 2.0), four(1, 1, 4.0);
  REQUIRE(compute_iam(two, four)(0, 0) == 0.5);

  // Silent noisy bins hit the clamp ceiling instead of dividing by zero.
  Matrix silent(1, 1, 0.0), loud(1, 1, 3.0);
  REQUIRE(compute_iam(loud, silent)(0, 0) == kIamCeiling);

  Matrix bad(3, 5, 0.0);
  REQUIRE_THROWS_AS(compute_iam(bad, clean), std::invalid_argument);
}

TEST_CASE("apply_mask identities") {
  Matrix noisy = random_plane(3, 4, 2, 0.0, 2.0);
  Matrix ones(3, 4, 1.0);
  Matrix zeros(3, 4, 0.0);

  REQUIRE(apply_mask(noisy, ones).data == noisy.data);
  for (double v : apply_mask(noisy, zeros).data) REQUIRE(v == 0.0);

  Matrix four(1, 1, 4.0), half(1, 1, 0.5);
  REQUIRE(apply_mask(four, half)(0, 0) == 2.0);

  REQUIRE_THROWS_AS(apply_mask(noisy, Matrix(2, 4, 1.0)), std::invalid_argument);
}

TEST_CASE("apply_mask is bilinear in each argument") {
  Matrix a = random_plane(3, 4, 5, 0.0, 2.0);
  Matrix b = random_plane(3, 4, 6, 0.0, 2.0);
  Matrix mask = random_plane(3, 4, 7, 0.0, 2.0);
  Matrix sum(3, 4);
  for (std::size_t i = 0; i < sum.size(); ++i) sum.data[i] = 2.0 * a.data[i] + 3.0 * b.data[i];
  Matrix lhs = apply_mask(sum, mask);
  Matrix ra = apply_mask(a, mask), rb = apply_mask(b, mask);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    REQUIRE(lhs.data[i] ==
            Catch::Approx(2.0 * ra.data[i] + 3.0 * rb.data[i]).margin(1e-12));
  }
}

TEST_CASE("signal_mse hand example and identities") {
  Matrix noisy(1, 2);
  noisy(0, 0) = 2.0;
  noisy(0, 1) = 2.0;
  Matrix mask(1, 2);
  mask(0, 0) = 1.0;
  mask(0, 1) = 0.5;
  Matrix clean(1, 2, 1.0);
  REQUIRE(signal_mse(noisy, mask, clean) == 0.5);

  // Zero mask leaves mean(|X|^2).
  Matrix zeros(1, 2, 0.0);
  REQUIRE(signal_mse(noisy, zeros, clean) == 1.0);

  REQUIRE_THROWS_AS(signal_mse(noisy, mask, Matrix(2, 2, 0.0)), std::invalid_argument);
}

TEST_CASE("IAM is the exact minimizer away from the clamp") {
  Matrix noisy = random_plane(6, 7, 11, 0.5, 2.0);
  Matrix clean = random_plane(6, 7, 12, 0.0, 3.0);  // IAM stays below 10 here
  Matrix iam = compute_iam(clean, noisy);
  REQUIRE(signal_mse(noisy, iam, clean) < 1e-20);

  // Nonnegative, zero iff exact match.
  Matrix other = random_plane(6, 7, 13, 0.0, 2.0);
  REQUIRE(signal_mse(noisy, other, clean) >= 0.0);
}
