// tests/test_util.hpp

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

#ifndef TDNNSE_TESTS_TEST_UTIL_HPP_
#define TDNNSE_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <string>

#include "tdnnse/rng.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse::testing {

inline Waveform random_waveform(std::size_t len, std::uint64_t seed,
                                int sample_rate = kDefaultSampleRate) {
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(len);
  Rng rng(seed);
  for (double& s : w.samples) s = rng.uniform(-1.0, 1.0);
  return w;
}

// Unique scratch directory under the current working directory, removed on
// destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::absolute("tmp_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path_.string() : (path_ / rel).string();
  }

 private:
  std::filesystem::path path_;
};

}  // namespace tdnnse::testing

#endif  // TDNNSE_TESTS_TEST_UTIL_HPP_
