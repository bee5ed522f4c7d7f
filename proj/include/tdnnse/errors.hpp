// include/tdnnse/errors.hpp

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

#ifndef TDNNSE_ERRORS_HPP_
#define TDNNSE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace tdnnse {

// Bad or missing external data: unreadable files, malformed manifests,
// unsupported WAV formats, model files that fail to parse.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values where the numerics must stay finite (e.g. a diverged
// training loss).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tdnnse

#endif  // TDNNSE_ERRORS_HPP_
