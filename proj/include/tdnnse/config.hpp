// include/tdnnse/config.hpp

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

// Run configuration: line-oriented `section.key = value` text. Sections:
// model (preset/contexts/hidden_dim/seed), train (stages/learning_rate/
// batch), data (manifest or synthesis parameters), io (out_dir). '#'
// comments and blank lines are ignored; unknown keys are errors.

#ifndef TDNNSE_CONFIG_HPP_
#define TDNNSE_CONFIG_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tdnnse/datagen.hpp"
#include "tdnnse/errors.hpp"
#include "tdnnse/nn.hpp"
#include "tdnnse/trainer.hpp"

namespace tdnnse {

struct RunConfig {
  // model
  std::string preset = "tdnn-f";
  std::vector<Context> explicit_contexts;  // overrides preset when non-empty
  int hidden_dim = kDefaultHiddenDim;
  std::uint64_t seed = 1234;
  // train
  StagePlan plan = StagePlan::default_plan();
  double learning_rate = kDefaultLearningRate;
  int batch = 1;
  // data
  std::string manifest_path;
  SynthConfig synth;
  // io
  std::string out_dir = ".";

  std::vector<Context> contexts() const {
    return explicit_contexts.empty() ? preset_contexts(preset) : explicit_contexts;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  std::size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

// "(-1,1),(-1,1),(0,0)" -> context list
inline std::vector<Context> parse_contexts(const std::string& text) {
  std::vector<Context> out;
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (s[pos] != '(') throw std::invalid_argument("contexts: expected '(' in " + text);
    const std::size_t close = s.find(')', pos);
    if (close == std::string::npos) {
      throw std::invalid_argument("contexts: missing ')' in " + text);
    }
    const std::string pair = s.substr(pos + 1, close - pos - 1);
    const std::size_t comma = pair.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("contexts: expected 'left,right' in " + text);
    }
    Context ctx;
    ctx.left = std::stoi(pair.substr(0, comma));
    ctx.right = std::stoi(pair.substr(comma + 1));
    validate_context(ctx);
    out.push_back(ctx);
    pos = close + 1;
    if (pos < s.size() && s[pos] == ',') ++pos;
  }
  if (out.empty()) throw std::invalid_argument("contexts: empty list");
  return out;
}

// "noisy_clean:30,clean_clean:5"
inline StagePlan parse_stages(const std::string& text) {
  StagePlan plan;
  for (const std::string& item : split_list(text, ',')) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("stages: expected mode:epochs, got '" + item + "'");
    }
    Stage st;
    st.mode = pair_mode_from_string(trim(item.substr(0, colon)));
    st.epochs = std::stoi(item.substr(colon + 1));
    plan.stages.push_back(st);
  }
  validate_plan(plan);
  return plan;
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text,
                                   const std::string& origin = "<config>") {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw DataError(origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = detail::trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty()) fail("empty key or value");

    try {
      if (key == "model.preset") {
        find_preset(value);  // must name a known row
        cfg.preset = value;
      } else if (key == "model.contexts") {
        cfg.explicit_contexts = detail::parse_contexts(value);
      } else if (key == "model.hidden_dim") {
        cfg.hidden_dim = std::stoi(value);
        if (cfg.hidden_dim < 1) fail("hidden_dim must be >= 1");
      } else if (key == "model.seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "train.stages") {
        cfg.plan = detail::parse_stages(value);
      } else if (key == "train.learning_rate") {
        cfg.learning_rate = std::stod(value);
        if (!(cfg.learning_rate > 0.0)) fail("learning_rate must be > 0");
      } else if (key == "train.batch") {
        cfg.batch = std::stoi(value);
        if (cfg.batch < 1) fail("batch must be >= 1");
      } else if (key == "data.manifest") {
        cfg.manifest_path = value;
      } else if (key == "data.train_count") {
        cfg.synth.train_count = std::stoi(value);
      } else if (key == "data.valid_count") {
        cfg.synth.valid_count = std::stoi(value);
      } else if (key == "data.test_count") {
        cfg.synth.test_count = std::stoi(value);
      } else if (key == "data.noise_count") {
        cfg.synth.noise_count = std::stoi(value);
      } else if (key == "data.unseen_noise_count") {
        cfg.synth.unseen_noise_count = std::stoi(value);
      } else if (key == "data.utterance_seconds") {
        cfg.synth.utterance_seconds = std::stod(value);
      } else if (key == "data.noise_kinds") {
        cfg.synth.kinds.clear();
        for (const auto& k : detail::split_list(value, ',')) {
          cfg.synth.kinds.push_back(noise_kind_from_string(k));
        }
      } else if (key == "data.snrs") {
        cfg.synth.snrs_db.clear();
        for (const auto& v : detail::split_list(value, ',')) {
          cfg.synth.snrs_db.push_back(std::stod(v));
        }
        if (cfg.synth.snrs_db.empty()) fail("empty SNR list");
      } else if (key == "data.snr_mode") {
        if (value == "exhaustive") {
          cfg.synth.train_assignment = SnrAssignment::kExhaustive;
        } else if (value == "cycle") {
          cfg.synth.train_assignment = SnrAssignment::kCycle;
        } else {
          fail("snr_mode must be exhaustive or cycle");
        }
      } else if (key == "io.out_dir") {
        cfg.out_dir = value;
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      fail(std::string(e.what()));
    }
  }
  cfg.synth.seed = cfg.seed;
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace tdnnse

#endif  // TDNNSE_CONFIG_HPP_
