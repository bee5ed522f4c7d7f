// include/tdnnse/manifest.hpp

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

// Line-oriented corpus manifest, one entry per line:
//   id <TAB> split <TAB> clean_path <TAB> noise_path|- <TAB> snr_db|- <TAB> seen|unseen
// Lines starting with '#' are comments; `#seed=N` records the corpus seed so
// that mixing offsets are a pure function of the manifest file. Relative
// paths resolve against the manifest's directory.

#ifndef TDNNSE_MANIFEST_HPP_
#define TDNNSE_MANIFEST_HPP_

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tdnnse/errors.hpp"

namespace tdnnse {

enum class Split { kTrain, kValid, kTest };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kValid: return "valid";
    case Split::kTest: return "test";
  }
  return "?";
}

inline Split split_from_string(const std::string& s) {
  if (s == "train") return Split::kTrain;
  if (s == "valid") return Split::kValid;
  if (s == "test") return Split::kTest;
  throw std::invalid_argument("unknown split: " + s);
}

struct ManifestEntry {
  std::string id;
  Split split = Split::kTrain;
  std::string clean_path;          // resolved, absolute or manifest-relative
  std::string noise_path;          // empty for clean-only entries
  std::optional<double> snr_db;
  bool unseen_noise = false;

  bool has_noise() const { return !noise_path.empty(); }
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;
  std::uint64_t seed = 0;

  std::vector<ManifestEntry> split_entries(Split s) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries) {
      if (e.split == s) out.push_back(e);
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline std::string format_snr(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace detail

// Structural validation: unique ids, split-disjoint clean utterances, and
// no unseen-flagged noise in train/valid. File existence is checked when
// `base` is non-empty (load time).
inline void validate_manifest(const CorpusManifest& m,
                              const std::filesystem::path& base = {}) {
  std::set<std::string> ids;
  std::map<std::string, Split> clean_split;
  std::set<std::string> unseen_noises;
  for (const auto& e : m.entries) {
    if (!ids.insert(e.id).second) {
      throw DataError("manifest: duplicate id " + e.id);
    }
    auto [it, fresh] = clean_split.emplace(e.clean_path, e.split);
    if (!fresh && it->second != e.split) {
      throw DataError("manifest: clean utterance " + e.clean_path +
                      " appears in more than one split");
    }
    if (e.has_noise() && e.unseen_noise) unseen_noises.insert(e.noise_path);
  }
  for (const auto& e : m.entries) {
    if (e.has_noise() && e.split != Split::kTest &&
        unseen_noises.count(e.noise_path) > 0) {
      throw DataError("manifest: unseen noise " + e.noise_path +
                      " is used outside the test split (entry " + e.id + ")");
    }
  }
  if (!base.empty()) {
    for (const auto& e : m.entries) {
      if (!std::filesystem::exists(e.clean_path)) {
        throw DataError("manifest: missing clean file " + e.clean_path);
      }
      if (e.has_noise() && !std::filesystem::exists(e.noise_path)) {
        throw DataError("manifest: missing noise file " + e.noise_path);
      }
    }
  }
}

inline CorpusManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_manifest: cannot open " + path);
  const std::filesystem::path base = std::filesystem::path(path).parent_path();

  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  CorpusManifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#seed=", 0) == 0) {
        try {
          m.seed = std::stoull(line.substr(6));
        } catch (const std::exception&) {
          throw DataError(path + ":" + std::to_string(lineno) + ": bad seed comment");
        }
      }
      continue;
    }
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 6) {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected 6 tab-separated fields, got " +
                      std::to_string(fields.size()));
    }
    ManifestEntry e;
    e.id = fields[0];
    try {
      e.split = split_from_string(fields[1]);
    } catch (const std::invalid_argument& ex) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + ex.what());
    }
    if (e.id.empty() || fields[2].empty()) {
      throw DataError(path + ":" + std::to_string(lineno) + ": empty id or clean path");
    }
    e.clean_path = resolve(fields[2]);
    if (fields[3] != "-") e.noise_path = resolve(fields[3]);
    if (fields[4] != "-") {
      try {
        std::size_t used = 0;
        e.snr_db = std::stod(fields[4], &used);
        if (used != fields[4].size()) throw std::invalid_argument(fields[4]);
      } catch (const std::exception&) {
        throw DataError(path + ":" + std::to_string(lineno) + ": bad SNR value '" + fields[4] + "'");
      }
    }
    if (e.has_noise() != e.snr_db.has_value()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": noise path and SNR must be both set or both '-'");
    }
    if (fields[5] == "seen") {
      e.unseen_noise = false;
    } else if (fields[5] == "unseen") {
      e.unseen_noise = true;
    } else {
      throw DataError(path + ":" + std::to_string(lineno) + ": expected seen|unseen, got '" +
                      fields[5] + "'");
    }
    m.entries.push_back(std::move(e));
  }
  validate_manifest(m, base);
  return m;
}

// Paths are written as given (generate_corpus writes manifest-relative ones).
inline void write_manifest(const std::string& path, const CorpusManifest& m,
                           const std::vector<std::string>* relative_cleans = nullptr,
                           const std::vector<std::string>* relative_noises = nullptr) {
  std::ofstream out(path, std::ios::binary);  // binary: stable newlines
  if (!out) throw DataError("write_manifest: cannot open " + path + " for writing");
  out << "#seed=" << m.seed << "\n";
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    const auto& e = m.entries[i];
    const std::string clean = relative_cleans ? (*relative_cleans)[i] : e.clean_path;
    const std::string noise =
        e.has_noise() ? (relative_noises ? (*relative_noises)[i] : e.noise_path)
                      : std::string("-");
    out << e.id << '\t' << to_string(e.split) << '\t' << clean << '\t' << noise
        << '\t' << (e.snr_db ? detail::format_snr(*e.snr_db) : std::string("-"))
        << '\t' << (e.unseen_noise ? "unseen" : "seen") << "\n";
  }
  if (!out) throw DataError("write_manifest: write failed for " + path);
}

}  // namespace tdnnse

#endif  // TDNNSE_MANIFEST_HPP_
