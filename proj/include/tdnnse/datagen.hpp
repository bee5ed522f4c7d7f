// include/tdnnse/datagen.hpp

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

// Corpus construction: SNR-exact mixing and the three training-pair kinds
// (noisy-to-clean, clean-to-clean, noise-to-silence). Each entry's
// randomness derives from (corpus seed, utterance id), so build order never
// changes the data.

#ifndef TDNNSE_DATAGEN_HPP_
#define TDNNSE_DATAGEN_HPP_

#include <cmath>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tdnnse/errors.hpp"
#include "tdnnse/manifest.hpp"
#include "tdnnse/rng.hpp"
#include "tdnnse/synth.hpp"
#include "tdnnse/wav.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

inline constexpr double kPaperSnrsDb[6] = {-5.0, 0.0, 5.0, 10.0, 15.0, 20.0};

struct MixResult {
  Waveform noisy;
  Waveform noise_used;  // the cropped, scaled noise actually added
  double alpha = 0.0;
};

// Crops the noise at a seeded random offset (cyclic wrap when shorter than
// the clean signal), scales it so that 10*log10(P_clean/P_noise) equals
// snr_db, and adds. Power is measured over the full utterance.
inline MixResult mix_at_snr(const Waveform& clean, const Waveform& noise,
                            double snr_db, std::uint64_t seed) {
  if (clean.sample_rate != noise.sample_rate) {
    throw std::invalid_argument("mix_at_snr: sample rate mismatch");
  }
  if (clean.samples.empty() || noise.samples.empty()) {
    throw std::invalid_argument("mix_at_snr: empty input");
  }
  const double clean_energy = energy(clean);
  if (clean_energy <= 0.0) {
    throw std::invalid_argument("mix_at_snr: clean signal has zero power");
  }
  if (energy(noise) <= 0.0) {
    throw std::invalid_argument("mix_at_snr: noise signal has zero power");
  }

  Rng rng(seed);
  const std::size_t offset = rng.index(noise.samples.size());

  Waveform crop;
  crop.sample_rate = clean.sample_rate;
  crop.samples.resize(clean.samples.size());
  for (std::size_t i = 0; i < crop.samples.size(); ++i) {
    crop.samples[i] = noise.samples[(offset + i) % noise.samples.size()];
  }
  const double crop_energy = energy(crop);
  if (crop_energy <= 0.0) {
    throw std::invalid_argument("mix_at_snr: cropped noise segment has zero power");
  }

  const double alpha =
      std::sqrt(clean_energy / (crop_energy * std::pow(10.0, snr_db / 10.0)));

  MixResult out;
  out.alpha = alpha;
  out.noise_used = crop;
  for (double& v : out.noise_used.samples) v *= alpha;
  out.noisy.sample_rate = clean.sample_rate;
  out.noisy.samples.resize(clean.samples.size());
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    out.noisy.samples[i] = clean.samples[i] + out.noise_used.samples[i];
  }
  return out;
}

enum class PairMode { kNoisyClean, kCleanClean, kNoiseSilence };

inline std::string to_string(PairMode m) {
  switch (m) {
    case PairMode::kNoisyClean: return "noisy_clean";
    case PairMode::kCleanClean: return "clean_clean";
    case PairMode::kNoiseSilence: return "noise_silence";
  }
  return "?";
}

inline PairMode pair_mode_from_string(const std::string& s) {
  if (s == "noisy_clean") return PairMode::kNoisyClean;
  if (s == "clean_clean") return PairMode::kCleanClean;
  if (s == "noise_silence") return PairMode::kNoiseSilence;
  throw std::invalid_argument("unknown pair mode: " + s);
}

struct TrainingPair {
  PairMode kind = PairMode::kNoisyClean;
  std::string id;
  Waveform input;
  Waveform target;
};

namespace detail {

inline Waveform load_corpus_wav(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw DataError("corpus: missing file " + path);
  }
  Waveform w = read_wav(path);
  if (w.sample_rate != kDefaultSampleRate) {
    throw DataError("corpus: " + path + " is " + std::to_string(w.sample_rate) +
                    " Hz; the corpus must be 8000 Hz");
  }
  return w;
}

}  // namespace detail

// Materializes the pair stream for one split. noisy_clean mixes each noisy
// entry; clean_clean and noise_silence take each distinct clean / noise
// file of the split once, in first-appearance order.
inline std::vector<TrainingPair> build_pairs(const CorpusManifest& manifest,
                                             Split split, PairMode mode) {
  std::vector<TrainingPair> pairs;
  std::map<std::string, bool> taken;
  for (const auto& e : manifest.entries) {
    if (e.split != split) continue;
    switch (mode) {
      case PairMode::kNoisyClean: {
        if (!e.has_noise()) break;
        TrainingPair p;
        p.kind = mode;
        p.id = e.id;
        const Waveform clean = detail::load_corpus_wav(e.clean_path);
        const Waveform noise = detail::load_corpus_wav(e.noise_path);
        MixResult mix = mix_at_snr(clean, noise, *e.snr_db,
                                   derive_seed(manifest.seed, e.id));
        p.input = std::move(mix.noisy);
        p.target = clean;
        pairs.push_back(std::move(p));
        break;
      }
      case PairMode::kCleanClean: {
        if (taken.emplace(e.clean_path, true).second) {
          TrainingPair p;
          p.kind = mode;
          p.id = e.id + ":clean";
          p.input = detail::load_corpus_wav(e.clean_path);
          p.target = p.input;
          pairs.push_back(std::move(p));
        }
        break;
      }
      case PairMode::kNoiseSilence: {
        if (!e.has_noise()) break;
        if (taken.emplace(e.noise_path, true).second) {
          TrainingPair p;
          p.kind = mode;
          p.id = e.id + ":noise";
          p.input = detail::load_corpus_wav(e.noise_path);
          p.target.sample_rate = p.input.sample_rate;
          p.target.samples.assign(p.input.samples.size(), 0.0);
          pairs.push_back(std::move(p));
        }
        break;
      }
    }
  }
  return pairs;
}

// --- Synthetic corpus generation ------------------------------------------

enum class SnrAssignment { kExhaustive, kCycle };

struct SynthConfig {
  int train_count = 10;        // clean train utterances
  int valid_count = 3;
  int test_count = 3;
  int noise_count = 3;         // seen noises (train/valid/test)
  int unseen_noise_count = 2;  // extra noises used only in test
  double utterance_seconds = 4.0;
  std::vector<NoiseKind> kinds = {NoiseKind::kWhite, NoiseKind::kPink,
                                  NoiseKind::kBabble};
  std::vector<double> snrs_db = {kPaperSnrsDb[0], kPaperSnrsDb[1], kPaperSnrsDb[2],
                                 kPaperSnrsDb[3], kPaperSnrsDb[4], kPaperSnrsDb[5]};
  // Exhaustive: every train clean x every noise x every SNR. Cycle: one
  // noisy entry per clean, noises and SNRs cycled.
  SnrAssignment train_assignment = SnrAssignment::kExhaustive;
  std::uint64_t seed = 1234;
};

struct SynthCounts {
  int clean_files = 0;
  int noise_files = 0;
  int train_entries = 0;
  int valid_entries = 0;
  int test_entries = 0;
};

// Writes WAVs under out_dir/{clean,noise}/ plus out_dir/manifest.tsv; the
// whole tree is a pure function of the config.
inline SynthCounts generate_corpus(const SynthConfig& cfg,
                                   const std::filesystem::path& out_dir,
                                   CorpusManifest* manifest_out = nullptr) {
  if (cfg.train_count <= 0 || cfg.valid_count < 0 || cfg.test_count < 0) {
    throw std::invalid_argument("generate_corpus: utterance counts must be positive");
  }
  if (cfg.noise_count <= 0 || cfg.kinds.empty()) {
    throw std::invalid_argument("generate_corpus: need at least one noise");
  }
  if (cfg.utterance_seconds <= 0.0) {
    throw std::invalid_argument("generate_corpus: utterance_seconds must be > 0");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "clean", ec);
  std::filesystem::create_directories(out_dir / "noise", ec);
  if (!std::filesystem::is_directory(out_dir / "clean") ||
      !std::filesystem::is_directory(out_dir / "noise")) {
    throw DataError("generate_corpus: cannot create directories under " +
                    out_dir.string());
  }

  SynthCounts counts;
  CorpusManifest m;
  m.seed = cfg.seed;
  std::vector<std::string> rel_cleans, rel_noises;

  struct CleanFile {
    std::string id;
    std::string rel;
    std::string abs;
  };

  auto make_cleans = [&](Split split, int n) {
    std::vector<CleanFile> files;
    const std::string tag = to_string(split);
    for (int i = 0; i < n; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s_%03d", tag.c_str(), i);
      CleanFile f;
      f.id = name;
      f.rel = "clean/" + std::string(name) + ".wav";
      f.abs = (out_dir / f.rel).string();
      Waveform w = synth_speechlike(cfg.utterance_seconds,
                                    derive_seed(cfg.seed, "clean:" + f.id));
      write_wav_pcm16(f.abs, w);
      ++counts.clean_files;
      files.push_back(std::move(f));
    }
    return files;
  };

  struct NoiseFile {
    std::string rel;
    std::string abs;
    bool unseen;
  };
  std::vector<NoiseFile> seen_noises, unseen_noises;
  for (int i = 0; i < cfg.noise_count + cfg.unseen_noise_count; ++i) {
    const bool unseen = i >= cfg.noise_count;
    const NoiseKind kind = cfg.kinds[i % cfg.kinds.size()];
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%s_%03d", unseen ? "unseen" : "seen",
                  to_string(kind).c_str(), i);
    NoiseFile f;
    f.rel = "noise/" + std::string(name) + ".wav";
    f.abs = (out_dir / f.rel).string();
    f.unseen = unseen;
    Waveform w = synth_noise(kind, cfg.utterance_seconds,
                             derive_seed(cfg.seed, "noise:" + std::string(name)));
    write_wav_pcm16(f.abs, w);
    ++counts.noise_files;
    (unseen ? unseen_noises : seen_noises).push_back(std::move(f));
  }

  auto push_entry = [&](const std::string& id, Split split, const CleanFile& clean,
                        const NoiseFile* noise, std::optional<double> snr) {
    ManifestEntry e;
    e.id = id;
    e.split = split;
    e.clean_path = clean.abs;
    if (noise != nullptr) {
      e.noise_path = noise->abs;
      e.unseen_noise = noise->unseen;
    }
    e.snr_db = snr;
    m.entries.push_back(e);
    rel_cleans.push_back(clean.rel);
    rel_noises.push_back(noise ? noise->rel : std::string("-"));
  };

  // Train: exhaustive expansion or one cycled entry per clean utterance.
  const auto train_cleans = make_cleans(Split::kTrain, cfg.train_count);
  if (cfg.train_assignment == SnrAssignment::kExhaustive) {
    for (const auto& c : train_cleans) {
      for (std::size_t ni = 0; ni < seen_noises.size(); ++ni) {
        for (std::size_t si = 0; si < cfg.snrs_db.size(); ++si) {
          char id[96];
          std::snprintf(id, sizeof(id), "%s_n%02zu_s%02zu", c.id.c_str(), ni, si);
          push_entry(id, Split::kTrain, c, &seen_noises[ni], cfg.snrs_db[si]);
          ++counts.train_entries;
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < train_cleans.size(); ++i) {
      const auto& c = train_cleans[i];
      const auto& n = seen_noises[i % seen_noises.size()];
      const double snr = cfg.snrs_db[i % cfg.snrs_db.size()];
      push_entry(c.id + "_mix", Split::kTrain, c, &n, snr);
      ++counts.train_entries;
    }
  }

  // Valid: seeded-random noise and SNR, one entry per clean utterance.
  const auto valid_cleans = make_cleans(Split::kValid, cfg.valid_count);
  Rng valid_rng(derive_seed(cfg.seed, "valid-assign"));
  for (const auto& c : valid_cleans) {
    const auto& n = seen_noises[valid_rng.index(seen_noises.size())];
    const double snr = cfg.snrs_db[valid_rng.index(cfg.snrs_db.size())];
    push_entry(c.id + "_mix", Split::kValid, c, &n, snr);
    ++counts.valid_entries;
  }

  // Test: cycle SNRs; alternate between seen and unseen noises when the
  // latter exist, mirroring the seen/unseen evaluation conditions.
  const auto test_cleans = make_cleans(Split::kTest, cfg.test_count);
  for (std::size_t i = 0; i < test_cleans.size(); ++i) {
    const auto& c = test_cleans[i];
    const NoiseFile* n = nullptr;
    if (!unseen_noises.empty() && (i % 2 == 1)) {
      n = &unseen_noises[(i / 2) % unseen_noises.size()];
    } else {
      n = &seen_noises[(i / 2) % seen_noises.size()];
    }
    const double snr = cfg.snrs_db[i % cfg.snrs_db.size()];
    push_entry(c.id + "_mix", Split::kTest, c, n, snr);
    ++counts.test_entries;
  }

  validate_manifest(m);
  write_manifest((out_dir / "manifest.tsv").string(), m, &rel_cleans, &rel_noises);
  if (manifest_out != nullptr) *manifest_out = m;
  return counts;
}

}  // namespace tdnnse

#endif  // TDNNSE_DATAGEN_HPP_
