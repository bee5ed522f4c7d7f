// include/tdnnse/wav.hpp

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

// Minimal RIFF/WAVE reader and writer: mono, PCM 16-bit or IEEE float
// 32-bit. Unknown chunks are skipped. Writes are deterministic
// (round-to-nearest, no dither).

#ifndef TDNNSE_WAV_HPP_
#define TDNNSE_WAV_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tdnnse/errors.hpp"
#include "tdnnse/waveform.hpp"

namespace tdnnse {

namespace detail {

inline std::uint32_t le_u32(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint16_t le_u16(const unsigned char* b) {
  return static_cast<std::uint16_t>(static_cast<std::uint16_t>(b[0]) |
                                    (static_cast<std::uint16_t>(b[1]) << 8));
}

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace detail

inline Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("read_wav: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError("read_wav: " + path + " is not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t sample_rate = 0;
  const unsigned char* data_ptr = nullptr;
  std::uint32_t data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = detail::le_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw DataError("read_wav: " + path + " has a truncated chunk");
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw DataError("read_wav: " + path + " fmt chunk too short");
      format = detail::le_u16(bytes.data() + body);
      channels = detail::le_u16(bytes.data() + body + 2);
      sample_rate = detail::le_u32(bytes.data() + body + 4);
      bits = detail::le_u16(bytes.data() + body + 14);
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_ptr = bytes.data() + body;
      data_len = chunk_len;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (format == 0 || data_ptr == nullptr) {
    throw DataError("read_wav: " + path + " is missing fmt or data chunk");
  }
  if (channels != 1) {
    throw DataError("read_wav: " + path + " has " + std::to_string(channels) +
                    " channels (mono required)");
  }

  Waveform w;
  w.sample_rate = static_cast<int>(sample_rate);
  if (format == 1 && bits == 16) {
    const std::size_t n = data_len / 2;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int16_t s =
          static_cast<std::int16_t>(detail::le_u16(data_ptr + 2 * i));
      w.samples[i] = static_cast<double>(s) / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    const std::size_t n = data_len / 4;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = detail::le_u32(data_ptr + 4 * i);
      const float f = std::bit_cast<float>(u);
      if (!std::isfinite(f)) {
        throw DataError("read_wav: " + path + " contains non-finite samples");
      }
      w.samples[i] = static_cast<double>(f);
    }
  } else {
    throw DataError("read_wav: " + path + " format tag " + std::to_string(format) +
                    "/" + std::to_string(bits) +
                    " bit unsupported (PCM16 or float32 required)");
  }
  return w;
}

namespace detail {

inline std::string wav_header(std::uint16_t format, std::uint16_t bits,
                              std::uint32_t sample_rate, std::uint32_t data_bytes) {
  std::string out;
  out.reserve(44);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, format);
  put_u16(out, 1);  // mono
  put_u32(out, sample_rate);
  const std::uint32_t block = bits / 8u;
  put_u32(out, sample_rate * block);
  put_u16(out, static_cast<std::uint16_t>(block));
  put_u16(out, bits);
  out += "data";
  put_u32(out, data_bytes);
  return out;
}

}  // namespace detail

// 16-bit PCM; samples are clipped to [-1, 1] and rounded to nearest.
inline void write_wav_pcm16(const std::string& path, const Waveform& wave) {
  validate(wave, "write_wav_pcm16");
  std::string out = detail::wav_header(
      1, 16, static_cast<std::uint32_t>(wave.sample_rate),
      static_cast<std::uint32_t>(wave.samples.size() * 2));
  for (double v : wave.samples) {
    const double clipped = std::clamp(v, -1.0, 1.0);
    const long q = std::lround(clipped * 32767.0);
    detail::put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("write_wav_pcm16: cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write_wav_pcm16: write failed for " + path);
}

inline void write_wav_float32(const std::string& path, const Waveform& wave) {
  validate(wave, "write_wav_float32");
  std::string out = detail::wav_header(
      3, 32, static_cast<std::uint32_t>(wave.sample_rate),
      static_cast<std::uint32_t>(wave.samples.size() * 4));
  for (double v : wave.samples) {
    const std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
    detail::put_u32(out, u);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("write_wav_float32: cannot open " + path + " for writing");
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw DataError("write_wav_float32: write failed for " + path);
}

}  // namespace tdnnse

#endif  // TDNNSE_WAV_HPP_
