// include/tdnnse/model_io.hpp

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

// Model file: magic "TDNN", format version u32, a metadata block (layer
// count, dims, contexts, activation tags, normalization vectors), then the
// parameters as little-endian 64-bit floats in declaration order. Round
// trips are bit-exact.

#ifndef TDNNSE_MODEL_IO_HPP_
#define TDNNSE_MODEL_IO_HPP_

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "tdnnse/errors.hpp"
#include "tdnnse/nn.hpp"

namespace tdnnse {

inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr char kModelMagic[4] = {'T', 'D', 'N', 'N'};

namespace detail {

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}

  void u32(std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 4);
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void f64_span(const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) f64(v[i]);
  }
  void raw(const char* data, std::size_t n) { out_.write(data, n); }

 private:
  std::ostream& out_;
};

class ByteReader {
 public:
  ByteReader(std::istream& in, std::string path)
      : in_(in), path_(std::move(path)) {}

  std::uint32_t u32() {
    char b[4];
    read(b, 4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::uint64_t u64() {
    char b[8];
    read(b, 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    }
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  void f64_span(double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] = f64();
  }
  void raw(char* data, std::size_t n) { read(data, n); }
  std::uint64_t offset() const { return offset_; }

 private:
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw DataError(path_ + ": unexpected end of file at byte " +
                      std::to_string(offset_ + static_cast<std::uint64_t>(in_.gcount())));
    }
    offset_ += n;
  }

  std::istream& in_;
  std::string path_;
  std::uint64_t offset_ = 0;
};

}  // namespace detail

inline void save_model(const TdnnModel& model, const std::string& path) {
  validate_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("save_model: cannot open " + path + " for writing");
  detail::ByteWriter w(out);
  w.raw(kModelMagic, 4);
  w.u32(kModelFormatVersion);
  w.u32(static_cast<std::uint32_t>(model.layers.size()));
  w.u32(static_cast<std::uint32_t>(model.input_dim()));
  w.u32(static_cast<std::uint32_t>(model.output_dim()));
  w.f64_span(model.norm_mean.data(), model.norm_mean.size());
  w.f64_span(model.norm_std.data(), model.norm_std.size());
  for (const TdnnLayer& l : model.layers) {
    w.i32(l.context.left);
    w.i32(l.context.right);
    w.u32(static_cast<std::uint32_t>(l.weight.rows));
    w.u32(static_cast<std::uint32_t>(l.weight.cols));
    w.u32(static_cast<std::uint32_t>(l.activation));
    w.f64_span(l.weight.data.data(), l.weight.size());
    w.f64_span(l.bias.data(), l.bias.size());
  }
  out.flush();
  if (!out) throw DataError("save_model: write failed for " + path);
}

inline TdnnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_model: cannot open " + path);
  detail::ByteReader r(in, path);
  char magic[4];
  r.raw(magic, 4);
  if (!std::equal(magic, magic + 4, kModelMagic)) {
    throw DataError(path + ": not a model file (bad magic at byte 0)");
  }
  const std::uint32_t version = r.u32();
  if (version != kModelFormatVersion) {
    throw DataError(path + ": unsupported model format version " +
                    std::to_string(version) + " (this build reads version " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  const std::uint32_t num_layers = r.u32();
  const std::uint32_t input_dim = r.u32();
  const std::uint32_t output_dim = r.u32();
  if (num_layers == 0 || num_layers > 1024 || input_dim == 0 || input_dim > (1u << 20)) {
    throw DataError(path + ": implausible header near byte " + std::to_string(r.offset()));
  }
  TdnnModel model;
  model.norm_mean.resize(input_dim);
  model.norm_std.resize(input_dim);
  r.f64_span(model.norm_mean.data(), input_dim);
  r.f64_span(model.norm_std.data(), input_dim);
  for (std::uint32_t i = 0; i < num_layers; ++i) {
    TdnnLayer l;
    l.context.left = r.i32();
    l.context.right = r.i32();
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    const std::uint32_t act = r.u32();
    if (act > 1) {
      throw DataError(path + ": unknown activation tag " + std::to_string(act) +
                      " at byte " + std::to_string(r.offset()));
    }
    if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 24)) {
      throw DataError(path + ": implausible layer shape at byte " +
                      std::to_string(r.offset()));
    }
    l.activation = static_cast<Activation>(act);
    l.weight = Matrix(rows, cols);
    r.f64_span(l.weight.data.data(), l.weight.size());
    l.bias.resize(rows);
    r.f64_span(l.bias.data(), rows);
    model.layers.push_back(std::move(l));
  }
  if (model.output_dim() != output_dim) {
    throw DataError(path + ": header output dim " + std::to_string(output_dim) +
                    " does not match layers");
  }
  validate_model(model);
  return model;
}

}  // namespace tdnnse

#endif  // TDNNSE_MODEL_IO_HPP_
