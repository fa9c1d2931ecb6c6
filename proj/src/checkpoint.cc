// Copyright 2026 The Hiertype Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hiertype/checkpoint.h"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "hiertype/errors.h"

namespace hiertype {

namespace {

constexpr std::array<char, 8> kMagic = {'H', 'T', 'Y', 'P', 'C', 'K', 'P', 'T'};
// Strings longer than this are treated as corruption.
constexpr uint64_t kMaxString = uint64_t{1} << 32;

class Writer {
 public:
  explicit Writer(std::ostream &out) : out_(out) {}

  void U8(uint8_t v) { out_.put(static_cast<char>(v)); }
  void U32(uint32_t v) { Little(v, 4); }
  void U64(uint64_t v) { Little(v, 8); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void String(const std::string &s) {
    U64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }

 private:
  void Little(uint64_t v, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(buf, bytes);
  }

  std::ostream &out_;
};

class Reader {
 public:
  Reader(std::istream &in, const std::string &source) : in_(in), source_(source) {}

  uint8_t U8() { return static_cast<uint8_t>(Little(1)); }
  uint32_t U32() { return static_cast<uint32_t>(Little(4)); }
  uint64_t U64() { return Little(8); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string String() {
    const uint64_t n = U64();
    if (n > kMaxString) Fail("string length out of range");
    std::string s(n, '\0');
    Read(s.data(), n);
    return s;
  }
  void Read(char *dst, uint64_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<uint64_t>(in_.gcount()) != n) Fail("truncated file");
  }
  [[noreturn]] void Fail(const std::string &what) {
    throw DataError(fmt::format("{}: bad checkpoint: {}", source_, what));
  }

 private:
  uint64_t Little(int bytes) {
    unsigned char buf[8];
    Read(reinterpret_cast<char *>(buf), static_cast<uint64_t>(bytes));
    uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= uint64_t{buf[i]} << (8 * i);
    return v;
  }

  std::istream &in_;
  const std::string &source_;
};

uint8_t ScoreCode(ScoreFunction f) {
  switch (f) {
    case ScoreFunction::kOrder:
      return 0;
    case ScoreFunction::kBilinear:
      return 1;
    case ScoreFunction::kDot:
      return 2;
  }
  return 255;
}

}  // namespace

void WriteCheckpoint(const Checkpoint &ckpt, std::ostream &out) {
  const ModelSpec &spec = ckpt.spec;
  if (ckpt.type_names.size() != spec.num_types) {
    throw ShapeError("checkpoint type names do not match num_types");
  }
  Writer w(out);
  out.write(kMagic.data(), kMagic.size());
  w.U32(kCheckpointVersion);
  w.U64(spec.dim);
  w.U64(spec.filter_width);
  w.U64(spec.num_types);
  w.U8(spec.encoder_mode == EncoderMode::kMentionOnly ? 0 : 1);
  w.U8(ScoreCode(spec.mention_score.function));
  w.F64(spec.mention_score.margin);
  w.U8(spec.structure_score ? 1 : 0);
  if (spec.structure_score) {
    w.U8(ScoreCode(spec.structure_score->function));
    w.F64(spec.structure_score->margin);
  }
  w.U8(spec.share_bilinear ? 1 : 0);
  w.String(ckpt.embeddings);
  for (const auto &name : ckpt.type_names) w.String(name);

  uint64_t count = 0;
  ckpt.params.ForEachTensor([&](std::string_view, const Tensor &) { ++count; });
  w.U64(count);
  ckpt.params.ForEachTensor([&](std::string_view name, const Tensor &t) {
    w.String(std::string(name));
    w.U64(t.rank());
    for (size_t d : t.shape()) w.U64(d);
    for (double v : t.values()) w.F64(v);
  });
  if (!out) throw DataError("failed writing checkpoint");
}

void SaveCheckpoint(const Checkpoint &ckpt, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write checkpoint {}", path.string()));
  WriteCheckpoint(ckpt, out);
}

Checkpoint ReadCheckpoint(std::istream &in, const std::string &source) {
  Reader r(in, source);
  std::array<char, 8> magic{};
  r.Read(magic.data(), magic.size());
  if (magic != kMagic) r.Fail("not a checkpoint file");
  const uint32_t version = r.U32();
  if (version != kCheckpointVersion) r.Fail(fmt::format("unsupported version {}", version));

  auto score = [&](uint8_t code) {
    if (code > 2) r.Fail(fmt::format("unknown score kind {}", code));
    constexpr ScoreFunction kinds[] = {ScoreFunction::kOrder, ScoreFunction::kBilinear,
                                       ScoreFunction::kDot};
    return kinds[code];
  };

  Checkpoint ckpt;
  ModelSpec &spec = ckpt.spec;
  spec.dim = r.U64();
  spec.filter_width = r.U64();
  spec.num_types = r.U64();
  const uint8_t mode = r.U8();
  if (mode > 1) r.Fail("unknown encoder mode");
  spec.encoder_mode = mode == 0 ? EncoderMode::kMentionOnly : EncoderMode::kCnnPlusMention;
  spec.mention_score.function = score(r.U8());
  spec.mention_score.margin = r.F64();
  if (r.U8() != 0) {
    ScoreKind s;
    s.function = score(r.U8());
    s.margin = r.F64();
    spec.structure_score = s;
  }
  spec.share_bilinear = r.U8() != 0;
  try {
    spec.Validate();
  } catch (const std::invalid_argument &e) {
    r.Fail(e.what());
  }
  ckpt.embeddings = r.String();
  ckpt.type_names.reserve(spec.num_types);
  for (size_t i = 0; i < spec.num_types; ++i) ckpt.type_names.push_back(r.String());

  ckpt.params = ZeroParams(spec);
  std::vector<std::pair<std::string_view, Tensor *>> expected;
  ckpt.params.ForEachTensor(
      [&](std::string_view name, Tensor &t) { expected.emplace_back(name, &t); });
  if (r.U64() != expected.size()) r.Fail("tensor count does not match the model");
  for (auto &[name, tensor] : expected) {
    if (r.String() != name) r.Fail(fmt::format("expected tensor {}", name));
    const uint64_t rank = r.U64();
    std::vector<size_t> shape;
    for (uint64_t i = 0; i < rank && i < 8; ++i) shape.push_back(r.U64());
    if (shape != tensor->shape()) {
      r.Fail(fmt::format("tensor {} has shape {}, expected {}", name, ShapeString(shape),
                         ShapeString(tensor->shape())));
    }
    for (double &v : tensor->values()) v = r.F64();
  }
  return ckpt;
}

Checkpoint LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open checkpoint {}", path.string()));
  return ReadCheckpoint(in, path.string());
}

}  // namespace hiertype
