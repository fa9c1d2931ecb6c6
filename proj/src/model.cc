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

#include "hiertype/model.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "hiertype/errors.h"

namespace hiertype {

namespace {

// 1 - sigmoid(z) is kept at least this far from zero before its log.
constexpr double kSigmoidFloor = 1e-12;

double Sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::string_view ScoreFunctionName(ScoreFunction f) {
  switch (f) {
    case ScoreFunction::kOrder:
      return "order";
    case ScoreFunction::kBilinear:
      return "bilinear";
    case ScoreFunction::kDot:
      return "dot";
  }
  return "?";
}

std::optional<ScoreFunction> ParseScoreFunction(std::string_view name) {
  if (name == "order") return ScoreFunction::kOrder;
  if (name == "bilinear") return ScoreFunction::kBilinear;
  if (name == "dot") return ScoreFunction::kDot;
  return std::nullopt;
}

std::string_view EncoderModeName(EncoderMode mode) {
  return mode == EncoderMode::kMentionOnly ? "mention" : "cnn";
}

std::optional<EncoderMode> ParseEncoderMode(std::string_view name) {
  if (name == "mention") return EncoderMode::kMentionOnly;
  if (name == "cnn") return EncoderMode::kCnnPlusMention;
  return std::nullopt;
}

void ModelSpec::Validate() const {
  if (dim == 0) throw std::invalid_argument("dim must be positive");
  if (filter_width == 0 || filter_width % 2 == 0) {
    throw std::invalid_argument(
        fmt::format("filter width must be a positive odd number, got {}", filter_width));
  }
  if (num_types == 0) throw std::invalid_argument("model needs at least one type");
  for (const auto &kind : {std::optional<ScoreKind>(mention_score), structure_score}) {
    if (kind && kind->function == ScoreFunction::kOrder && !(kind->margin > 0)) {
      throw std::invalid_argument("order margin must be positive");
    }
  }
}

bool ModelParams::operator==(const ModelParams &other) const {
  std::vector<const Tensor *> mine, theirs;
  ForEachTensor([&](std::string_view, const Tensor &t) { mine.push_back(&t); });
  other.ForEachTensor([&](std::string_view, const Tensor &t) { theirs.push_back(&t); });
  if (mine.size() != theirs.size()) return false;
  for (size_t i = 0; i < mine.size(); ++i) {
    if (!(*mine[i] == *theirs[i])) return false;
  }
  return true;
}

ModelParams ZeroParams(const ModelSpec &spec) {
  spec.Validate();
  const size_t d = spec.dim, w = spec.filter_width;
  ModelParams p;
  p.encoder.conv_weight = Tensor({w, d, d});
  p.encoder.conv_bias = Tensor({d});
  p.encoder.hidden_weight = Tensor({d, 2 * d});
  p.encoder.hidden_bias = Tensor({d});
  p.encoder.output_weight = Tensor({d, d});
  p.encoder.output_bias = Tensor({d});
  p.type_embeddings = Tensor({spec.num_types, d});
  const bool structure_bilinear = spec.structure_score &&
                                  spec.structure_score->function == ScoreFunction::kBilinear;
  if (spec.mention_score.function == ScoreFunction::kBilinear ||
      (structure_bilinear && spec.share_bilinear)) {
    p.mention_bilinear = Tensor({d, d});
  }
  if (structure_bilinear && !spec.share_bilinear) p.structure_bilinear = Tensor({d, d});
  return p;
}

ModelParams ZerosLike(const ModelParams &params) {
  ModelParams z = params;
  z.ForEachTensor([](std::string_view, Tensor &t) { t.Fill(0.0); });
  return z;
}

const Tensor *MentionBilinear(const ModelParams &params, const ModelSpec &spec) {
  return spec.mention_score.function == ScoreFunction::kBilinear
             ? &params.mention_bilinear
             : nullptr;
}

const Tensor *StructureBilinear(const ModelParams &params, const ModelSpec &spec) {
  if (!spec.structure_score || spec.structure_score->function != ScoreFunction::kBilinear) {
    return nullptr;
  }
  return spec.share_bilinear ? &params.mention_bilinear : &params.structure_bilinear;
}

DropoutMasks SampleDropoutMasks(size_t dim, double p, Rng &rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw std::invalid_argument(fmt::format("dropout rate must be in [0, 1), got {}", p));
  }
  const double keep = 1.0 / (1.0 - p);
  DropoutMasks masks{Vec(2 * dim), Vec(dim)};
  for (double &m : masks.input) m = rng.Uniform() < p ? 0.0 : keep;
  for (double &m : masks.hidden) m = rng.Uniform() < p ? 0.0 : keep;
  return masks;
}

Vec CnnForward(const EncoderParams &params, const Tensor &words, CnnTrace *trace) {
  const size_t d = params.dim(), w = params.width();
  if (words.rank() != 2 || words.dim(0) == 0 || words.dim(1) != d) {
    throw ShapeError(fmt::format("cnn input {} does not match dimension {}",
                                 ShapeString(words.shape()), d));
  }
  const size_t n = words.dim(0);
  const size_t padded = std::max(n, w);
  const size_t pad_left = n < w ? (w - n) / 2 : 0;
  const size_t windows = padded - w + 1;

  Vec z(windows * d);
  for (size_t j = 0; j < windows; ++j) {
    double *zj = z.data() + j * d;
    std::copy(params.conv_bias.data(), params.conv_bias.data() + d, zj);
    for (size_t k = 0; k < w; ++k) {
      const size_t pos = j + k;
      if (pos < pad_left || pos - pad_left >= n) continue;
      const double *x = words.data() + (pos - pad_left) * d;
      for (size_t o = 0; o < d; ++o) {
        const double *wk = params.conv_weight.data() + (k * d + o) * d;
        double s = 0.0;
        for (size_t i = 0; i < d; ++i) s += wk[i] * x[i];
        zj[o] += s;
      }
    }
  }

  Vec out(d, 0.0);
  std::vector<size_t> argmax(d, 0);
  for (size_t o = 0; o < d; ++o) {
    double best = std::max(0.0, z[o]);
    for (size_t j = 1; j < windows; ++j) {
      const double v = std::max(0.0, z[j * d + o]);
      if (v > best) {
        best = v;
        argmax[o] = j;
      }
    }
    out[o] = best;
  }
  if (trace) {
    trace->pad_left = pad_left;
    trace->windows = windows;
    trace->pre_activation = std::move(z);
    trace->argmax = std::move(argmax);
  }
  return out;
}

Vec SurfaceAverage(const Tensor &words, size_t first, size_t last) {
  if (words.rank() != 2 || first > last || last >= words.dim(0)) {
    throw ShapeError(fmt::format("span [{}, {}] outside {} tokens", first, last,
                                 words.rank() == 2 ? words.dim(0) : 0));
  }
  const size_t d = words.dim(1);
  Vec avg(d, 0.0);
  for (size_t t = first; t <= last; ++t) Axpy(1.0, words.row(t), avg);
  const double scale = 1.0 / static_cast<double>(last - first + 1);
  for (double &v : avg) v *= scale;
  return avg;
}

Vec EncodeWords(const EncoderParams &params, const Tensor &words, size_t first,
                size_t last, EncoderMode mode, const DropoutMasks *dropout,
                EncoderTrace *trace) {
  const size_t d = params.dim();
  if (words.rank() != 2 || words.dim(1) != d) {
    throw ShapeError(fmt::format("word vectors {} do not match dimension {}",
                                 ShapeString(words.shape()), d));
  }
  EncoderTrace local;
  EncoderTrace &tr = trace ? *trace : local;

  const Vec sfm = SurfaceAverage(words, first, last);
  tr.concat.assign(2 * d, 0.0);
  std::copy(sfm.begin(), sfm.end(), tr.concat.begin());
  tr.cnn = CnnTrace{};
  if (mode == EncoderMode::kCnnPlusMention) {
    const Vec cnn = CnnForward(params, words, &tr.cnn);
    std::copy(cnn.begin(), cnn.end(), tr.concat.begin() + d);
  }

  tr.concat_in = tr.concat;
  if (dropout && !dropout->input.empty()) {
    if (dropout->input.size() != 2 * d) throw ShapeError("input dropout mask size");
    for (size_t i = 0; i < 2 * d; ++i) tr.concat_in[i] *= dropout->input[i];
  }

  tr.hidden_pre.assign(d, 0.0);
  MatVec(params.hidden_weight, tr.concat_in, tr.hidden_pre);
  Axpy(1.0, params.hidden_bias.values(), tr.hidden_pre);
  tr.hidden_in.resize(d);
  for (size_t i = 0; i < d; ++i) tr.hidden_in[i] = std::max(0.0, tr.hidden_pre[i]);
  if (dropout && !dropout->hidden.empty()) {
    if (dropout->hidden.size() != d) throw ShapeError("hidden dropout mask size");
    for (size_t i = 0; i < d; ++i) tr.hidden_in[i] *= dropout->hidden[i];
  }

  tr.output.assign(d, 0.0);
  MatVec(params.output_weight, tr.hidden_in, tr.output);
  Axpy(1.0, params.output_bias.values(), tr.output);
  return tr.output;
}

Vec EncodeMention(const EncoderParams &params, const Mention &m,
                  const EmbeddingTable &emb, EncoderMode mode,
                  const DropoutMasks *dropout) {
  ValidateMention(m);
  const Tensor words = WordMatrix(emb, m.tokens);
  return EncodeWords(params, words, m.span_first, m.span_last, mode, dropout);
}

double LogSigmoid(double z) {
  return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double ScoreArgument(const ScoreKind &kind, std::span<const double> x,
                     std::span<const double> y, const Tensor *bilinear) {
  if (x.size() != y.size()) {
    throw ShapeError(fmt::format("score operands differ in size ({} vs {})", x.size(),
                                 y.size()));
  }
  switch (kind.function) {
    case ScoreFunction::kOrder: {
      double energy = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        const double v = std::max(0.0, y[i] - x[i]);
        energy += v * v;
      }
      return energy;
    }
    case ScoreFunction::kBilinear: {
      if (!bilinear || bilinear->empty()) {
        throw std::invalid_argument("bilinear score needs a matrix");
      }
      if (bilinear->dim(0) != x.size() || bilinear->dim(1) != y.size()) {
        throw ShapeError("bilinear matrix does not match operand size");
      }
      Vec ay(x.size());
      MatVec(*bilinear, y, ay);
      return Dot(x, ay);
    }
    case ScoreFunction::kDot:
      return Dot(x, y);
  }
  return 0.0;
}

LossTerm MembershipLoss(const ScoreKind &kind, double argument) {
  if (kind.function == ScoreFunction::kOrder) return {argument, 1.0, false};
  // d/dz -log sigmoid(z) = -(1 - sigmoid(z)) = -sigmoid(-z)
  return {-LogSigmoid(argument), -Sigmoid(-argument), false};
}

LossTerm NonMembershipPenalty(const ScoreKind &kind, double argument) {
  if (kind.function == ScoreFunction::kOrder) {
    if (argument >= kind.margin) return {0.0, 0.0, true};
    return {kind.margin - argument, -1.0, false};
  }
  const double complement = Sigmoid(-argument);
  if (complement < kSigmoidFloor) return {-std::log(kSigmoidFloor), 0.0, true};
  return {-LogSigmoid(-argument), Sigmoid(argument), false};
}

double ScoreMembership(const ScoreKind &kind, std::span<const double> x,
                       std::span<const double> y, const Tensor *bilinear) {
  return -MembershipLoss(kind, ScoreArgument(kind, x, y, bilinear)).value;
}

double PenaltyNonMembership(const ScoreKind &kind, std::span<const double> x,
                            std::span<const double> y, const Tensor *bilinear) {
  return NonMembershipPenalty(kind, ScoreArgument(kind, x, y, bilinear)).value;
}

std::vector<RankedType> RankTypes(const ScoreKind &kind, std::span<const double> x,
                                  const Tensor &type_embeddings, const Tensor *bilinear) {
  const size_t num_types = type_embeddings.dim(0);
  std::vector<RankedType> ranked(num_types);
  if (kind.function == ScoreFunction::kBilinear) {
    if (!bilinear || bilinear->empty()) {
      throw std::invalid_argument("bilinear score needs a matrix");
    }
    // x^T A y = (A^T x) . y
    Vec projected(x.size());
    MatTVec(*bilinear, x, projected);
    for (size_t t = 0; t < num_types; ++t) {
      const double z = Dot(projected, type_embeddings.row(t));
      ranked[t] = {TypeId{static_cast<uint32_t>(t)}, -MembershipLoss(kind, z).value};
    }
  } else {
    for (size_t t = 0; t < num_types; ++t) {
      ranked[t] = {TypeId{static_cast<uint32_t>(t)},
                   ScoreMembership(kind, x, type_embeddings.row(t), bilinear)};
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedType &a, const RankedType &b) { return a.score > b.score; });
  return ranked;
}

}  // namespace hiertype
