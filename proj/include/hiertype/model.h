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

// Forward computation of the mention typing model.
//
// Encoder, for word vectors m_0..m_{n-1} of dimension d and filter width w:
//
//   z_j    = b + sum_{k<w} W[k] m_{j+k}        windows j = 0..n-w
//   m_cnn  = max_j ReLU(z_j)                    elementwise
//   m_sfm  = mean of m_t1..m_t2                 raw word vectors
//   c      = [m_sfm; m_cnn]                     m_cnn zeroed in MentionOnly
//   output = W2 ReLU(W1 c + b1) + b2
//
// Each window is centered on token j + w/2, so the n-w+1 windows are the
// positions where the whole filter fits. Inputs shorter than w are
// zero-padded on both sides (the extra pad goes right) to length w.
//
// Type membership x in y is scored by
//   Order     -|max(0, y - x)|^2
//   Bilinear  log sigmoid(x^T A y)
//   Dot       log sigmoid(x^T y)
// and non-membership is charged as a non-negative penalty
//   Order     max(0, margin - |max(0, y - x)|^2)
//   Bilinear  -log(1 - sigmoid(x^T A y))
//   Dot       -log(1 - sigmoid(x^T y))

#ifndef HIERTYPE_MODEL_H_
#define HIERTYPE_MODEL_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hiertype/corpus.h"
#include "hiertype/hierarchy.h"
#include "hiertype/rng.h"
#include "hiertype/tensor.h"

namespace hiertype {

enum class ScoreFunction { kOrder, kBilinear, kDot };

std::string_view ScoreFunctionName(ScoreFunction f);
// Accepts order, bilinear, dot.
std::optional<ScoreFunction> ParseScoreFunction(std::string_view name);

struct ScoreKind {
  ScoreFunction function = ScoreFunction::kBilinear;
  // Hinge margin; only used by kOrder, must be positive there.
  double margin = 1.0;

  bool operator==(const ScoreKind &) const = default;
};

enum class EncoderMode { kMentionOnly, kCnnPlusMention };

std::string_view EncoderModeName(EncoderMode mode);
// Accepts mention, cnn.
std::optional<EncoderMode> ParseEncoderMode(std::string_view name);

// Architecture of a model; everything needed to allocate parameters.
struct ModelSpec {
  size_t dim = 300;
  size_t filter_width = 5;
  size_t num_types = 0;
  EncoderMode encoder_mode = EncoderMode::kCnnPlusMention;
  ScoreKind mention_score;
  // Scorer of the structure loss; absent when training without it.
  std::optional<ScoreKind> structure_score;
  // A bilinear structure scorer reuses the mention scorer's matrix.
  bool share_bilinear = false;

  // Throws std::invalid_argument.
  void Validate() const;

  bool operator==(const ModelSpec &) const = default;
};

struct EncoderParams {
  Tensor conv_weight;    // [w, d, d]; conv_weight[k] maps input to output
  Tensor conv_bias;      // [d]
  Tensor hidden_weight;  // [d, 2d]
  Tensor hidden_bias;    // [d]
  Tensor output_weight;  // [d, d]
  Tensor output_bias;    // [d]

  size_t width() const { return conv_weight.dim(0); }
  size_t dim() const { return conv_bias.size(); }
};

struct ModelParams {
  EncoderParams encoder;
  Tensor type_embeddings;     // [num_types, d]
  Tensor mention_bilinear;    // [d, d] or empty
  Tensor structure_bilinear;  // [d, d] or empty

  // Visits (name, tensor) for every allocated tensor in checkpoint order.
  template <typename F>
  void ForEachTensor(F &&f) {
    VisitAll(*this, f);
  }
  template <typename F>
  void ForEachTensor(F &&f) const {
    VisitAll(*this, f);
  }

  bool operator==(const ModelParams &other) const;

 private:
  template <typename Self, typename F>
  static void VisitAll(Self &self, F &f) {
    f("conv_weight", self.encoder.conv_weight);
    f("conv_bias", self.encoder.conv_bias);
    f("hidden_weight", self.encoder.hidden_weight);
    f("hidden_bias", self.encoder.hidden_bias);
    f("output_weight", self.encoder.output_weight);
    f("output_bias", self.encoder.output_bias);
    f("type_embeddings", self.type_embeddings);
    if (!self.mention_bilinear.empty()) f("mention_bilinear", self.mention_bilinear);
    if (!self.structure_bilinear.empty()) f("structure_bilinear", self.structure_bilinear);
  }
};

// All tensors of spec allocated and zero.
ModelParams ZeroParams(const ModelSpec &spec);

// Same shapes as params, all zero.
ModelParams ZerosLike(const ModelParams &params);

// Matrix used by each scorer, or nullptr when that scorer is not bilinear.
const Tensor *MentionBilinear(const ModelParams &params, const ModelSpec &spec);
const Tensor *StructureBilinear(const ModelParams &params, const ModelSpec &spec);

// Inverted dropout masks, entries 0 or 1/(1-p). Empty vectors mean no
// dropout on that layer.
struct DropoutMasks {
  Vec input;   // 2d, applied to the concatenation
  Vec hidden;  // d, applied after the hidden ReLU
};

DropoutMasks SampleDropoutMasks(size_t dim, double p, Rng &rng);

struct CnnTrace {
  size_t pad_left = 0;    // zero vectors before the first token
  size_t windows = 0;     // number of windows
  Vec pre_activation;     // [windows, d], z_j
  std::vector<size_t> argmax;  // per output dim, first maximizing window
};

struct EncoderTrace {
  CnnTrace cnn;
  Vec concat;        // [m_sfm; m_cnn] before dropout
  Vec concat_in;     // after dropout
  Vec hidden_pre;    // W1 c + b1
  Vec hidden_in;     // ReLU, after dropout
  Vec output;
};

// words is n x d. Throws ShapeError on dimension mismatch or n == 0.
Vec CnnForward(const EncoderParams &params, const Tensor &words,
               CnnTrace *trace = nullptr);

// Throws ShapeError when the span is out of range.
Vec SurfaceAverage(const Tensor &words, size_t first, size_t last);

Vec EncodeWords(const EncoderParams &params, const Tensor &words, size_t first,
                size_t last, EncoderMode mode, const DropoutMasks *dropout = nullptr,
                EncoderTrace *trace = nullptr);

Vec EncodeMention(const EncoderParams &params, const Mention &m,
                  const EmbeddingTable &emb, EncoderMode mode,
                  const DropoutMasks *dropout = nullptr);

double LogSigmoid(double z);

// The quantity a score depends on: x^T A y, x^T y, or the order-violation
// energy |max(0, y - x)|^2.
double ScoreArgument(const ScoreKind &kind, std::span<const double> x,
                     std::span<const double> y, const Tensor *bilinear);

// A loss term as a function of the score argument, with its derivative.
// clamped marks the derivative as taken on a saturated branch.
struct LossTerm {
  double value = 0.0;
  double slope = 0.0;
  bool clamped = false;
};

// -score(x in y).
LossTerm MembershipLoss(const ScoreKind &kind, double argument);
// penalty for x not in y.
LossTerm NonMembershipPenalty(const ScoreKind &kind, double argument);

// Throws std::invalid_argument when a bilinear kind has no matrix.
double ScoreMembership(const ScoreKind &kind, std::span<const double> x,
                       std::span<const double> y, const Tensor *bilinear = nullptr);
double PenaltyNonMembership(const ScoreKind &kind, std::span<const double> x,
                            std::span<const double> y,
                            const Tensor *bilinear = nullptr);

struct RankedType {
  TypeId type;
  double score;
};

// Scores of x against every row of type_embeddings, descending; ties keep
// ascending type index.
std::vector<RankedType> RankTypes(const ScoreKind &kind, std::span<const double> x,
                                  const Tensor &type_embeddings,
                                  const Tensor *bilinear = nullptr);

}  // namespace hiertype

#endif  // HIERTYPE_MODEL_H_
