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

#include "hiertype/training.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "hiertype/errors.h"
#include "hiertype/logging.h"
#include "hiertype/rng.h"
#include "text_util.h"

namespace hiertype {

namespace {

class Signature {
 public:
  void Add(uint64_t v) {
    h_ ^= v + 0x9e3779b97f4a7c15ULL + (h_ << 6) + (h_ >> 2);
  }
  uint64_t value() const { return h_; }

 private:
  uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Where the gradient of a batch goes. Null members skip that work.
struct GradientSink {
  ModelParams *grads = nullptr;
  Tensor *type_grads = nullptr;
  Tensor *bilinear_grads = nullptr;
};

// Adds loss_weight * sum over types u != skip of the membership loss (u
// positive) or non-membership penalty (otherwise) of x against row u, and
// propagates grad_weight times its gradient into dx, dT and dA.
double ScoreAgainstTypes(const ScoreKind &kind, std::span<const double> x,
                         const Tensor &types, const Tensor *bilinear,
                         std::span<const char> positive, size_t skip,
                         double loss_weight, double grad_weight,
                         std::span<double> dx, Tensor *dtypes, Tensor *dbilinear,
                         Signature &sig) {
  const size_t d = x.size();
  const size_t num_types = types.dim(0);
  const bool want_grads = grad_weight != 0.0 && !dx.empty();
  Vec projected;  // A^T x
  Vec slope_sum;  // sum of slope * y over types, bilinear only
  if (kind.function == ScoreFunction::kBilinear) {
    if (!bilinear || bilinear->empty()) {
      throw std::invalid_argument("bilinear score needs a matrix");
    }
    projected.resize(d);
    MatTVec(*bilinear, x, projected);
    slope_sum.assign(d, 0.0);
  }

  double total = 0.0;
  for (size_t u = 0; u < num_types; ++u) {
    if (u == skip && !positive[u]) continue;
    const auto y = types.row(u);
    double argument = 0.0;
    switch (kind.function) {
      case ScoreFunction::kOrder: {
        argument = 0.0;
        for (size_t i = 0; i < d; ++i) {
          const double v = y[i] - x[i];
          sig.Add(v > 0);
          if (v > 0) argument += v * v;
        }
        break;
      }
      case ScoreFunction::kBilinear:
        argument = Dot(projected, y);
        break;
      case ScoreFunction::kDot:
        argument = Dot(x, y);
        break;
    }
    const LossTerm term =
        positive[u] ? MembershipLoss(kind, argument) : NonMembershipPenalty(kind, argument);
    sig.Add(term.clamped);
    total += term.value;
    if (!want_grads) continue;
    const double s = grad_weight * term.slope;
    if (s == 0.0) continue;
    auto dy = dtypes ? dtypes->row(u) : std::span<double>();
    switch (kind.function) {
      case ScoreFunction::kOrder:
        for (size_t i = 0; i < d; ++i) {
          const double v = y[i] - x[i];
          if (v <= 0) continue;
          dx[i] -= 2.0 * s * v;
          if (dtypes) dy[i] += 2.0 * s * v;
        }
        break;
      case ScoreFunction::kBilinear:
        Axpy(s, y, slope_sum);
        if (dtypes) Axpy(s, projected, dy);
        break;
      case ScoreFunction::kDot:
        Axpy(s, y, dx);
        if (dtypes) Axpy(s, x, dy);
        break;
    }
  }
  if (want_grads && kind.function == ScoreFunction::kBilinear) {
    Vec a_s(d);
    MatVec(*bilinear, slope_sum, a_s);
    Axpy(1.0, a_s, dx);
    if (dbilinear) AddOuter(*dbilinear, x, slope_sum);
  }
  return loss_weight * total;
}

void RecordEncoderBranches(const EncoderTrace &tr, Signature &sig) {
  for (double z : tr.cnn.pre_activation) sig.Add(z > 0);
  for (size_t j : tr.cnn.argmax) sig.Add(j);
  for (double a : tr.hidden_pre) sig.Add(a > 0);
}

void EncoderBackward(const EncoderParams &p, const EncoderTrace &tr, const Tensor &words,
                     EncoderMode mode, const DropoutMasks *dropout,
                     std::span<const double> dout, EncoderParams &g) {
  const size_t d = p.dim();
  Axpy(1.0, dout, g.output_bias.values());
  AddOuter(g.output_weight, dout, tr.hidden_in);

  Vec dh(d);
  MatTVec(p.output_weight, dout, dh);
  if (dropout && !dropout->hidden.empty()) {
    for (size_t i = 0; i < d; ++i) dh[i] *= dropout->hidden[i];
  }
  for (size_t i = 0; i < d; ++i) {
    if (tr.hidden_pre[i] <= 0) dh[i] = 0.0;
  }
  Axpy(1.0, dh, g.hidden_bias.values());
  AddOuter(g.hidden_weight, dh, tr.concat_in);
  // The surface average reads fixed word vectors; only the CNN half of the
  // concatenation leads to parameters.
  if (mode == EncoderMode::kMentionOnly) return;

  Vec dc(2 * d);
  MatTVec(p.hidden_weight, dh, dc);
  if (dropout && !dropout->input.empty()) {
    for (size_t i = 0; i < 2 * d; ++i) dc[i] *= dropout->input[i];
  }
  const size_t n = words.dim(0), w = p.width();
  for (size_t o = 0; o < d; ++o) {
    const double go = dc[d + o];
    if (go == 0.0) continue;
    const size_t j = tr.cnn.argmax[o];
    if (tr.cnn.pre_activation[j * d + o] <= 0) continue;
    g.conv_bias[o] += go;
    for (size_t k = 0; k < w; ++k) {
      const size_t pos = j + k;
      if (pos < tr.cnn.pad_left || pos - tr.cnn.pad_left >= n) continue;
      const auto x = words.row(pos - tr.cnn.pad_left);
      double *gw = g.conv_weight.data() + (k * d + o) * d;
      for (size_t i = 0; i < d; ++i) gw[i] += go * x[i];
    }
  }
}

LossEvaluation Accumulate(const ModelParams &params, const ModelSpec &spec,
                          std::span<const TypingInstance> typing,
                          std::span<const StructureInstance> structure, double lambda,
                          ModelParams *grads) {
  if (typing.empty() && structure.empty()) {
    throw std::invalid_argument("loss needs a non-empty batch");
  }
  const size_t d = spec.dim;
  const size_t num_types = params.type_embeddings.dim(0);
  Signature sig;
  LossEvaluation out;
  std::vector<char> positive(num_types);

  if (!typing.empty()) {
    const double weight = 1.0 / static_cast<double>(typing.size());
    const Tensor *bilinear = MentionBilinear(params, spec);
    Tensor *dbilinear = grads && bilinear ? &grads->mention_bilinear : nullptr;
    Vec dm;
    for (const TypingInstance &inst : typing) {
      if (!inst.words) throw std::invalid_argument("typing instance without words");
      if (inst.gold.empty()) throw std::invalid_argument("typing instance without gold types");
      EncoderTrace trace;
      const Vec m = EncodeWords(params.encoder, *inst.words, inst.span_first,
                                inst.span_last, spec.encoder_mode, inst.dropout, &trace);
      RecordEncoderBranches(trace, sig);
      std::fill(positive.begin(), positive.end(), 0);
      for (TypeId t : inst.gold) {
        if (t.index() >= num_types) throw UnknownTypeError(fmt::format("#{}", t.value));
        positive[t.index()] = 1;
      }
      dm.assign(grads ? d : 0, 0.0);
      out.typing += ScoreAgainstTypes(spec.mention_score, m, params.type_embeddings,
                                      bilinear, positive, num_types, weight, weight, dm,
                                      grads ? &grads->type_embeddings : nullptr,
                                      dbilinear, sig);
      if (grads) {
        EncoderBackward(params.encoder, trace, *inst.words, spec.encoder_mode,
                        inst.dropout, dm, grads->encoder);
      }
    }
  }

  if (!structure.empty()) {
    if (!spec.structure_score) {
      throw std::invalid_argument("structure batch given but no structure scorer configured");
    }
    const double weight = 1.0 / static_cast<double>(structure.size());
    const Tensor *bilinear = StructureBilinear(params, spec);
    Tensor *dbilinear = nullptr;
    if (grads && bilinear) {
      dbilinear = spec.share_bilinear ? &grads->mention_bilinear : &grads->structure_bilinear;
    }
    Vec dx;
    for (const StructureInstance &inst : structure) {
      if (inst.type.index() >= num_types) {
        throw UnknownTypeError(fmt::format("#{}", inst.type.value));
      }
      std::fill(positive.begin(), positive.end(), 0);
      for (TypeId a : inst.ancestors) positive[a.index()] = 1;
      dx.assign(grads ? d : 0, 0.0);
      const auto x = params.type_embeddings.row(inst.type.index());
      out.structure += ScoreAgainstTypes(*spec.structure_score, x, params.type_embeddings,
                                         bilinear, positive, inst.type.index(), weight,
                                         lambda * weight, dx,
                                         grads ? &grads->type_embeddings : nullptr,
                                         dbilinear, sig);
      if (grads) Axpy(1.0, dx, grads->type_embeddings.row(inst.type.index()));
    }
  }

  out.combined = CombinedLoss(out.typing, out.structure, lambda);
  out.branch_signature = sig.value();
  return out;
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string &what) { throw std::invalid_argument(what); };
  if (batch_size_typing == 0 || batch_size_structure == 0) fail("batch sizes must be positive");
  if (!(structure_weight >= 0)) fail("structure_weight must be non-negative");
  if (!(learning_rate > 0)) fail("learning_rate must be positive");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1) || !(adam_beta2 >= 0 && adam_beta2 < 1)) {
    fail("adam betas must be in [0, 1)");
  }
  if (!(adam_eps > 0)) fail("adam_eps must be positive");
  if (!(dropout_p >= 0 && dropout_p < 1)) fail("dropout_p must be in [0, 1)");
  if (!(margin > 0)) fail("margin must be positive");
  if (max_epochs < 1) fail("max_epochs must be positive");
  if (patience < 1) fail("patience must be at least 1");
  if (dim == 0) fail("dim must be positive");
  if (filter_width == 0 || filter_width % 2 == 0) fail("filter_width must be odd");
}

ModelSpec TrainConfig::MakeModelSpec(size_t num_types) const {
  ModelSpec spec;
  spec.dim = dim;
  spec.filter_width = filter_width;
  spec.num_types = num_types;
  spec.encoder_mode = encoder_mode;
  spec.mention_score = ScoreKind{mention_score_kind, margin};
  if (structure_score_kind) spec.structure_score = ScoreKind{*structure_score_kind, margin};
  spec.share_bilinear = share_bilinear;
  spec.Validate();
  return spec;
}

double TypingLoss(const ModelParams &params, const ModelSpec &spec,
                  std::span<const TypingInstance> batch) {
  if (batch.empty()) throw std::invalid_argument("typing loss of an empty batch");
  return Accumulate(params, spec, batch, {}, 0.0, nullptr).typing;
}

double StructureLoss(const ModelParams &params, const ModelSpec &spec,
                     std::span<const StructureInstance> batch) {
  if (batch.empty()) throw std::invalid_argument("structure loss of an empty batch");
  return Accumulate(params, spec, {}, batch, 1.0, nullptr).structure;
}

LossEvaluation EvaluateLoss(const ModelParams &params, const ModelSpec &spec,
                            std::span<const TypingInstance> typing,
                            std::span<const StructureInstance> structure, double lambda) {
  return Accumulate(params, spec, typing, structure, lambda, nullptr);
}

GradientResult Backward(const ModelParams &params, const ModelSpec &spec,
                        std::span<const TypingInstance> typing,
                        std::span<const StructureInstance> structure, double lambda) {
  GradientResult result;
  result.gradients = ZerosLike(params);
  result.loss = Accumulate(params, spec, typing, structure, lambda, &result.gradients);
  return result;
}

FiniteDifferenceReport FiniteDifferenceCheck(const std::function<LossSample()> &loss_fn,
                                             std::span<const GradientCheckTensor> tensors,
                                             double epsilon, size_t samples_per_tensor,
                                             uint64_t seed) {
  if (!(epsilon >= 1e-7 && epsilon <= 1e-3)) {
    throw std::invalid_argument(fmt::format("epsilon {} outside [1e-7, 1e-3]", epsilon));
  }
  auto evaluate = [&]() {
    LossSample s = loss_fn();
    if (!std::isfinite(s.loss)) throw DataError("non-finite loss in finite-difference check");
    return s;
  };
  const LossSample base = evaluate();
  FiniteDifferenceReport report;
  Rng rng(seed);
  for (const GradientCheckTensor &t : tensors) {
    if (t.values.size() != t.analytic.size()) {
      throw ShapeError(fmt::format("gradient of {} has the wrong size", t.name));
    }
    std::vector<size_t> coords(t.values.size());
    for (size_t i = 0; i < coords.size(); ++i) coords[i] = i;
    if (coords.size() > samples_per_tensor) {
      for (size_t i = 0; i < samples_per_tensor; ++i) {
        std::swap(coords[i], coords[i + rng.Below(coords.size() - i)]);
      }
      coords.resize(samples_per_tensor);
      std::sort(coords.begin(), coords.end());
    }
    for (size_t idx : coords) {
      const double original = t.values[idx];
      t.values[idx] = original + epsilon;
      const LossSample plus = evaluate();
      t.values[idx] = original - epsilon;
      const LossSample minus = evaluate();
      t.values[idx] = original;
      if (plus.branch_signature != base.branch_signature ||
          minus.branch_signature != base.branch_signature) {
        ++report.excluded;
        continue;
      }
      const double numeric = (plus.loss - minus.loss) / (2.0 * epsilon);
      const double analytic = t.analytic[idx];
      const double rel = std::abs(analytic - numeric) /
                         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      ++report.compared;
      if (rel > report.max_relative_error || report.worst_tensor.empty()) {
        report.max_relative_error = std::max(report.max_relative_error, rel);
        report.worst_tensor = t.name;
        report.worst_index = idx;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  return report;
}

FiniteDifferenceReport CheckGradients(ModelParams &params, const ModelSpec &spec,
                                      std::span<const TypingInstance> typing,
                                      std::span<const StructureInstance> structure,
                                      double lambda, double epsilon,
                                      size_t samples_per_tensor, uint64_t seed) {
  const GradientResult analytic = Backward(params, spec, typing, structure, lambda);
  std::vector<GradientCheckTensor> tensors;
  params.ForEachTensor([&](std::string_view name, Tensor &t) {
    tensors.push_back({std::string(name), t.values(), {}});
  });
  size_t i = 0;
  analytic.gradients.ForEachTensor(
      [&](std::string_view, const Tensor &g) { tensors[i++].analytic = g.values(); });
  return FiniteDifferenceCheck(
      [&]() {
        const LossEvaluation e = EvaluateLoss(params, spec, typing, structure, lambda);
        return LossSample{e.combined, e.branch_signature};
      },
      tensors, epsilon, samples_per_tensor, seed);
}

double GlorotBound(const std::vector<size_t> &shape) {
  double fan_in = 1, fan_out = 1;
  if (shape.size() == 1) {
    fan_in = fan_out = static_cast<double>(shape[0]);
  } else if (shape.size() == 2) {
    fan_out = static_cast<double>(shape[0]);
    fan_in = static_cast<double>(shape[1]);
  } else if (shape.size() == 3) {
    fan_out = static_cast<double>(shape[0] * shape[1]);
    fan_in = static_cast<double>(shape[0] * shape[2]);
  } else {
    throw std::invalid_argument("Glorot bound needs a tensor of rank 1 to 3");
  }
  return std::sqrt(6.0 / (fan_in + fan_out));
}

Tensor GlorotUniform(std::vector<size_t> shape, uint64_t seed) {
  const double bound = GlorotBound(shape);
  Tensor t(std::move(shape));
  Rng rng(seed);
  for (double &v : t.values()) v = rng.Uniform(-bound, bound);
  return t;
}

ModelParams InitializeParams(const ModelSpec &spec, uint64_t seed) {
  ModelParams params = ZeroParams(spec);
  uint64_t stream = 0;
  params.ForEachTensor([&](std::string_view name, Tensor &t) {
    ++stream;
    if (name.ends_with("_bias")) return;
    t = GlorotUniform(t.shape(), DeriveSeed(seed, stream));
  });
  return params;
}

AdamState AdamState::For(const ModelParams &params) {
  return AdamState{ZerosLike(params), ZerosLike(params), 0};
}

void AdamStep(ModelParams &params, const ModelParams &grads, AdamState &state,
              const AdamConfig &config) {
  std::vector<Tensor *> p, m, v;
  std::vector<const Tensor *> g;
  std::vector<std::string_view> names;
  params.ForEachTensor([&](std::string_view name, Tensor &t) {
    names.push_back(name);
    p.push_back(&t);
  });
  grads.ForEachTensor([&](std::string_view, const Tensor &t) { g.push_back(&t); });
  state.first_moment.ForEachTensor([&](std::string_view, Tensor &t) { m.push_back(&t); });
  state.second_moment.ForEachTensor([&](std::string_view, Tensor &t) { v.push_back(&t); });
  if (g.size() != p.size() || m.size() != p.size() || v.size() != p.size()) {
    throw ShapeError("Adam: gradient and state layout differ from parameters");
  }
  for (size_t i = 0; i < p.size(); ++i) {
    if (g[i]->shape() != p[i]->shape() || m[i]->shape() != p[i]->shape() ||
        v[i]->shape() != p[i]->shape()) {
      throw ShapeError(fmt::format("Adam: shape mismatch on {}", names[i]));
    }
    for (double x : g[i]->values()) {
      if (!std::isfinite(x)) {
        throw DataError(fmt::format("non-finite gradient in {}", names[i]));
      }
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(config.beta1, t);
  const double c2 = 1.0 - std::pow(config.beta2, t);
  for (size_t i = 0; i < p.size(); ++i) {
    double *pv = p[i]->data();
    const double *gv = g[i]->data();
    double *mv = m[i]->data();
    double *vv = v[i]->data();
    for (size_t j = 0; j < p[i]->size(); ++j) {
      mv[j] = config.beta1 * mv[j] + (1.0 - config.beta1) * gv[j];
      vv[j] = config.beta2 * vv[j] + (1.0 - config.beta2) * gv[j] * gv[j];
      const double mhat = mv[j] / c1;
      const double vhat = vv[j] / c2;
      pv[j] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
    }
  }
}

std::vector<PreparedExample> PrepareExamples(std::span<const LabeledExample> examples,
                                             const EmbeddingTable &emb) {
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const auto &ex : examples) {
    ValidateMention(ex.mention);
    if (ex.gold_types.empty()) throw DataError("labeled example without gold types");
    out.push_back(PreparedExample{WordMatrix(emb, ex.mention.tokens), ex.mention.span_first,
                                  ex.mention.span_last, ex.gold_types});
  }
  return out;
}

EvalReport EvaluateModel(const ModelParams &params, const ModelSpec &spec,
                         std::span<const PreparedExample> examples) {
  std::vector<double> aps;
  aps.reserve(examples.size());
  std::vector<TypeId> ranking;
  for (const auto &ex : examples) {
    const Vec m = EncodeWords(params.encoder, ex.words, ex.span_first, ex.span_last,
                              spec.encoder_mode);
    const auto ranked = RankTypes(spec.mention_score, m, params.type_embeddings,
                                  MentionBilinear(params, spec));
    ranking.clear();
    for (const auto &r : ranked) ranking.push_back(r.type);
    aps.push_back(AveragePrecision(ranking, ex.gold));
  }
  return MeanAveragePrecision(std::move(aps));
}

EarlyStopping::EarlyStopping(int patience) : patience_(patience) {
  if (patience < 1) throw std::invalid_argument("patience must be at least 1");
}

bool EarlyStopping::Update(double metric) {
  ++epoch_;
  if (epoch_ == 1 || metric > best_) {
    best_ = metric;
    best_epoch_ = epoch_;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

void WriteMetricHistory(std::span<const EpochRecord> history, std::ostream &out) {
  for (const auto &r : history) {
    out << r.epoch << '\t' << FormatReal(r.train_loss) << '\t' << FormatReal(r.dev_map)
        << "\n";
  }
}

namespace {

std::vector<TypeId> TypesWithAncestors(const TypeHierarchy &h) {
  std::vector<TypeId> eligible;
  for (uint32_t t = 0; t < h.size(); ++t) {
    if (!h.ancestors(TypeId{t}).empty()) eligible.push_back(TypeId{t});
  }
  return eligible;
}

std::vector<StructureInstance> SampleStructureBatch(const TypeHierarchy &h,
                                                    std::vector<TypeId> &eligible,
                                                    size_t batch_size, Rng &rng) {
  rng.Shuffle(std::span<TypeId>(eligible));
  const size_t n = std::min(batch_size, eligible.size());
  std::vector<StructureInstance> batch;
  batch.reserve(n);
  for (size_t i = 0; i < n; ++i) batch.push_back({eligible[i], h.ancestors(eligible[i])});
  return batch;
}

}  // namespace

TrainResult Train(std::span<const PreparedExample> train,
                  std::span<const PreparedExample> dev, const TypeHierarchy &h,
                  const TrainConfig &config) {
  config.Validate();
  if (train.empty() || dev.empty()) {
    throw std::invalid_argument("training needs non-empty train and dev sets");
  }
  TrainResult result;
  result.spec = config.MakeModelSpec(h.size());
  const ModelSpec &spec = result.spec;
  ModelParams params = InitializeParams(spec, DeriveSeed(config.seed, 1));
  AdamState adam = AdamState::For(params);
  const AdamConfig adam_config{config.learning_rate, config.adam_beta1, config.adam_beta2,
                               config.adam_eps};
  const BatchIterator batches(train.size(), config.batch_size_typing,
                              DeriveSeed(config.seed, 2));
  Rng dropout_rng(DeriveSeed(config.seed, 3));
  Rng structure_rng(DeriveSeed(config.seed, 4));
  std::vector<TypeId> eligible = TypesWithAncestors(h);
  const bool use_structure =
      config.structure_weight > 0 && spec.structure_score && !eligible.empty();
  const double lambda = use_structure ? config.structure_weight : 0.0;

  EarlyStopping stopping(config.patience);
  result.params = params;
  std::vector<DropoutMasks> masks;
  std::vector<TypingInstance> typing;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    double total = 0.0;
    size_t steps = 0;
    for (const auto &batch : batches.Epoch(static_cast<uint64_t>(epoch))) {
      masks.clear();
      if (config.dropout_p > 0) {
        for (size_t i = 0; i < batch.size(); ++i) {
          masks.push_back(SampleDropoutMasks(spec.dim, config.dropout_p, dropout_rng));
        }
      }
      typing.clear();
      for (size_t i = 0; i < batch.size(); ++i) {
        const PreparedExample &ex = train[batch[i]];
        typing.push_back({&ex.words, ex.span_first, ex.span_last, ex.gold,
                          masks.empty() ? nullptr : &masks[i]});
      }
      std::vector<StructureInstance> structure;
      if (use_structure) {
        structure = SampleStructureBatch(h, eligible, config.batch_size_structure,
                                         structure_rng);
        ++result.structure_batches;
      }
      const GradientResult step = Backward(params, spec, typing, structure, lambda);
      AdamStep(params, step.gradients, adam, adam_config);
      total += step.loss.combined;
      ++steps;
      ++result.typing_batches;
    }
    const EpochRecord record{epoch, total / static_cast<double>(steps),
                             EvaluateModel(params, spec, dev).map};
    result.history.push_back(record);
    Log().info("epoch {} train_loss={:.6f} dev_map={:.4f}", epoch, record.train_loss,
               record.dev_map);
    if (stopping.Update(record.dev_map)) result.params = params;
    if (stopping.ShouldStop()) {
      Log().info("early stop after epoch {}; best epoch {}", epoch, stopping.best_epoch());
      break;
    }
  }
  result.best_epoch = stopping.best_epoch();
  result.best_dev_map = stopping.best();
  return result;
}

StructureTrainResult TrainStructureOnly(const TypeHierarchy &h, const TrainConfig &config,
                                        size_t steps) {
  config.Validate();
  if (!config.structure_score_kind) {
    throw std::invalid_argument("structure-only training needs a structure scorer");
  }
  StructureTrainResult result;
  result.spec = config.MakeModelSpec(h.size());
  result.params = InitializeParams(result.spec, DeriveSeed(config.seed, 1));
  AdamState adam = AdamState::For(result.params);
  const AdamConfig adam_config{config.learning_rate, config.adam_beta1, config.adam_beta2,
                               config.adam_eps};
  std::vector<TypeId> eligible = TypesWithAncestors(h);
  if (eligible.empty()) throw std::invalid_argument("hierarchy has no parent links");
  Rng rng(DeriveSeed(config.seed, 4));
  for (size_t s = 0; s < steps; ++s) {
    const auto batch = SampleStructureBatch(h, eligible, config.batch_size_structure, rng);
    const GradientResult step = Backward(result.params, result.spec, {}, batch, 1.0);
    AdamStep(result.params, step.gradients, adam, adam_config);
    result.losses.push_back(step.loss.structure);
  }
  return result;
}

}  // namespace hiertype
