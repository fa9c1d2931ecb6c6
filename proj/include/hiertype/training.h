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

// Losses, hand-derived gradients, optimization and the training loop.
//
// For a minibatch of mentions with gold type sets,
//
//   L_typing = 1/|B1| sum_m [ sum_{t in gold} -score(m in t)
//                             + sum_{t not in gold} penalty(m not in t) ]
//
// and for a minibatch of (type, ancestor set) pairs,
//
//   L_structure = 1/|B2| sum_t [ sum_{a in anc(t)} -score(t in a)
//                                + sum_{u not in anc(t), u != t} penalty(t not in u) ]
//
// Negatives are summed over every type, not sampled. The optimized
// objective is L_typing + lambda * L_structure.

#ifndef HIERTYPE_TRAINING_H_
#define HIERTYPE_TRAINING_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hiertype/corpus.h"
#include "hiertype/eval.h"
#include "hiertype/hierarchy.h"
#include "hiertype/model.h"

namespace hiertype {

struct TrainConfig {
  size_t batch_size_typing = 32;
  size_t batch_size_structure = 128;
  double structure_weight = 0.5;  // lambda
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double dropout_p = 0.5;
  double margin = 1.0;  // order-embedding hinge, both scorers
  int max_epochs = 50;
  int patience = 5;
  uint64_t seed = 13;
  ScoreFunction mention_score_kind = ScoreFunction::kBilinear;
  std::optional<ScoreFunction> structure_score_kind;

  size_t dim = 300;
  size_t filter_width = 5;
  EncoderMode encoder_mode = EncoderMode::kCnnPlusMention;
  bool share_bilinear = false;
  std::string embeddings;  // path of the word vector file

  // Throws std::invalid_argument.
  void Validate() const;

  ModelSpec MakeModelSpec(size_t num_types) const;
};

// Sets one field from its key=value spelling (keys are the field names).
// Throws std::invalid_argument for unknown keys or bad values.
void SetConfigValue(TrainConfig &config, std::string_view key, std::string_view value);

// Flat `key=value` lines; '#' comments and blank lines ignored.
TrainConfig ParseTrainConfig(std::istream &in, const std::string &source);
TrainConfig LoadTrainConfig(const std::filesystem::path &path);
void WriteTrainConfig(const TrainConfig &config, std::ostream &out);

// One mention ready for the encoder.
struct TypingInstance {
  const Tensor *words = nullptr;  // n x d
  size_t span_first = 0;
  size_t span_last = 0;
  std::span<const TypeId> gold;   // ascending, non-empty
  const DropoutMasks *dropout = nullptr;
};

struct StructureInstance {
  TypeId type;
  std::span<const TypeId> ancestors;  // ascending, non-empty
};

// Throws std::invalid_argument for an empty batch or empty gold set.
double TypingLoss(const ModelParams &params, const ModelSpec &spec,
                  std::span<const TypingInstance> batch);
double StructureLoss(const ModelParams &params, const ModelSpec &spec,
                     std::span<const StructureInstance> batch);

inline double CombinedLoss(double typing, double structure, double lambda) {
  return typing + lambda * structure;
}

struct LossEvaluation {
  double typing = 0.0;
  double structure = 0.0;
  double combined = 0.0;
  // Hash of every branch taken by a piecewise function (ReLU signs, max-pool
  // winners, hinge and clamp activity). Equal signatures mean the loss is
  // evaluated on the same smooth piece.
  uint64_t branch_signature = 0;
};

struct GradientResult {
  LossEvaluation loss;
  ModelParams gradients;
};

// Loss of typing + lambda * structure. Either batch may be empty, not both.
LossEvaluation EvaluateLoss(const ModelParams &params, const ModelSpec &spec,
                            std::span<const TypingInstance> typing,
                            std::span<const StructureInstance> structure,
                            double lambda);

// Loss and its exact gradient with respect to every parameter tensor.
// Subgradients: max-pool routes to the first maximizing window, ReLU and
// hinges have slope 0 at the kink, a clamped sigmoid has slope 0.
GradientResult Backward(const ModelParams &params, const ModelSpec &spec,
                        std::span<const TypingInstance> typing,
                        std::span<const StructureInstance> structure,
                        double lambda);

// --- finite differences ----------------------------------------------------

struct LossSample {
  double loss = 0.0;
  uint64_t branch_signature = 0;
};

struct GradientCheckTensor {
  std::string name;
  std::span<double> values;          // perturbed in place, then restored
  std::span<const double> analytic;  // gradient to verify
};

struct FiniteDifferenceReport {
  double max_relative_error = 0.0;
  size_t compared = 0;
  // Coordinates whose perturbation crossed a kink.
  size_t excluded = 0;
  std::string worst_tensor;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Central differences (f(x+e) - f(x-e)) / 2e on up to samples_per_tensor
// coordinates of each tensor (all of them for small tensors; otherwise a
// seeded random subset). Relative error is |a - n| / max(1e-8, |a| + |n|).
// A coordinate is excluded when either perturbed evaluation reports a
// different branch signature than the unperturbed one. Throws
// std::invalid_argument for epsilon outside [1e-7, 1e-3] and DataError for
// a non-finite loss.
FiniteDifferenceReport FiniteDifferenceCheck(const std::function<LossSample()> &loss_fn,
                                             std::span<const GradientCheckTensor> tensors,
                                             double epsilon, size_t samples_per_tensor,
                                             uint64_t seed);

// Checks Backward on one batch against finite differences of EvaluateLoss.
FiniteDifferenceReport CheckGradients(ModelParams &params, const ModelSpec &spec,
                                      std::span<const TypingInstance> typing,
                                      std::span<const StructureInstance> structure,
                                      double lambda, double epsilon,
                                      size_t samples_per_tensor, uint64_t seed);

// --- initialization and optimization ---------------------------------------

// sqrt(6 / (fan_in + fan_out)); [r, c] has fan_in c and fan_out r,
// [k, r, c] has fan_in k*c and fan_out k*r.
double GlorotBound(const std::vector<size_t> &shape);
Tensor GlorotUniform(std::vector<size_t> shape, uint64_t seed);

// Weights Glorot-uniform, biases zero.
ModelParams InitializeParams(const ModelSpec &spec, uint64_t seed);

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ModelParams first_moment;
  ModelParams second_moment;
  uint64_t step = 0;

  static AdamState For(const ModelParams &params);
};

// Bias-corrected Adam update. Throws DataError naming the tensor when a
// gradient is not finite; params and state are untouched in that case.
void AdamStep(ModelParams &params, const ModelParams &grads, AdamState &state,
              const AdamConfig &config);

// --- training loop ----------------------------------------------------------

struct PreparedExample {
  Tensor words;
  size_t span_first = 0;
  size_t span_last = 0;
  std::vector<TypeId> gold;
};

std::vector<PreparedExample> PrepareExamples(std::span<const LabeledExample> examples,
                                             const EmbeddingTable &emb);

// Encodes each example without dropout, ranks all types and scores the
// ranking against the gold set.
EvalReport EvaluateModel(const ModelParams &params, const ModelSpec &spec,
                         std::span<const PreparedExample> examples);

// Stop after `patience` consecutive epochs without a strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience);

  // Returns true when metric is a new best.
  bool Update(double metric);
  bool ShouldStop() const { return since_best_ >= patience_; }

  double best() const { return best_; }
  int best_epoch() const { return best_epoch_; }

 private:
  int patience_;
  int epoch_ = 0;
  int best_epoch_ = 0;
  int since_best_ = 0;
  double best_ = 0.0;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_map = 0.0;
};

// `epoch<TAB>train_loss<TAB>dev_map` per epoch.
void WriteMetricHistory(std::span<const EpochRecord> history, std::ostream &out);

struct TrainResult {
  ModelSpec spec;
  ModelParams params;  // best dev epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_dev_map = 0.0;
  size_t typing_batches = 0;
  size_t structure_batches = 0;
};

// Each step takes one typing batch and, when the structure loss is on
// (lambda > 0 and a structure scorer is configured), one structure batch
// of types drawn without replacement from the types with ancestors. One
// Adam step is taken on the combined gradient.
TrainResult Train(std::span<const PreparedExample> train,
                  std::span<const PreparedExample> dev, const TypeHierarchy &h,
                  const TrainConfig &config);

struct StructureTrainResult {
  ModelSpec spec;
  ModelParams params;
  std::vector<double> losses;  // per step
};

// Fits the type embeddings to the hierarchy with the structure loss alone.
// Requires config.structure_score_kind.
StructureTrainResult TrainStructureOnly(const TypeHierarchy &h, const TrainConfig &config,
                                        size_t steps);

}  // namespace hiertype

#endif  // HIERTYPE_TRAINING_H_
